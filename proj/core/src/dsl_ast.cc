// Copyright 2026 The semprobe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "semprobe/dsl_ast.h"

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"

namespace semprobe {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string PathText(const FieldPath& p, bool strip_ie) {
  if (strip_ie && p.size() > 1) return p.Suffix(1).ToString();
  return p.ToString();
}

std::string LinText(const LinExpr& e, bool strip_ie) {
  if (e.is_constant()) return e.offset.ToString();
  std::string out;
  const std::string name = PathText(*e.field, strip_ie);
  if (e.coeff == Rational(1)) {
    out = name;
  } else if (e.coeff == Rational(-1)) {
    out = absl::StrCat("-", name);
  } else {
    out = absl::StrCat(e.coeff.ToString(), "*", name);
  }
  if (e.offset > Rational(0)) {
    absl::StrAppend(&out, " + ", e.offset.ToString());
  } else if (e.offset < Rational(0)) {
    absl::StrAppend(&out, " - ", (-e.offset).ToString());
  }
  return out;
}

ordered_json LinToJson(const LinExpr& e) {
  ordered_json out;
  out["coeff"] = e.coeff.ToString();
  out["field"] = e.field ? ordered_json(e.field->ToString()) : ordered_json();
  out["offset"] = e.offset.ToString();
  return out;
}

absl::StatusOr<LinExpr> LinFromJson(const json& j) {
  LinExpr e;
  absl::StatusOr<Rational> coeff =
      Rational::Parse(j.at("coeff").get<std::string>());
  if (!coeff.ok()) return coeff.status();
  absl::StatusOr<Rational> offset =
      Rational::Parse(j.at("offset").get<std::string>());
  if (!offset.ok()) return offset.status();
  e.coeff = *coeff;
  e.offset = *offset;
  if (j.contains("field") && !j["field"].is_null()) {
    absl::StatusOr<FieldPath> f =
        FieldPath::Parse(j["field"].get<std::string>());
    if (!f.ok()) return f.status();
    e.field = *std::move(f);
  } else {
    e.coeff = 0;
  }
  return e;
}

absl::StatusOr<FieldPath> PathFromJson(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    return absl::InvalidArgumentError(absl::StrCat("atom needs '", key, "'"));
  }
  return FieldPath::Parse(j[key].get<std::string>());
}

}  // namespace

std::string_view AtomKindName(AtomKind kind) {
  switch (kind) {
    case AtomKind::kEq:
      return "EQ";
    case AtomKind::kNe:
      return "NE";
    case AtomKind::kIn:
      return "IN";
    case AtomKind::kMap:
      return "MAP";
    case AtomKind::kMod:
      return "MOD";
    case AtomKind::kMatch:
      return "MATCH";
    case AtomKind::kRel:
      return "REL";
  }
  return "";
}

std::string_view RelOpName(RelOp op) {
  switch (op) {
    case RelOp::kLt:
      return "LT";
    case RelOp::kLe:
      return "LE";
    case RelOp::kEq:
      return "EQ";
    case RelOp::kGe:
      return "GE";
    case RelOp::kGt:
      return "GT";
  }
  return "";
}

RelOp FlipRelOp(RelOp op) {
  switch (op) {
    case RelOp::kLt:
      return RelOp::kGt;
    case RelOp::kLe:
      return RelOp::kGe;
    case RelOp::kEq:
      return RelOp::kEq;
    case RelOp::kGe:
      return RelOp::kLe;
    case RelOp::kGt:
      return RelOp::kLt;
  }
  return op;
}

std::string LinExpr::ToString() const { return LinText(*this, false); }

Atom Atom::Eq(FieldPath f, Scalar lit) {
  Atom a;
  a.kind = AtomKind::kEq;
  a.field = std::move(f);
  a.literals = {std::move(lit)};
  return a;
}

Atom Atom::Ne(FieldPath f, Scalar lit) {
  Atom a = Eq(std::move(f), std::move(lit));
  a.kind = AtomKind::kNe;
  return a;
}

Atom Atom::In(FieldPath f, std::vector<Scalar> set) {
  Atom a;
  a.kind = AtomKind::kIn;
  a.field = std::move(f);
  a.literals = std::move(set);
  return a;
}

Atom Atom::Map(FieldPath from, FieldPath to,
               std::vector<std::pair<Scalar, Scalar>> table) {
  Atom a;
  a.kind = AtomKind::kMap;
  a.field = std::move(from);
  a.field2 = std::move(to);
  a.table = std::move(table);
  return a;
}

Atom Atom::Mod(FieldPath f, int64_t modulus, int64_t residue) {
  Atom a;
  a.kind = AtomKind::kMod;
  a.field = std::move(f);
  a.modulus = modulus;
  a.residue = residue;
  return a;
}

Atom Atom::Match(FieldPath x, FieldPath y) {
  Atom a;
  a.kind = AtomKind::kMatch;
  a.field = std::move(x);
  a.field2 = std::move(y);
  return a;
}

Atom Atom::Rel(RelOp op, LinExpr lhs, LinExpr rhs) {
  Atom a;
  a.kind = AtomKind::kRel;
  a.op = op;
  a.lhs = std::move(lhs);
  a.rhs = std::move(rhs);
  return a;
}

std::vector<FieldPath> Atom::Fields() const {
  switch (kind) {
    case AtomKind::kEq:
    case AtomKind::kNe:
    case AtomKind::kIn:
    case AtomKind::kMod:
      return {field};
    case AtomKind::kMap:
    case AtomKind::kMatch:
      return {field, field2};
    case AtomKind::kRel: {
      std::vector<FieldPath> out;
      if (lhs.field) out.push_back(*lhs.field);
      if (rhs.field) out.push_back(*rhs.field);
      return out;
    }
  }
  return {};
}

std::string LiteralToString(const Scalar& s) {
  if (const int64_t* i = std::get_if<int64_t>(&s)) return absl::StrCat(*i);
  if (const bool* b = std::get_if<bool>(&s)) return *b ? "TRUE" : "FALSE";
  return absl::StrCat("'", std::get<std::string>(s), "'");
}

std::string Atom::ToString(bool strip_ie) const {
  const std::string f = PathText(field, strip_ie);
  switch (kind) {
    case AtomKind::kEq:
    case AtomKind::kNe:
      return absl::StrCat(std::string(AtomKindName(kind)), "(", f, ", ",
                          LiteralToString(literals.front()), ")");
    case AtomKind::kIn: {
      std::vector<std::string> parts;
      for (const Scalar& s : literals) parts.push_back(LiteralToString(s));
      return absl::StrCat("IN(", f, ", {", absl::StrJoin(parts, ", "), "})");
    }
    case AtomKind::kMap: {
      std::vector<std::string> parts;
      for (const auto& [k, v] : table) {
        parts.push_back(
            absl::StrCat(LiteralToString(k), " -> ", LiteralToString(v)));
      }
      return absl::StrCat("MAP(", f, ", ", PathText(field2, strip_ie), ", {",
                          absl::StrJoin(parts, ", "), "})");
    }
    case AtomKind::kMod:
      return absl::StrCat("MOD(", f, ", ", modulus, ", ", residue, ")");
    case AtomKind::kMatch:
      return absl::StrCat("MATCH(", f, ", ", PathText(field2, strip_ie), ")");
    case AtomKind::kRel:
      return absl::StrCat(std::string(RelOpName(op)), "(",
                          LinText(lhs, strip_ie), ", ", LinText(rhs, strip_ie),
                          ")");
  }
  return "";
}

std::string Scope::ToString() const {
  return absl::StrCat(inter ? "INTER(" : "INTRA(", absl::StrJoin(ies, ", "),
                      ")");
}

std::string_view FamilyName(Family f) {
  return f == Family::kRangeAlignment ? "RangeAlignment" : "ValueDependency";
}

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kSchema:
      return "schema";
    case Provenance::kMined:
      return "mined";
    case Provenance::kInduced:
      return "induced";
  }
  return "";
}

absl::StatusOr<Family> ParseFamily(std::string_view text) {
  if (text == "ValueDependency") return Family::kValueDependency;
  if (text == "RangeAlignment") return Family::kRangeAlignment;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown family '", std::string(text), "'"));
}

absl::StatusOr<Provenance> ParseProvenance(std::string_view text) {
  if (text == "schema") return Provenance::kSchema;
  if (text == "mined") return Provenance::kMined;
  if (text == "induced") return Provenance::kInduced;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown provenance '", std::string(text), "'"));
}

std::vector<FieldPath> ConstraintRule::Fields() const {
  std::vector<FieldPath> out;
  for (const Atom& a : preconditions) {
    for (FieldPath& f : a.Fields()) out.push_back(std::move(f));
  }
  for (FieldPath& f : consequent.Fields()) out.push_back(std::move(f));
  return out;
}

std::string ConstraintRule::ClauseText() const {
  const bool strip = !scope.inter;
  if (!is_implies()) return consequent.ToString(strip);
  std::vector<std::string> pre;
  for (const Atom& a : preconditions) pre.push_back(a.ToString(strip));
  return absl::StrCat("IMPLIES(", absl::StrJoin(pre, ", "), "; ",
                      consequent.ToString(strip), ")");
}

std::string ConstraintRule::ToText() const {
  return absl::StrCat(scope.ToString(), ": ", ClauseText());
}

std::string RuleIdForText(std::string_view canonical_text) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical_text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return absl::StrFormat("dsl-%016x", h);
}

ordered_json AtomToJson(const Atom& atom) {
  ordered_json out;
  out["op"] =
      std::string(atom.kind == AtomKind::kRel ? RelOpName(atom.op)
                                              : AtomKindName(atom.kind));
  switch (atom.kind) {
    case AtomKind::kEq:
    case AtomKind::kNe:
      out["field"] = atom.field.ToString();
      out["value"] = ScalarToJson(atom.literals.front());
      break;
    case AtomKind::kIn: {
      out["field"] = atom.field.ToString();
      ordered_json set = ordered_json::array();
      for (const Scalar& s : atom.literals) set.push_back(ScalarToJson(s));
      out["set"] = std::move(set);
      break;
    }
    case AtomKind::kMap: {
      out["from"] = atom.field.ToString();
      out["to"] = atom.field2.ToString();
      ordered_json table = ordered_json::array();
      for (const auto& [k, v] : atom.table) {
        table.push_back(
            ordered_json::array({ScalarToJson(k), ScalarToJson(v)}));
      }
      out["table"] = std::move(table);
      break;
    }
    case AtomKind::kMod:
      out["field"] = atom.field.ToString();
      out["modulus"] = atom.modulus;
      out["residue"] = atom.residue;
      break;
    case AtomKind::kMatch:
      out["fields"] = {atom.field.ToString(), atom.field2.ToString()};
      break;
    case AtomKind::kRel:
      out["rel"] = true;
      out["lhs"] = LinToJson(atom.lhs);
      out["rhs"] = LinToJson(atom.rhs);
      break;
  }
  return out;
}

absl::StatusOr<Atom> AtomFromJson(const json& j) {
  try {
    const std::string op = j.at("op").get<std::string>();
    const bool rel = j.value("rel", false) || op == "LT" || op == "LE" ||
                     op == "GE" || op == "GT";
    if (rel) {
      RelOp rop = RelOp::kEq;
      if (op == "LT") rop = RelOp::kLt;
      if (op == "LE") rop = RelOp::kLe;
      if (op == "GE") rop = RelOp::kGe;
      if (op == "GT") rop = RelOp::kGt;
      absl::StatusOr<LinExpr> lhs = LinFromJson(j.at("lhs"));
      if (!lhs.ok()) return lhs.status();
      absl::StatusOr<LinExpr> rhs = LinFromJson(j.at("rhs"));
      if (!rhs.ok()) return rhs.status();
      return Atom::Rel(rop, *std::move(lhs), *std::move(rhs));
    }
    if (op == "EQ" || op == "NE" || op == "IN" || op == "MOD") {
      absl::StatusOr<FieldPath> f = PathFromJson(j, "field");
      if (!f.ok()) return f.status();
      if (op == "MOD") {
        return Atom::Mod(*f, j.at("modulus").get<int64_t>(),
                         j.at("residue").get<int64_t>());
      }
      if (op == "IN") {
        std::vector<Scalar> set;
        for (const json& v : j.at("set")) {
          absl::StatusOr<Scalar> s = ScalarFromJson(v);
          if (!s.ok()) return s.status();
          set.push_back(*std::move(s));
        }
        return Atom::In(*f, std::move(set));
      }
      absl::StatusOr<Scalar> lit = ScalarFromJson(j.at("value"));
      if (!lit.ok()) return lit.status();
      return op == "EQ" ? Atom::Eq(*f, *lit) : Atom::Ne(*f, *lit);
    }
    if (op == "MAP") {
      absl::StatusOr<FieldPath> from = PathFromJson(j, "from");
      if (!from.ok()) return from.status();
      absl::StatusOr<FieldPath> to = PathFromJson(j, "to");
      if (!to.ok()) return to.status();
      std::vector<std::pair<Scalar, Scalar>> table;
      for (const json& row : j.at("table")) {
        absl::StatusOr<Scalar> k = ScalarFromJson(row.at(0));
        if (!k.ok()) return k.status();
        absl::StatusOr<Scalar> v = ScalarFromJson(row.at(1));
        if (!v.ok()) return v.status();
        table.emplace_back(*std::move(k), *std::move(v));
      }
      return Atom::Map(*from, *to, std::move(table));
    }
    if (op == "MATCH") {
      const json& fields = j.at("fields");
      absl::StatusOr<FieldPath> a =
          FieldPath::Parse(fields.at(0).get<std::string>());
      if (!a.ok()) return a.status();
      absl::StatusOr<FieldPath> b =
          FieldPath::Parse(fields.at(1).get<std::string>());
      if (!b.ok()) return b.status();
      return Atom::Match(*a, *b);
    }
    return absl::InvalidArgumentError(
        absl::StrCat("unknown atom op '", op, "'"));
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed atom: ", e.what()));
  }
}

ordered_json RuleToJson(const ConstraintRule& rule) {
  ordered_json out;
  out["id"] = rule.id;
  out["text"] = rule.ToText();
  out["scope"] = {{"kind", rule.scope.inter ? "inter" : "intra"},
                  {"ies", rule.scope.ies}};
  out["family"] = std::string(FamilyName(rule.family));
  out["provenance"] = std::string(ProvenanceName(rule.provenance));
  ordered_json pre = ordered_json::array();
  for (const Atom& a : rule.preconditions) pre.push_back(AtomToJson(a));
  out["preconditions"] = std::move(pre);
  out["consequent"] = AtomToJson(rule.consequent);
  ordered_json cites = ordered_json::array();
  for (const Citation& c : rule.citations) {
    cites.push_back({{"doc", c.doc}, {"quote", c.quote}});
  }
  out["citations"] = std::move(cites);
  return out;
}

absl::StatusOr<ConstraintRule> RuleFromJson(const json& j) {
  try {
    ConstraintRule rule;
    rule.id = j.value("id", "");
    const json& scope = j.at("scope");
    rule.scope.inter = scope.at("kind").get<std::string>() == "inter";
    rule.scope.ies = scope.at("ies").get<std::vector<std::string>>();
    if (rule.scope.ies.size() != (rule.scope.inter ? 2u : 1u)) {
      return absl::InvalidArgumentError("scope has the wrong number of IEs");
    }
    absl::StatusOr<Family> family =
        ParseFamily(j.at("family").get<std::string>());
    if (!family.ok()) return family.status();
    rule.family = *family;
    absl::StatusOr<Provenance> prov =
        ParseProvenance(j.at("provenance").get<std::string>());
    if (!prov.ok()) return prov.status();
    rule.provenance = *prov;
    for (const json& a : j.value("preconditions", json::array())) {
      absl::StatusOr<Atom> atom = AtomFromJson(a);
      if (!atom.ok()) return atom.status();
      rule.preconditions.push_back(*std::move(atom));
    }
    absl::StatusOr<Atom> consequent = AtomFromJson(j.at("consequent"));
    if (!consequent.ok()) return consequent.status();
    rule.consequent = *std::move(consequent);
    for (const json& c : j.value("citations", json::array())) {
      rule.citations.push_back(Citation{c.at("doc").get<std::string>(),
                                        c.at("quote").get<std::string>()});
    }
    return rule;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed rule: ", e.what()));
  }
}

}  // namespace semprobe
