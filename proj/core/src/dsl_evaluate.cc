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

#include "semprobe/dsl_evaluate.h"

#include <algorithm>
#include <cctype>
#include <optional>
#include <utility>

#include "absl/strings/str_cat.h"
#include "semprobe/dsl_normalize.h"

namespace semprobe {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string Squash(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

// Present values of `pattern` inside the IE instance at `instance`.
std::vector<BoundValue> ValuesIn(const DecodedMessage& msg,
                                 const FieldPath& pattern,
                                 const FieldPath* instance) {
  std::vector<BoundValue> out;
  for (const LeafEntry& e : msg.flat()) {
    if (!e.present || e.pattern != pattern) continue;
    if (instance != nullptr && e.ie_instance != *instance) continue;
    out.push_back(BoundValue{e.path, *e.value});
  }
  return out;
}

std::vector<FieldPath> DistinctFields(const ConstraintRule& rule) {
  std::vector<FieldPath> out;
  for (const FieldPath& f : rule.Fields()) {
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  }
  return out;
}

std::optional<Rational> LinValue(const LinExpr& e, const RuleEnv& env,
                                 std::vector<BoundValue>& witness,
                                 std::string& missing) {
  if (!e.field) return e.offset;
  auto it = env.values.find(*e.field);
  if (it == env.values.end()) {
    missing = e.field->ToString();
    return std::nullopt;
  }
  witness.push_back(it->second);
  std::optional<int64_t> n = ScalarNumber(it->second.value);
  if (!n) {
    missing = absl::StrCat(e.field->ToString(), " has no numeric value");
    return std::nullopt;
  }
  return e.coeff * Rational(*n) + e.offset;
}

bool Compare(RelOp op, const Rational& l, const Rational& r) {
  switch (op) {
    case RelOp::kLt:
      return l < r;
    case RelOp::kLe:
      return l <= r;
    case RelOp::kEq:
      return l == r;
    case RelOp::kGe:
      return l >= r;
    case RelOp::kGt:
      return l > r;
  }
  return false;
}

int64_t FloorMod(int64_t v, int64_t m) {
  int64_t r = v % m;
  return r < 0 ? r + m : r;
}

Verdict Violation(const Atom& atom, bool strip_ie,
                  std::vector<BoundValue> witness) {
  Verdict v;
  v.kind = Verdict::Kind::kViolated;
  v.atom = atom.ToString(strip_ie);
  v.witness = std::move(witness);
  return v;
}

Verdict MatchExistential(const ConstraintRule& rule,
                         const DecodedMessage& msg) {
  const Atom& atom = rule.consequent;
  const bool def_a = IsDefiningIdentifier(atom.field);
  const bool def_b = IsDefiningIdentifier(atom.field2);
  const std::vector<BoundValue> a = ValuesIn(msg, atom.field, nullptr);
  const std::vector<BoundValue> b = ValuesIn(msg, atom.field2, nullptr);
  if (a.empty() || b.empty()) {
    return Verdict::Inapplicable(absl::StrCat(
        "no values for ", (a.empty() ? atom.field : atom.field2).ToString()));
  }
  auto check =
      [&](const std::vector<BoundValue>& refs,
          const std::vector<BoundValue>& defs) -> std::optional<Verdict> {
    for (const BoundValue& r : refs) {
      bool found =
          std::any_of(defs.begin(), defs.end(),
                      [&](const BoundValue& d) { return d.value == r.value; });
      if (!found) {
        std::vector<BoundValue> witness = {r};
        witness.insert(witness.end(), defs.begin(), defs.end());
        return Violation(atom, false, std::move(witness));
      }
    }
    return std::nullopt;
  };
  std::optional<Verdict> v;
  if (def_b && !def_a) {
    v = check(a, b);
  } else if (def_a && !def_b) {
    v = check(b, a);
  } else {
    v = check(a, b);
    if (!v) v = check(b, a);
  }
  if (v) return *v;
  return Verdict::Satisfied();
}

}  // namespace

std::string_view VerdictKindName(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::kSatisfied:
      return "Satisfied";
    case Verdict::Kind::kViolated:
      return "Violated";
    case Verdict::Kind::kInapplicable:
      return "Inapplicable";
  }
  return "";
}

ordered_json Verdict::ToJson() const {
  ordered_json out;
  out["verdict"] = std::string(VerdictKindName(kind));
  if (!atom.empty()) out["atom"] = atom;
  if (!witness.empty()) {
    ordered_json w = ordered_json::array();
    for (const BoundValue& b : witness) {
      w.push_back(
          {{"path", b.path.ToString()}, {"value", ScalarToJson(b.value)}});
    }
    out["witness"] = std::move(w);
  }
  if (!reason.empty()) out["reason"] = reason;
  return out;
}

bool IsDefiningIdentifier(const FieldPath& pattern) {
  if (pattern.size() < 2) return false;
  std::string field = Squash(pattern.back().name);
  if (field.size() > 2 && field.substr(field.size() - 2) == "id") {
    field.resize(field.size() - 2);
  }
  return field == Squash(pattern.segments().front().name);
}

std::vector<RuleEnv> Environments(const ConstraintRule& rule,
                                  const DecodedMessage& msg) {
  const std::vector<FieldPath> fields = DistinctFields(rule);
  std::vector<std::vector<FieldPath>> per_ie;
  for (const std::string& ie : rule.scope.ies) {
    per_ie.push_back(msg.InstancesOf(ie));
  }
  std::vector<std::vector<FieldPath>> combos = {{}};
  for (const std::vector<FieldPath>& instances : per_ie) {
    std::vector<std::vector<FieldPath>> next;
    for (const std::vector<FieldPath>& c : combos) {
      for (const FieldPath& inst : instances) {
        next.push_back(c);
        next.back().push_back(inst);
      }
    }
    combos = std::move(next);
  }
  std::vector<RuleEnv> out;
  for (const std::vector<FieldPath>& combo : combos) {
    std::vector<RuleEnv> envs = {RuleEnv{combo, {}}};
    for (const FieldPath& f : fields) {
      const std::string& ie = f.segments().front().name;
      auto pos = std::find(rule.scope.ies.begin(), rule.scope.ies.end(), ie);
      if (pos == rule.scope.ies.end()) continue;
      const FieldPath& inst = combo[pos - rule.scope.ies.begin()];
      std::vector<BoundValue> values = ValuesIn(msg, f, &inst);
      if (values.empty()) continue;
      std::vector<RuleEnv> next;
      for (const RuleEnv& e : envs) {
        for (const BoundValue& v : values) {
          next.push_back(e);
          next.back().values.emplace(f, v);
        }
      }
      envs = std::move(next);
    }
    for (RuleEnv& e : envs) out.push_back(std::move(e));
  }
  return out;
}

Verdict EvaluateAtom(const Atom& atom, const RuleEnv& env, bool strip_ie) {
  std::vector<BoundValue> witness;
  auto get = [&](const FieldPath& f) -> const BoundValue* {
    auto it = env.values.find(f);
    if (it == env.values.end()) return nullptr;
    witness.push_back(it->second);
    return &it->second;
  };
  auto absent = [](const FieldPath& f) {
    return Verdict::Inapplicable(absl::StrCat("absent: ", f.ToString()));
  };
  bool holds = false;
  Rational margin = 0;
  switch (atom.kind) {
    case AtomKind::kEq:
    case AtomKind::kNe:
    case AtomKind::kIn: {
      const BoundValue* v = get(atom.field);
      if (v == nullptr) return absent(atom.field);
      holds = std::find(atom.literals.begin(), atom.literals.end(), v->value) !=
              atom.literals.end();
      if (atom.kind == AtomKind::kNe) holds = !holds;
      break;
    }
    case AtomKind::kMap: {
      const BoundValue* from = get(atom.field);
      if (from == nullptr) return absent(atom.field);
      const BoundValue* to = get(atom.field2);
      if (to == nullptr) return absent(atom.field2);
      auto row =
          std::find_if(atom.table.begin(), atom.table.end(),
                       [&](const auto& kv) { return kv.first == from->value; });
      if (row == atom.table.end()) {
        return Verdict::Inapplicable(absl::StrCat(atom.field.ToString(), "=",
                                                  ScalarToString(from->value),
                                                  " is outside the MAP table"));
      }
      holds = to->value == row->second;
      break;
    }
    case AtomKind::kMod: {
      const BoundValue* v = get(atom.field);
      if (v == nullptr) return absent(atom.field);
      std::optional<int64_t> n = ScalarNumber(v->value);
      if (!n) return Verdict::Inapplicable("MOD over a non-numeric value");
      holds = FloorMod(*n, atom.modulus) == atom.residue;
      break;
    }
    case AtomKind::kMatch: {
      const BoundValue* a = get(atom.field);
      if (a == nullptr) return absent(atom.field);
      const BoundValue* b = get(atom.field2);
      if (b == nullptr) return absent(atom.field2);
      holds = a->value == b->value;
      break;
    }
    case AtomKind::kRel: {
      std::string missing;
      std::optional<Rational> l = LinValue(atom.lhs, env, witness, missing);
      if (!l) return Verdict::Inapplicable(absl::StrCat("absent: ", missing));
      std::optional<Rational> r = LinValue(atom.rhs, env, witness, missing);
      if (!r) return Verdict::Inapplicable(absl::StrCat("absent: ", missing));
      holds = Compare(atom.op, *l, *r);
      margin = (*l - *r).Abs();
      break;
    }
  }
  if (holds) return Verdict::Satisfied();
  Verdict v = Violation(atom, strip_ie, std::move(witness));
  v.margin = margin;
  return v;
}

Verdict EvaluateClause(const ConstraintRule& rule, const RuleEnv& env) {
  const bool strip = !rule.scope.inter;
  for (const Atom& pre : rule.preconditions) {
    Verdict p = EvaluateAtom(pre, env, strip);
    if (!p.satisfied()) {
      return Verdict::Satisfied(
          absl::StrCat("vacuous: ", pre.ToString(strip), " does not hold"));
    }
  }
  return EvaluateAtom(rule.consequent, env, strip);
}

Verdict Evaluate(const ConstraintRule& rule, const DecodedMessage& msg) {
  if (rule.scope.inter && !rule.is_implies() &&
      rule.consequent.kind == AtomKind::kMatch) {
    return MatchExistential(rule, msg);
  }
  const std::vector<RuleEnv> envs = Environments(rule, msg);
  if (envs.empty()) {
    return Verdict::Inapplicable(
        absl::StrCat("no instance of ", rule.scope.ToString()));
  }
  std::optional<Verdict> first_satisfied;
  std::optional<Verdict> first_inapplicable;
  for (const RuleEnv& env : envs) {
    Verdict v = EvaluateClause(rule, env);
    if (v.violated()) return v;
    if (v.satisfied() && !first_satisfied) first_satisfied = std::move(v);
    if (v.inapplicable() && !first_inapplicable)
      first_inapplicable = std::move(v);
  }
  if (first_satisfied) return *first_satisfied;
  return *first_inapplicable;
}

}  // namespace semprobe
