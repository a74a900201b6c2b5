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

#include "semprobe/dsl_normalize.h"

#include <algorithm>
#include <set>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "semprobe/dsl_parser.h"

namespace semprobe {
namespace {

// Segment names only; subscripts are ignored for suffix matching.
std::vector<std::string> Names(const FieldPath& p) {
  std::vector<std::string> out;
  for (const PathSegment& s : p.segments()) out.push_back(s.name);
  return out;
}

bool IsNameSuffix(const std::vector<std::string>& suffix,
                  const std::vector<std::string>& full) {
  if (suffix.empty() || suffix.size() > full.size()) return false;
  return std::equal(suffix.rbegin(), suffix.rend(), full.rbegin());
}

class Normalizer {
 public:
  Normalizer(const Schema& schema, const BindingHints& hints)
      : schema_(schema), hints_(hints) {}

  NormalizeResult Run(const ConstraintRule& input) {
    ConstraintRule rule = input;
    for (const std::string& ie : rule.scope.ies) {
      if (schema_.FindIe(ie) == nullptr) {
        return NormalizeResult::NoRule(absl::StrCat("unknown IE '", ie, "'"));
      }
    }
    if (rule.scope.inter && rule.scope.ies[0] == rule.scope.ies[1]) {
      return NormalizeResult::NoRule("INTER scope names the same IE twice");
    }
    scope_ = rule.scope;

    for (Atom& a : rule.preconditions) {
      if (!BindAtom(a)) return NormalizeResult::NoRule(error_);
    }
    if (!BindAtom(rule.consequent)) return NormalizeResult::NoRule(error_);

    // An INTER rule that only touches one IE is an INTRA rule.
    std::set<std::string> used;
    for (const FieldPath& f : rule.Fields()) used.insert(f.segments()[0].name);
    if (rule.scope.inter) {
      if (used.size() == 1) {
        rule.scope = Scope::Intra(*used.begin());
      } else {
        std::sort(rule.scope.ies.begin(), rule.scope.ies.end());
      }
    }

    for (Atom& a : rule.preconditions) {
      if (a.kind == AtomKind::kMatch) {
        return NormalizeResult::NoRule("MATCH cannot appear in a precondition");
      }
      if (!CanonAtom(a)) return NormalizeResult::NoRule(error_);
    }
    if (rule.is_implies() && rule.consequent.kind == AtomKind::kMatch) {
      return NormalizeResult::NoRule("MATCH must be the whole clause");
    }
    if (!CanonAtom(rule.consequent)) return NormalizeResult::NoRule(error_);

    if (rule.is_implies()) {
      const bool strip = !rule.scope.inter;
      std::sort(rule.preconditions.begin(), rule.preconditions.end(),
                [&](const Atom& x, const Atom& y) {
                  return x.ToString(strip) < y.ToString(strip);
                });
      rule.preconditions.erase(
          std::unique(rule.preconditions.begin(), rule.preconditions.end()),
          rule.preconditions.end());
      for (const Atom& p : rule.preconditions) {
        if (p == rule.consequent) {
          return NormalizeResult::NoRule("consequent repeats a precondition");
        }
      }
    }

    rule.family = rule.consequent.kind == AtomKind::kRel
                      ? Family::kRangeAlignment
                      : Family::kValueDependency;
    rule.id = RuleIdForText(rule.ToText());
    return NormalizeResult{std::move(rule), ""};
  }

 private:
  bool Fail(std::string why) {
    error_ = std::move(why);
    return false;
  }

  bool Bind(FieldPath& path) {
    FieldPath raw = path;
    if (raw.size() == 1) {
      auto hint = hints_.find(raw.segments()[0].name);
      if (hint != hints_.end()) {
        absl::StatusOr<FieldPath> p = FieldPath::Parse(hint->second);
        if (!p.ok())
          return Fail(absl::StrCat("bad binding hint '", hint->second, "'"));
        raw = *std::move(p);
      }
    }
    std::vector<std::string> ies = scope_.ies;
    FieldPath rest = raw;
    const std::string& head = raw.segments()[0].name;
    if (raw.size() > 1 && std::find(scope_.ies.begin(), scope_.ies.end(),
                                    head) != scope_.ies.end()) {
      ies = {head};
      rest = raw.Suffix(1);
    } else if (raw.size() > 1 && schema_.FindIe(head) != nullptr) {
      return Fail(absl::StrCat("field '", raw.ToString(),
                               "' lies outside scope ", scope_.ToString()));
    }
    const std::vector<std::string> want = Names(rest);
    std::vector<FieldPath> hits;
    for (const std::string& ie : ies) {
      for (const LeafPattern& lp : schema_.LeafPatterns(ie)) {
        if (IsNameSuffix(want, Names(lp.relative))) {
          hits.push_back(lp.Qualified());
          kinds_[lp.Qualified()] = lp.kind;
        }
      }
    }
    if (hits.empty()) {
      return Fail(absl::StrCat("cannot bind '", path.ToString(), "' in ",
                               scope_.ToString()));
    }
    if (hits.size() > 1) {
      std::vector<std::string> names;
      for (const FieldPath& h : hits) names.push_back(h.ToString());
      return Fail(absl::StrCat("ambiguous field '", path.ToString(),
                               "': ", absl::StrJoin(names, ", ")));
    }
    path = hits.front();
    return true;
  }

  bool BindAtom(Atom& a) {
    switch (a.kind) {
      case AtomKind::kEq:
      case AtomKind::kNe:
      case AtomKind::kIn:
      case AtomKind::kMod:
        return Bind(a.field);
      case AtomKind::kMap:
      case AtomKind::kMatch:
        return Bind(a.field) && Bind(a.field2);
      case AtomKind::kRel:
        if (a.lhs.field && !Bind(*a.lhs.field)) return false;
        if (a.rhs.field && !Bind(*a.rhs.field)) return false;
        return true;
    }
    return false;
  }

  const FieldKind& KindOf(const FieldPath& p) const { return *kinds_.at(p); }

  bool Coerce(const FieldPath& f, Scalar& lit) {
    std::optional<Scalar> c = CoerceLiteral(KindOf(f), lit);
    if (!c) {
      return Fail(absl::StrCat("literal ", LiteralToString(lit),
                               " is not admissible for ", f.ToString(), " ",
                               DomainDescriptor::Of(KindOf(f)).ToString()));
    }
    lit = *std::move(c);
    return true;
  }

  bool SortLiterals(const FieldKind& kind, std::vector<Scalar>& lits) {
    std::sort(lits.begin(), lits.end(), [&](const Scalar& x, const Scalar& y) {
      return DomainLess(kind, x, y);
    });
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    return true;
  }

  bool CanonAtom(Atom& a) {
    switch (a.kind) {
      case AtomKind::kEq:
      case AtomKind::kNe:
        return Coerce(a.field, a.literals.front());
      case AtomKind::kIn: {
        for (Scalar& s : a.literals) {
          if (!Coerce(a.field, s)) return false;
        }
        const FieldKind& kind = KindOf(a.field);
        SortLiterals(kind, a.literals);
        std::optional<std::vector<Scalar>> all = EnumerateDomain(kind, 1 << 16);
        if (all && all->size() == a.literals.size()) {
          return Fail(absl::StrCat("IN over the whole domain of ",
                                   a.field.ToString(), " is a tautology"));
        }
        if (a.literals.size() == 1) a = Atom::Eq(a.field, a.literals.front());
        return true;
      }
      case AtomKind::kMap: {
        if (a.field == a.field2) return Fail("MAP maps a field onto itself");
        for (auto& [k, v] : a.table) {
          if (!Coerce(a.field, k) || !Coerce(a.field2, v)) return false;
        }
        const FieldKind& kind = KindOf(a.field);
        std::sort(a.table.begin(), a.table.end(),
                  [&](const auto& x, const auto& y) {
                    return DomainLess(kind, x.first, y.first);
                  });
        for (size_t i = 1; i < a.table.size(); ++i) {
          if (a.table[i].first == a.table[i - 1].first) {
            return Fail("MAP keys must be distinct");
          }
        }
        return true;
      }
      case AtomKind::kMod:
        if (!IsArithmeticKind(KindOf(a.field))) {
          return Fail(absl::StrCat("MOD needs a numeric field, got ",
                                   a.field.ToString()));
        }
        if (a.modulus < 1 || a.residue < 0 || a.residue >= a.modulus) {
          return Fail("MOD needs modulus >= 1 and 0 <= residue < modulus");
        }
        if (a.modulus == 1) return Fail("MOD with modulus 1 is a tautology");
        return true;
      case AtomKind::kMatch: {
        if (a.field == a.field2)
          return Fail("MATCH compares a field with itself");
        const FieldKind& x = KindOf(a.field);
        const FieldKind& y = KindOf(a.field2);
        if (x.tag != y.tag || !x.IsScalar()) {
          return Fail("MATCH needs two identifier fields of the same type");
        }
        if (a.field2 < a.field) std::swap(a.field, a.field2);
        return true;
      }
      case AtomKind::kRel:
        return CanonRel(a);
    }
    return false;
  }

  bool CanonRel(Atom& a) {
    for (const LinExpr* e : {&a.lhs, &a.rhs}) {
      if (e->field && !IsArithmeticKind(KindOf(*e->field))) {
        return Fail(absl::StrCat("relation over non-numeric field ",
                                 e->field->ToString()));
      }
    }
    // sum(terms) op k
    std::map<FieldPath, Rational> terms;
    if (a.lhs.field) terms[*a.lhs.field] += a.lhs.coeff;
    if (a.rhs.field) terms[*a.rhs.field] -= a.rhs.coeff;
    for (auto it = terms.begin(); it != terms.end();) {
      it = it->second == Rational(0) ? terms.erase(it) : std::next(it);
    }
    const Rational k = a.rhs.offset - a.lhs.offset;
    RelOp op = a.op;
    if (terms.empty()) return Fail("relation between constants");
    if (terms.size() == 1) {
      const auto& [field, coeff] = *terms.begin();
      Rational bound = k / coeff;
      if (coeff < Rational(0)) op = FlipRelOp(op);
      switch (op) {
        case RelOp::kLt:
          a = Atom::Rel(RelOp::kLe, LinExpr::Of(field),
                        LinExpr::Constant(bound.Ceil() - 1));
          return true;
        case RelOp::kLe:
          a = Atom::Rel(RelOp::kLe, LinExpr::Of(field),
                        LinExpr::Constant(bound.Floor()));
          return true;
        case RelOp::kGt:
          a = Atom::Rel(RelOp::kGe, LinExpr::Of(field),
                        LinExpr::Constant(bound.Floor() + 1));
          return true;
        case RelOp::kGe:
          a = Atom::Rel(RelOp::kGe, LinExpr::Of(field),
                        LinExpr::Constant(bound.Ceil()));
          return true;
        case RelOp::kEq: {
          if (!bound.is_integer()) {
            return Fail(absl::StrCat(field.ToString(), " cannot equal ",
                                     bound.ToString()));
          }
          Atom eq = Atom::Eq(field, Scalar(bound.num()));
          if (!Coerce(field, eq.literals.front())) return false;
          a = std::move(eq);
          return true;
        }
      }
    }
    // alpha*p + beta*q op k  ->  p op' (-beta/alpha)*q + k/alpha
    auto it = terms.begin();
    const FieldPath p = it->first;
    const Rational alpha = it->second;
    ++it;
    const FieldPath q = it->first;
    const Rational beta = it->second;
    if (alpha < Rational(0)) op = FlipRelOp(op);
    const Rational c = -beta / alpha;
    Rational off = k / alpha;
    if (c.is_integer() && off.is_integer()) {
      if (op == RelOp::kLt) {
        op = RelOp::kLe;
        off -= 1;
      } else if (op == RelOp::kGt) {
        op = RelOp::kGe;
        off += 1;
      }
    }
    a = Atom::Rel(op, LinExpr::Of(p), LinExpr::Of(q, c, off));
    return true;
  }

  const Schema& schema_;
  const BindingHints& hints_;
  Scope scope_;
  std::map<FieldPath, const FieldKind*> kinds_;
  std::string error_;
};

}  // namespace

std::optional<int64_t> NumericLabelValue(std::string_view label) {
  if (label.size() < 2 || label[0] != 'n') return std::nullopt;
  int64_t v = 0;
  for (char c : label.substr(1)) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
    if (v > (int64_t{1} << 40)) return std::nullopt;
  }
  return v;
}

bool IsArithmeticKind(const FieldKind& kind) {
  if (kind.tag == FieldKind::Tag::kInt) return true;
  if (kind.tag != FieldKind::Tag::kEnum) return false;
  return std::all_of(
      kind.labels.begin(), kind.labels.end(),
      [](const std::string& l) { return NumericLabelValue(l).has_value(); });
}

std::optional<int64_t> ScalarNumber(const Scalar& s) {
  if (const int64_t* i = std::get_if<int64_t>(&s)) return *i;
  if (const std::string* l = std::get_if<std::string>(&s)) {
    return NumericLabelValue(*l);
  }
  return std::nullopt;
}

std::optional<Scalar> CoerceLiteral(const FieldKind& kind, const Scalar& lit) {
  switch (kind.tag) {
    case FieldKind::Tag::kInt:
      if (const int64_t* i = std::get_if<int64_t>(&lit)) {
        if (*i >= kind.lo && *i <= kind.hi) return lit;
      }
      return std::nullopt;
    case FieldKind::Tag::kBool:
      if (std::holds_alternative<bool>(lit)) return lit;
      return std::nullopt;
    case FieldKind::Tag::kEnum:
      if (const std::string* l = std::get_if<std::string>(&lit)) {
        if (kind.LabelIndex(*l)) return lit;
        return std::nullopt;
      }
      if (const int64_t* i = std::get_if<int64_t>(&lit)) {
        if (!IsArithmeticKind(kind)) return std::nullopt;
        std::string label = absl::StrCat("n", *i);
        if (kind.LabelIndex(label)) return Scalar(std::move(label));
      }
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

std::optional<std::vector<Scalar>> EnumerateDomain(const FieldKind& kind,
                                                   size_t limit) {
  std::vector<Scalar> out;
  switch (kind.tag) {
    case FieldKind::Tag::kInt: {
      const __int128 n = static_cast<__int128>(kind.hi) - kind.lo + 1;
      if (n > static_cast<__int128>(limit)) return std::nullopt;
      for (int64_t v = kind.lo; v <= kind.hi; ++v) out.push_back(Scalar(v));
      return out;
    }
    case FieldKind::Tag::kEnum:
      if (kind.labels.size() > limit) return std::nullopt;
      for (const std::string& l : kind.labels) out.push_back(Scalar(l));
      return out;
    case FieldKind::Tag::kBool:
      if (limit < 2) return std::nullopt;
      return std::vector<Scalar>{Scalar(false), Scalar(true)};
    default:
      return std::nullopt;
  }
}

bool DomainLess(const FieldKind& kind, const Scalar& a, const Scalar& b) {
  if (kind.tag == FieldKind::Tag::kEnum) {
    const auto* la = std::get_if<std::string>(&a);
    const auto* lb = std::get_if<std::string>(&b);
    if (la && lb) {
      std::optional<size_t> ia = kind.LabelIndex(*la);
      std::optional<size_t> ib = kind.LabelIndex(*lb);
      if (ia && ib) return *ia < *ib;
    }
  }
  return a < b;
}

const FieldKind* PatternKind(const Schema& schema, const FieldPath& qualified) {
  if (qualified.size() < 2) return nullptr;
  const std::string& ie = qualified.segments()[0].name;
  const FieldPath rel = qualified.Suffix(1);
  for (const LeafPattern& lp : schema.LeafPatterns(ie)) {
    if (lp.relative == rel) return lp.kind;
  }
  return nullptr;
}

NormalizeResult Normalize(const ConstraintRule& rule, const Schema& schema,
                          const BindingHints& hints) {
  return Normalizer(schema, hints).Run(rule);
}

NormalizeResult ParseAndNormalize(std::string_view text, const Schema& schema,
                                  const BindingHints& hints) {
  absl::StatusOr<ConstraintRule> parsed = ParseRule(text);
  if (!parsed.ok()) {
    return NormalizeResult::NoRule(
        absl::StrCat("syntax: ", std::string(parsed.status().message())));
  }
  return Normalize(*parsed, schema, hints);
}

}  // namespace semprobe
