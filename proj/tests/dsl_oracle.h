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

#ifndef SEMPROBE_TESTS_DSL_ORACLE_H_
#define SEMPROBE_TESTS_DSL_ORACLE_H_

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "semprobe/dsl_ast.h"
#include "semprobe/dsl_evaluate.h"
#include "semprobe/dsl_normalize.h"
#include "semprobe/schema.h"
#include "semprobe/value.h"

namespace semprobe::testing {

// Evaluates a parsed, un-normalized rule whose fields are fully IE-qualified,
// by walking the value tree directly.
class BruteForce {
 public:
  explicit BruteForce(const Schema& schema) : schema_(schema) {}

  Verdict::Kind Run(const ConstraintRule& rule, const Value& root) {
    instances_.clear();
    Collect(RootKind(schema_), root);
    // An INTER rule only ranges over the IEs its fields actually mention.
    std::vector<std::string> ies;
    for (const std::string& ie : rule.scope.ies) {
      for (const FieldPath& f : rule.Fields()) {
        if (f.segments()[0].name == ie) {
          ies.push_back(ie);
          break;
        }
      }
    }
    if (ies.size() == 2 && !rule.is_implies() &&
        rule.consequent.kind == AtomKind::kMatch) {
      return Match(rule.consequent);
    }
    std::vector<std::map<std::string, const Value*>> envs = {{}};
    for (const std::string& ie : ies) {
      std::vector<std::map<std::string, const Value*>> next;
      for (const auto& e : envs) {
        for (const Value* inst : Of(ie)) {
          next.push_back(e);
          next.back()[ie] = inst;
        }
      }
      envs = std::move(next);
    }
    bool any_sat = false;
    for (const auto& env : envs) {
      Tri t = Clause(rule, env);
      if (t == Tri::kFalse) return Verdict::Kind::kViolated;
      if (t == Tri::kTrue) any_sat = true;
    }
    return any_sat ? Verdict::Kind::kSatisfied : Verdict::Kind::kInapplicable;
  }

 private:
  enum class Tri { kTrue, kFalse, kUnknown };

  void Collect(const FieldKind& kind, const Value& v) {
    switch (kind.tag) {
      case FieldKind::Tag::kChoice:
        Collect(kind.FindAlternative(v.label())->kind, v.choice_value());
        return;
      case FieldKind::Tag::kSeqOf:
        for (const Value& item : v.items()) Collect(*kind.element, item);
        return;
      case FieldKind::Tag::kNested:
        if (!kind.inline_fields) instances_.emplace_back(kind.ie, &v);
        for (const FieldDef& f : schema_.FieldsOf(kind)) {
          if (const Value* m = v.Find(f.name)) Collect(f.kind, *m);
        }
        return;
      default:
        return;
    }
  }

  std::vector<const Value*> Of(const std::string& ie) const {
    std::vector<const Value*> out;
    for (const auto& [name, v] : instances_) {
      if (name == ie) out.push_back(v);
    }
    return out;
  }

  static std::optional<Scalar> Get(const Value* inst, const FieldPath& f) {
    const Value* v = inst;
    for (size_t i = 1; i < f.size() && v != nullptr; ++i) {
      const std::string& name = f.segments()[i].name;
      if (v->kind() == Value::Kind::kRecord) {
        v = v->Find(name);
      } else if (v->kind() == Value::Kind::kChoice) {
        v = v->label() == name ? &v->choice_value() : nullptr;
      } else {
        v = nullptr;
      }
    }
    if (v == nullptr) return std::nullopt;
    return v->AsScalar();
  }

  static std::optional<int64_t> Num(const Scalar& s) {
    if (auto* i = std::get_if<int64_t>(&s)) return *i;
    if (auto* l = std::get_if<std::string>(&s)) {
      if (l->size() > 1 && (*l)[0] == 'n' &&
          l->find_first_not_of("0123456789", 1) == std::string::npos) {
        return std::stoll(l->substr(1));
      }
    }
    return std::nullopt;
  }

  static std::optional<Scalar> Lookup(
      const std::map<std::string, const Value*>& env, const FieldPath& f) {
    auto it = env.find(f.segments()[0].name);
    if (it == env.end()) return std::nullopt;
    return Get(it->second, f);
  }

  static std::optional<Rational> Lin(
      const std::map<std::string, const Value*>& env, const LinExpr& e) {
    if (!e.field) return e.offset;
    std::optional<Scalar> v = Lookup(env, *e.field);
    if (!v) return std::nullopt;
    return e.coeff * Rational(*Num(*v)) + e.offset;
  }

  static Tri Atom1(const Atom& a,
                   const std::map<std::string, const Value*>& env) {
    auto tri = [](bool b) { return b ? Tri::kTrue : Tri::kFalse; };
    switch (a.kind) {
      case AtomKind::kEq:
      case AtomKind::kNe:
      case AtomKind::kIn: {
        std::optional<Scalar> v = Lookup(env, a.field);
        if (!v) return Tri::kUnknown;
        bool in = std::find(a.literals.begin(), a.literals.end(), *v) !=
                  a.literals.end();
        return tri(a.kind == AtomKind::kNe ? !in : in);
      }
      case AtomKind::kMap: {
        std::optional<Scalar> x = Lookup(env, a.field);
        std::optional<Scalar> y = Lookup(env, a.field2);
        if (!x || !y) return Tri::kUnknown;
        for (const auto& [k, v] : a.table) {
          if (k == *x) return tri(v == *y);
        }
        return Tri::kUnknown;
      }
      case AtomKind::kMod: {
        std::optional<Scalar> v = Lookup(env, a.field);
        if (!v) return Tri::kUnknown;
        int64_t n = *Num(*v);
        return tri(((n % a.modulus) + a.modulus) % a.modulus == a.residue);
      }
      case AtomKind::kMatch: {
        std::optional<Scalar> x = Lookup(env, a.field);
        std::optional<Scalar> y = Lookup(env, a.field2);
        if (!x || !y) return Tri::kUnknown;
        return tri(*x == *y);
      }
      case AtomKind::kRel: {
        std::optional<Rational> l = Lin(env, a.lhs);
        std::optional<Rational> r = Lin(env, a.rhs);
        if (!l || !r) return Tri::kUnknown;
        switch (a.op) {
          case RelOp::kLt:
            return tri(*l < *r);
          case RelOp::kLe:
            return tri(*l <= *r);
          case RelOp::kEq:
            return tri(*l == *r);
          case RelOp::kGe:
            return tri(*l >= *r);
          case RelOp::kGt:
            return tri(*l > *r);
        }
      }
    }
    return Tri::kUnknown;
  }

  static Tri Clause(const ConstraintRule& rule,
                    const std::map<std::string, const Value*>& env) {
    for (const Atom& p : rule.preconditions) {
      if (Atom1(p, env) != Tri::kTrue) return Tri::kTrue;
    }
    return Atom1(rule.consequent, env);
  }

  Verdict::Kind Match(const Atom& a) {
    auto values = [&](const FieldPath& f) {
      std::vector<Scalar> out;
      for (const Value* inst : Of(f.segments()[0].name)) {
        if (std::optional<Scalar> v = Get(inst, f)) out.push_back(*v);
      }
      return out;
    };
    auto defines = [](const FieldPath& f) {
      std::string field;
      for (char c : f.back().name) {
        if (std::isalnum(static_cast<unsigned char>(c)))
          field += std::tolower(c);
      }
      std::string ie;
      for (char c : f.segments()[0].name) {
        if (std::isalnum(static_cast<unsigned char>(c))) ie += std::tolower(c);
      }
      return field == ie + "id";
    };
    const std::vector<Scalar> x = values(a.field);
    const std::vector<Scalar> y = values(a.field2);
    if (x.empty() || y.empty()) return Verdict::Kind::kInapplicable;
    auto subset = [](const std::vector<Scalar>& s,
                     const std::vector<Scalar>& t) {
      return std::all_of(s.begin(), s.end(), [&](const Scalar& v) {
        return std::find(t.begin(), t.end(), v) != t.end();
      });
    };
    bool ok;
    if (defines(a.field2) && !defines(a.field)) {
      ok = subset(x, y);
    } else if (defines(a.field) && !defines(a.field2)) {
      ok = subset(y, x);
    } else {
      ok = subset(x, y) && subset(y, x);
    }
    return ok ? Verdict::Kind::kSatisfied : Verdict::Kind::kViolated;
  }

  const Schema& schema_;
  std::vector<std::pair<std::string, const Value*>> instances_;
};

// Random rule text over the mini-schema with fully qualified fields.
class RuleGen {
 public:
  RuleGen(const Schema& schema, std::mt19937_64& rng)
      : schema_(schema), rng_(rng) {}

  std::string Next() {
    const bool inter = Pick(4) == 0;
    std::vector<std::string> ies;
    const std::vector<IEDef>& all = schema_.ies();
    while (ies.size() < (inter ? 2u : 1u)) {
      const std::string& name = all[Pick(all.size())].name;
      if (std::find(ies.begin(), ies.end(), name) == ies.end() &&
          !schema_.LeafPatterns(name).empty()) {
        ies.push_back(name);
      }
    }
    for (const std::string& ie : ies) {
      for (const LeafPattern& lp : schema_.LeafPatterns(ie))
        leaves_.push_back(lp);
    }
    std::string scope = inter ? "INTER(" + ies[0] + ", " + ies[1] + ")"
                              : "INTRA(" + ies[0] + ")";
    std::string clause;
    if (Pick(3) == 0) {
      clause = "IMPLIES(" + AtomText(false) + "; " + AtomText(false) + ")";
    } else {
      clause = AtomText(inter);
    }
    leaves_.clear();
    return scope + ": " + clause;
  }

 private:
  size_t Pick(size_t n) {
    return std::uniform_int_distribution<size_t>(0, n - 1)(rng_);
  }

  const LeafPattern& Leaf() { return leaves_[Pick(leaves_.size())]; }

  const LeafPattern* NumericLeaf() {
    std::vector<const LeafPattern*> out;
    for (const LeafPattern& lp : leaves_) {
      if (IsArithmeticKind(*lp.kind)) out.push_back(&lp);
    }
    return out.empty() ? nullptr : out[Pick(out.size())];
  }

  std::string Lit(const FieldKind& kind) {
    switch (kind.tag) {
      case FieldKind::Tag::kInt: {
        // Bias towards small values so random messages hit both outcomes.
        int64_t hi = std::min(kind.hi, kind.lo + 3);
        return std::to_string(
            std::uniform_int_distribution<int64_t>(kind.lo, hi)(rng_));
      }
      case FieldKind::Tag::kEnum:
        return "'" + kind.labels[Pick(kind.labels.size())] + "'";
      default:
        return Pick(2) ? "TRUE" : "FALSE";
    }
  }

  std::string AtomText(bool allow_match) {
    const LeafPattern& f = Leaf();
    const std::string name = f.Qualified().ToString();
    switch (Pick(allow_match ? 7 : 6)) {
      case 0:
        return "EQ(" + name + ", " + Lit(*f.kind) + ")";
      case 1:
        return "NE(" + name + ", " + Lit(*f.kind) + ")";
      case 2:
        return "IN(" + name + ", {" + Lit(*f.kind) + ", " + Lit(*f.kind) + "})";
      case 3: {
        const LeafPattern& g = Leaf();
        return "MAP(" + name + ", " + g.Qualified().ToString() + ", {" +
               Lit(*f.kind) + " -> " + Lit(*g.kind) + "})";
      }
      case 4: {
        const LeafPattern* n = NumericLeaf();
        if (n == nullptr) return "EQ(" + name + ", " + Lit(*f.kind) + ")";
        const int m = 2 + static_cast<int>(Pick(3));
        return "MOD(" + n->Qualified().ToString() + ", " + std::to_string(m) +
               ", " + std::to_string(Pick(m)) + ")";
      }
      case 5: {
        const LeafPattern* a = NumericLeaf();
        const LeafPattern* b = NumericLeaf();
        if (a == nullptr) return "EQ(" + name + ", " + Lit(*f.kind) + ")";
        static const char* kOps[] = {"LT", "LE", "EQ", "GE", "GT"};
        const int ca = static_cast<int>(Pick(3)) - 1;
        const int cb = 1 + static_cast<int>(Pick(2));
        return std::string(kOps[Pick(5)]) + "(" +
               std::to_string(ca == 0 ? 2 : ca) + "*" +
               a->Qualified().ToString() + " + " + std::to_string(Pick(3)) +
               ", " + std::to_string(cb) + "*" + b->Qualified().ToString() +
               " - " + std::to_string(Pick(4)) + ")";
      }
      default: {
        std::vector<const LeafPattern*> ints;
        for (const LeafPattern& lp : leaves_) {
          if (lp.kind->tag == FieldKind::Tag::kInt) ints.push_back(&lp);
        }
        const LeafPattern* a = ints[Pick(ints.size())];
        const LeafPattern* b = ints[Pick(ints.size())];
        return "MATCH(" + a->Qualified().ToString() + ", " +
               b->Qualified().ToString() + ")";
      }
    }
  }

  const Schema& schema_;
  std::mt19937_64& rng_;
  std::vector<LeafPattern> leaves_;
};

}  // namespace semprobe::testing

#endif  // SEMPROBE_TESTS_DSL_ORACLE_H_
