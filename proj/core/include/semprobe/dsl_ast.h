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

#ifndef SEMPROBE_DSL_AST_H_
#define SEMPROBE_DSL_AST_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "semprobe/field_path.h"
#include "semprobe/rational.h"
#include "semprobe/value.h"

namespace semprobe {

enum class AtomKind { kEq, kNe, kIn, kMap, kMod, kMatch, kRel };
enum class RelOp { kLt, kLe, kEq, kGe, kGt };

std::string_view AtomKindName(AtomKind kind);
std::string_view RelOpName(RelOp op);
RelOp FlipRelOp(RelOp op);  // a op b  <=>  b Flip(op) a

// coeff * field + offset; a constant when `field` is empty.
struct LinExpr {
  Rational coeff = 1;
  std::optional<FieldPath> field;
  Rational offset = 0;

  static LinExpr Constant(Rational c) { return LinExpr{0, std::nullopt, c}; }
  static LinExpr Of(FieldPath f, Rational coeff = 1, Rational offset = 0) {
    return LinExpr{coeff, std::move(f), offset};
  }
  bool is_constant() const { return !field.has_value(); }
  std::string ToString() const;

  friend bool operator==(const LinExpr&, const LinExpr&) = default;
};

struct Atom {
  AtomKind kind = AtomKind::kEq;
  // EQ/NE/IN/MOD subject, MAP source, MATCH first argument.
  FieldPath field;
  // MAP target, MATCH second argument.
  FieldPath field2;
  // EQ/NE: exactly one literal. IN: the member set.
  std::vector<Scalar> literals;
  // MAP pairs, source literal to target literal.
  std::vector<std::pair<Scalar, Scalar>> table;
  int64_t modulus = 1;
  int64_t residue = 0;
  RelOp op = RelOp::kEq;
  LinExpr lhs;
  LinExpr rhs;

  static Atom Eq(FieldPath f, Scalar lit);
  static Atom Ne(FieldPath f, Scalar lit);
  static Atom In(FieldPath f, std::vector<Scalar> set);
  static Atom Map(FieldPath from, FieldPath to,
                  std::vector<std::pair<Scalar, Scalar>> table);
  static Atom Mod(FieldPath f, int64_t modulus, int64_t residue);
  static Atom Match(FieldPath a, FieldPath b);
  static Atom Rel(RelOp op, LinExpr lhs, LinExpr rhs);

  // Field references in argument order.
  std::vector<FieldPath> Fields() const;
  // `strip_ie` removes the leading IE segment of every path when printing.
  std::string ToString(bool strip_ie = false) const;

  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Scope {
  bool inter = false;
  std::vector<std::string> ies;  // one for INTRA, two for INTER

  static Scope Intra(std::string ie) { return Scope{false, {std::move(ie)}}; }
  static Scope Inter(std::string a, std::string b) {
    return Scope{true, {std::move(a), std::move(b)}};
  }
  std::string ToString() const;

  friend bool operator==(const Scope&, const Scope&) = default;
};

enum class Family { kValueDependency, kRangeAlignment };
enum class Provenance { kSchema, kMined, kInduced };

std::string_view FamilyName(Family f);
std::string_view ProvenanceName(Provenance p);
absl::StatusOr<Family> ParseFamily(std::string_view text);
absl::StatusOr<Provenance> ParseProvenance(std::string_view text);

struct Citation {
  std::string doc;
  std::string quote;

  friend bool operator==(const Citation&, const Citation&) = default;
};

// A parsed or normalized dependency rule. After normalization every field
// path is IE-qualified ("SRS-Resource.resourceMapping.startPosition"); the
// textual form prints intra-IE paths relative to the scope IE.
struct ConstraintRule {
  std::string id;
  Scope scope;
  std::vector<Atom> preconditions;  // non-empty iff the clause is IMPLIES
  Atom consequent;
  Family family = Family::kValueDependency;
  std::vector<Citation> citations;
  Provenance provenance = Provenance::kInduced;

  bool is_implies() const { return !preconditions.empty(); }
  std::vector<FieldPath> Fields() const;
  std::string ClauseText() const;
  // "SCOPE: CLAUSE", parseable by ParseRule.
  std::string ToText() const;
  friend bool operator==(const ConstraintRule&,
                         const ConstraintRule&) = default;
};

// Content-derived identifier: "dsl-" + FNV-1a-64 of the text, in hex.
std::string RuleIdForText(std::string_view canonical_text);

// Literal rendering used by the DSL: 3, 'label', TRUE.
std::string LiteralToString(const Scalar& s);

nlohmann::ordered_json AtomToJson(const Atom& atom);
absl::StatusOr<Atom> AtomFromJson(const nlohmann::json& j);
nlohmann::ordered_json RuleToJson(const ConstraintRule& rule);
absl::StatusOr<ConstraintRule> RuleFromJson(const nlohmann::json& j);

}  // namespace semprobe

#endif  // SEMPROBE_DSL_AST_H_
