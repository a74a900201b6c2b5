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

#ifndef SEMPROBE_DSL_NORMALIZE_H_
#define SEMPROBE_DSL_NORMALIZE_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semprobe/dsl_ast.h"
#include "semprobe/rational.h"
#include "semprobe/schema.h"
#include "semprobe/value.h"

namespace semprobe {

// Either a canonical rule or the NO_RULE outcome with its reason.
struct NormalizeResult {
  std::optional<ConstraintRule> rule;
  std::string reason;

  bool ok() const { return rule.has_value(); }
  static NormalizeResult NoRule(std::string why) {
    return NormalizeResult{std::nullopt, std::move(why)};
  }
};

// Placeholder name to the path it stands for, e.g. field1 ->
// PUCCH-Config.format.
using BindingHints = std::map<std::string, std::string>;

// Binds every field reference to a unique leaf pattern of the scope IE(s) by
// suffix match, validates literals against the leaf domains, and rewrites
// atoms into one canonical form. Normalizing a canonical rule is a no-op.
NormalizeResult Normalize(const ConstraintRule& rule, const Schema& schema,
                          const BindingHints& hints = {});

// Parses then normalizes; syntax errors become NO_RULE.
NormalizeResult ParseAndNormalize(std::string_view text, const Schema& schema,
                                  const BindingHints& hints = {});

// Arithmetic value of a label in the nK convention: "n4" -> 4.
std::optional<int64_t> NumericLabelValue(std::string_view label);
// Int leaves and enums whose labels all follow the nK convention.
bool IsArithmeticKind(const FieldKind& kind);
// Arithmetic value of a scalar, if it has one.
std::optional<int64_t> ScalarNumber(const Scalar& s);

// Maps a literal onto the domain: ints must lie in [lo, hi]; labels must be
// declared; an int k names label "nk" of an nK enum.
std::optional<Scalar> CoerceLiteral(const FieldKind& kind, const Scalar& lit);

// Every admissible value of a scalar kind in domain order, or nullopt when
// there are more than `limit`.
std::optional<std::vector<Scalar>> EnumerateDomain(const FieldKind& kind,
                                                   size_t limit);

// Domain-order comparison used for canonical literal ordering.
bool DomainLess(const FieldKind& kind, const Scalar& a, const Scalar& b);

// Leaf kind for an IE-qualified pattern such as SRS-Resource.resourceMapping.
// startPosition, or null.
const FieldKind* PatternKind(const Schema& schema, const FieldPath& qualified);

}  // namespace semprobe

#endif  // SEMPROBE_DSL_NORMALIZE_H_
