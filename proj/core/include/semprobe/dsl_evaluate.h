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

#ifndef SEMPROBE_DSL_EVALUATE_H_
#define SEMPROBE_DSL_EVALUATE_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nlohmann/json.hpp"
#include "semprobe/dsl_ast.h"
#include "semprobe/field_path.h"
#include "semprobe/message_view.h"
#include "semprobe/rational.h"
#include "semprobe/value.h"

namespace semprobe {

struct BoundValue {
  FieldPath path;  // absolute instance path
  Scalar value;

  friend bool operator==(const BoundValue&, const BoundValue&) = default;
};

struct Verdict {
  enum class Kind { kSatisfied, kViolated, kInapplicable };

  Kind kind = Kind::kSatisfied;
  std::string atom;                 // violated atom, canonical text
  std::vector<BoundValue> witness;  // values that falsified it
  std::string reason;               // why Inapplicable or vacuous
  Rational margin = 0;              // |lhs - rhs| for a violated relation

  static Verdict Satisfied(std::string reason = "") {
    Verdict v;
    v.reason = std::move(reason);
    return v;
  }
  static Verdict Inapplicable(std::string reason) {
    Verdict v;
    v.kind = Kind::kInapplicable;
    v.reason = std::move(reason);
    return v;
  }
  bool satisfied() const { return kind == Kind::kSatisfied; }
  bool violated() const { return kind == Kind::kViolated; }
  bool inapplicable() const { return kind == Kind::kInapplicable; }
  nlohmann::ordered_json ToJson() const;
};

std::string_view VerdictKindName(Verdict::Kind kind);

// Values of the rule's fields for one choice of IE instances, keyed by the
// IE-qualified pattern. Absent fields have no entry.
struct RuleEnv {
  std::vector<FieldPath> instances;
  std::map<FieldPath, BoundValue> values;
};

// Intra rules: one environment per IE instance (times the combinations of
// repeated leaves inside it). Inter rules: the product over both IEs.
std::vector<RuleEnv> Environments(const ConstraintRule& rule,
                                  const DecodedMessage& msg);

Verdict EvaluateAtom(const Atom& atom, const RuleEnv& env,
                     bool strip_ie = false);
// IMPLIES is vacuously Satisfied unless every precondition is Satisfied.
Verdict EvaluateClause(const ConstraintRule& rule, const RuleEnv& env);

// Any Violated environment wins (the first one, in tree order); otherwise
// Satisfied if any environment is; otherwise Inapplicable. An INTER MATCH is
// existential: each referencing id must equal some defining id.
Verdict Evaluate(const ConstraintRule& rule, const DecodedMessage& msg);

// True when `pattern`'s field names its own IE, e.g.
// ControlResourceSet.controlResourceSetId.
bool IsDefiningIdentifier(const FieldPath& pattern);

}  // namespace semprobe

#endif  // SEMPROBE_DSL_EVALUATE_H_
