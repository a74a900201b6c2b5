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

#ifndef SEMPROBE_MUTATION_ENGINE_H_
#define SEMPROBE_MUTATION_ENGINE_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "semprobe/dsl_ast.h"
#include "semprobe/message_view.h"
#include "semprobe/rule_set.h"
#include "semprobe/schema_rules.h"
#include "semprobe/spec_miner.h"

namespace semprobe {

// Constraint id every enumeration-baseline case is attributed to.
inline constexpr std::string_view kEnumBaselineId = "enum-baseline";

enum class Delivery { kWire, kRawOverride };

std::string_view DeliveryName(Delivery d);

struct TestCase {
  std::string id;
  std::string seed_ref;
  std::vector<Edit> edits;
  std::string targeted;  // exactly one constraint id
  ConstraintClass expected_class = ConstraintClass::kValue;
  Delivery delivery = Delivery::kWire;
  std::vector<uint8_t> payload;  // kWire: re-encoded bytes
  std::optional<Value> form;     // kRawOverride: the injected message tree
  std::optional<NeedCode> need;  // presence cases

  // One JSON-lines record; payload as lowercase hex.
  nlohmann::ordered_json ToJson(const Schema& schema) const;
  static absl::StatusOr<TestCase> FromJson(const Schema& schema,
                                           const nlohmann::json& j);
};

// The message the target receives: decoded payload, or the injected form.
absl::StatusOr<DecodedMessage> DeliveredMessage(
    std::shared_ptr<const Schema> schema, const TestCase& tc);

struct PlanOutcome {
  std::vector<TestCase> cases;
  std::optional<std::string> infeasible;  // why no violating case exists

  bool planned() const { return !infeasible.has_value(); }
  static PlanOutcome Infeasible(std::string reason) {
    PlanOutcome out;
    out.infeasible = std::move(reason);
    return out;
  }
};

// Per instance: hi + 1 then lo - 1, on the wire when the field width can
// carry the value and through raw override otherwise.
PlanOutcome PlanRange(const DecodedMessage& seed, const RangeConstraint& rc,
                      std::string_view seed_ref = "seed");

// Omits the optional field in its first present instance.
PlanOutcome PlanPresence(const DecodedMessage& seed,
                         const PresenceConstraint& pc,
                         std::string_view seed_ref = "seed");

struct DependencyOptions {
  size_t budget = 10000;  // assignments enumerated per rule
};

// Deviation of an edit set from the seed: |new - old| for ints, 1 for any
// changed enum or bool.
int64_t EditDeviation(const DecodedMessage& seed,
                      const std::vector<Edit>& edits);

// Smallest-deviation violating assignment over the rule's fields in the
// first environment of the seed. Ties: fewer edited fields, then edited
// paths in lexicographic order, then the larger relation margin, then
// domain order. A MATCH edits only its referencing side.
PlanOutcome PlanDependency(const DecodedMessage& seed,
                           const ConstraintRule& rule,
                           const DependencyOptions& options = {},
                           std::string_view seed_ref = "seed");

// One case per element of the product of both fields' domains, at their
// first instances. Empty when either field is absent.
std::vector<TestCase> PlanEnumeration(const DecodedMessage& seed,
                                      const FieldPair& pair,
                                      std::string_view seed_ref = "seed");

// Product of the two domain sizes, without building cases.
absl::StatusOr<uint64_t> EnumerationSize(const Schema& schema,
                                         const FieldPair& pair);

}  // namespace semprobe

#endif  // SEMPROBE_MUTATION_ENGINE_H_
