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

#ifndef SEMPROBE_UE_SIM_H_
#define SEMPROBE_UE_SIM_H_

#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "semprobe/mutation_engine.h"
#include "semprobe/rule_set.h"
#include "semprobe/schema.h"
#include "semprobe/value.h"

namespace semprobe {

// Constraint id reported when the payload does not decode.
inline constexpr std::string_view kDecodeErrorId = "decode:error";

struct FailureMode {
  enum class Kind { kAssert, kSegfault, kSilentMisconfig };

  Kind kind = Kind::kSilentMisconfig;
  std::string site;  // stable pseudo source location; empty when silent

  friend bool operator==(const FailureMode&, const FailureMode&) = default;
};

std::string_view FailureKindName(FailureMode::Kind k);

struct UeProfile {
  std::string name;
  std::set<std::string> disabled_checks;
  std::map<std::string, FailureMode> failure_map;  // keys within disabled
  // Prior configuration, keyed by IE-qualified pattern; a Need M field
  // omitted here keeps this value instead of going missing.
  std::map<std::string, Scalar> need_store;

  // Check keys are constraint ids, or "rule:<DSL>" normalized against the
  // schema to the rule's id.
  static absl::StatusOr<UeProfile> FromJson(const nlohmann::json& j,
                                            const Schema& schema);
  nlohmann::ordered_json ToJson() const;
};

absl::StatusOr<UeProfile> LoadProfile(const std::filesystem::path& path,
                                      const Schema& schema);

struct Outcome {
  enum class Kind { kAttachOk, kReject, kCrash };

  Kind kind = Kind::kAttachOk;
  std::string constraint;  // rejected or crashing constraint
  FailureMode mode;        // kCrash only
  // Violations that passed unchecked without faulting, in check order.
  std::vector<std::string> silent;

  nlohmann::ordered_json ToJson() const;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

std::string_view OutcomeKindName(Outcome::Kind k);

// Deterministic simulated receiver. Checks run in ascending id order: an
// enabled violated check rejects; a disabled one faults at its mapped site,
// or passes silently when unmapped. An unmapped disabled Need M check with
// no stored prior value faults as a null use.
class UeSimulator {
 public:
  UeSimulator(std::shared_ptr<const Schema> schema, RuleSet rules,
              UeProfile profile);

  Outcome Run(const TestCase& tc) const;
  Outcome RunMessage(const DecodedMessage& msg) const;

  // Ids of every violated check on `msg`, in check order, ignoring the
  // profile.
  std::vector<std::string> Violations(const DecodedMessage& msg) const;

  const UeProfile& profile() const { return profile_; }
  const RuleSet& rules() const { return rules_; }

 private:
  struct Check {
    std::string id;
    enum class Type { kRange, kPresence, kRule } type;
    size_t index;
  };

  bool Violated(const Check& check, const DecodedMessage& msg) const;

  std::shared_ptr<const Schema> schema_;
  RuleSet rules_;
  UeProfile profile_;
  std::vector<Check> checks_;
};

Outcome RunTarget(const UeProfile& profile, const TestCase& tc,
                  std::shared_ptr<const Schema> schema, const RuleSet& rules);

// Distinct crash sites, sorted.
std::set<std::string> DedupSites(const std::vector<Outcome>& outcomes);

}  // namespace semprobe

#endif  // SEMPROBE_UE_SIM_H_
