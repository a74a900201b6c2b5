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

#ifndef SEMPROBE_RULE_SET_H_
#define SEMPROBE_RULE_SET_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "semprobe/dsl_ast.h"
#include "semprobe/schema.h"
#include "semprobe/schema_rules.h"

namespace semprobe {

// The four constraint classes a campaign reports on.
enum class ConstraintClass { kValue, kPresence, kIntra, kInter };

std::string_view ConstraintClassName(ConstraintClass c);
absl::StatusOr<ConstraintClass> ParseConstraintClass(std::string_view text);
ConstraintClass ClassOf(const ConstraintRule& rule);

// Summary of one constraint, independent of its kind.
struct ConstraintInfo {
  std::string id;
  ConstraintClass cls = ConstraintClass::kValue;
  std::string text;         // human-readable constraint
  std::string affected_ie;  // "A" or "A, B"
};

// Schema-derived constraints plus dependency rules, as one shared JSON file.
struct RuleSet {
  std::string schema_ref;
  std::vector<RangeConstraint> ranges;
  std::vector<PresenceConstraint> presence;
  std::vector<ConstraintRule> rules;

  // Every constraint, sorted by id.
  std::vector<ConstraintInfo> Constraints() const;
  std::optional<ConstraintInfo> Find(std::string_view id) const;

  nlohmann::ordered_json ToJson() const;
  static absl::StatusOr<RuleSet> FromJson(const nlohmann::json& j);

  friend bool operator==(const RuleSet&, const RuleSet&) = default;
};

// Range and presence constraints of the schema, provenance `schema`.
RuleSet SchemaRuleSet(const Schema& schema);

// Parses and normalizes every rule of a DSL file; any NO_RULE is an error.
absl::StatusOr<std::vector<ConstraintRule>> LoadRuleFile(
    const std::filesystem::path& path, const Schema& schema,
    Provenance provenance);

absl::StatusOr<RuleSet> LoadRuleSet(const std::filesystem::path& path);

// Schema rules plus the hand-written dependency rules of `dsl_file`: the
// checks a simulated receiver enforces.
absl::StatusOr<RuleSet> ValidatorRuleSet(const Schema& schema,
                                         const std::filesystem::path& dsl_file);

}  // namespace semprobe

#endif  // SEMPROBE_RULE_SET_H_
