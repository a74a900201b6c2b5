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

#ifndef SEMPROBE_CAMPAIGN_H_
#define SEMPROBE_CAMPAIGN_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "semprobe/budget.h"
#include "semprobe/message_view.h"
#include "semprobe/mutation_engine.h"
#include "semprobe/report.h"
#include "semprobe/rule_induction.h"
#include "semprobe/rule_set.h"
#include "semprobe/spec_miner.h"
#include "semprobe/ue_sim.h"

namespace semprobe {

struct Seed {
  std::string id;
  DecodedMessage message;
};

// Loads `<dir>/<name>.bin` and checks it against `<dir>/<name>.json`.
absl::StatusOr<Seed> LoadSeed(std::shared_ptr<const Schema> schema,
                              const std::filesystem::path& dir,
                              const std::string& name);

// Everything a campaign reads. `target_rules` are the simulator's validators
// and stay independent of what the guided pipeline induces.
struct CampaignInputs {
  std::shared_ptr<const Schema> schema;
  Corpus corpus;
  std::vector<Seed> seeds;
  UeProfile profile;
  RuleSet target_rules;
};

struct CampaignMode {
  enum class Kind { kGuided, kEnumeration };

  Kind kind = Kind::kGuided;
  size_t sample = 0;      // enumeration: pairs drawn without replacement
  uint64_t rng_seed = 0;  // enumeration: sampling seed
  // Enumeration: explicit pairs, used instead of sampling when non-empty.
  std::vector<FieldPair> pairs;

  static CampaignMode Guided() { return CampaignMode{}; }
  static CampaignMode Enumeration(size_t sample, uint64_t rng_seed) {
    return CampaignMode{Kind::kEnumeration, sample, rng_seed, {}};
  }
  static CampaignMode EnumerationOver(std::vector<FieldPair> pairs) {
    return CampaignMode{Kind::kEnumeration, 0, 0, std::move(pairs)};
  }
};

struct CampaignConfig {
  EvidenceMode evidence = EvidenceMode::kFull;
  size_t ie_budget = 0;  // 0 selects every IE with positive gain
  int workers = 1;
  std::string client = "mock";  // recorded in the digest only
  BatchOptions induction;
  DependencyOptions dependency;
  BudgetModel budget;  // 45 s per test, no overhead

  nlohmann::ordered_json ToJson() const;
};

// Reads {"client": {...}, "budget": {...}, "campaign": {...}} where every
// section is optional.
struct ToolConfig {
  CampaignConfig campaign;
  nlohmann::json client;  // raw client section for MakeLiveInducer
  BudgetModel ota;        // default 45 s + 10.71 s
};
absl::StatusOr<ToolConfig> LoadToolConfig(const std::filesystem::path& path);

// All intra pairs of the schema plus the reference pairs, sorted.
std::vector<FieldPair> AllFieldPairs(const Schema& schema);

// Deterministic draw of `k` pairs without replacement, returned sorted.
std::vector<FieldPair> SamplePairs(std::vector<FieldPair> pairs, size_t k,
                                   uint64_t rng_seed);

// Guided: schema rules, mining, induction and planning. Enumeration: the
// product of each pair's domains. Both run on the simulator and aggregate.
absl::StatusOr<CampaignReport> RunCampaign(const CampaignInputs& inputs,
                                           const CampaignMode& mode,
                                           const CampaignConfig& config,
                                           InducerClient& client);

struct CasePlan {
  std::vector<TestCase> cases;  // ids prefixed "<seed>/"
  std::vector<InfeasibleEntry> infeasible;
};

// Range, presence and dependency cases for every seed, in rule-set order.
CasePlan PlanCases(const std::vector<Seed>& seeds, const RuleSet& rules,
                   const DependencyOptions& options = {});

// The generated cases of a guided run, without executing them.
struct GuidedPlan {
  RuleSet rules;  // schema-derived plus induced
  BatchResult induction;
  std::vector<TestCase> cases;
  std::vector<InfeasibleEntry> infeasible;
};
GuidedPlan PlanGuided(const CampaignInputs& inputs,
                      const CampaignConfig& config, InducerClient& client);

}  // namespace semprobe

#endif  // SEMPROBE_CAMPAIGN_H_
