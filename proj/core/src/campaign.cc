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

#include "semprobe/campaign.h"

#include <algorithm>
#include <atomic>
#include <random>
#include <set>
#include <thread>
#include <utility>

#include "absl/strings/escaping.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace semprobe {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string Fnv1a64Hex(std::string_view text) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return absl::StrFormat("%016x", h);
}

std::string Digest(const CampaignInputs& inputs, const CampaignMode& mode,
                   const CampaignConfig& config) {
  ordered_json j;
  j["schema"] =
      absl::StrCat(inputs.schema->name(), "@", inputs.schema->version());
  j["mode"] = {
      {"kind",
       mode.kind == CampaignMode::Kind::kGuided ? "guided" : "enumeration"},
      {"sample", mode.sample},
      {"rng_seed", mode.rng_seed}};
  j["mode"]["pairs"] = ordered_json::array();
  for (const FieldPair& p : mode.pairs)
    j["mode"]["pairs"].push_back(p.ToString());
  j["config"] = config.ToJson();
  j["profile"] = inputs.profile.ToJson();
  j["seeds"] = ordered_json::array();
  for (const Seed& s : inputs.seeds) {
    j["seeds"].push_back({{"id", s.id}, {"tree", s.message.ToJson()["tree"]}});
  }
  j["target_rules"] = inputs.target_rules.ToJson();
  std::string corpus;
  for (const CorpusDoc& d : inputs.corpus.docs) {
    absl::StrAppend(&corpus, d.id,
                    d.role == DocRole::kSchemaDoc ? "|s|" : "|c|");
    for (const std::string& line : d.lines)
      absl::StrAppend(&corpus, line, "\n");
  }
  j["corpus"] = Fnv1a64Hex(corpus);
  return Fnv1a64Hex(j.dump());
}

struct Execution {
  Outcome outcome;
  std::vector<std::string> violations;
};

std::string OutcomeLabel(const Outcome& o) {
  return absl::StrCat("Crash (", std::string(FailureKindName(o.mode.kind)),
                      ")");
}

CampaignReport Execute(const CampaignInputs& inputs,
                       const std::vector<TestCase>& cases,
                       const CampaignConfig& config) {
  const UeSimulator sim(inputs.schema, inputs.target_rules, inputs.profile);
  std::vector<Execution> runs(cases.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < cases.size(); i = next++) {
      absl::StatusOr<DecodedMessage> msg =
          DeliveredMessage(inputs.schema, cases[i]);
      if (!msg.ok()) {
        runs[i].outcome = sim.Run(cases[i]);
        continue;
      }
      runs[i].outcome = sim.RunMessage(*msg);
      runs[i].violations = sim.Violations(*msg);
    }
  };
  const int n = std::max(1, config.workers);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < n; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }

  CampaignReport report = EmptyReport();
  report.profile = inputs.profile.name;
  const std::vector<ConstraintInfo> infos = inputs.target_rules.Constraints();
  auto info = [&](const std::string& id) -> ConstraintInfo {
    for (const ConstraintInfo& c : infos) {
      if (c.id == id) return c;
    }
    return ConstraintInfo{id, ConstraintClass::kValue, id, "-"};
  };
  std::set<ReportRow> rows;
  std::vector<Outcome> outcomes;
  for (size_t i = 0; i < cases.size(); ++i) {
    const TestCase& tc = cases[i];
    const Outcome& o = runs[i].outcome;
    outcomes.push_back(o);
    ClassCounts& c =
        report.classes[std::string(ConstraintClassName(tc.expected_class))];
    ++c.generated;
    ++c.executed;
    switch (o.kind) {
      case Outcome::Kind::kCrash: {
        ++c.crashing;
        const ConstraintInfo ci = info(o.constraint);
        rows.insert(
            ReportRow{ci.text, ci.affected_ie, OutcomeLabel(o), o.mode.site});
        break;
      }
      case Outcome::Kind::kReject:
        ++c.rejected;
        break;
      case Outcome::Kind::kAttachOk:
        ++c.attach_ok;
        break;
    }
    if (!o.silent.empty()) {
      report.silent.push_back(SilentEntry{tc.id, o.silent});
      for (const std::string& id : o.silent) {
        const ConstraintInfo ci = info(id);
        rows.insert(ReportRow{ci.text, ci.affected_ie, "SilentMisconfig", "-"});
      }
    }
    if (tc.targeted != kEnumBaselineId) {
      std::vector<std::string> also;
      for (const std::string& id : runs[i].violations) {
        if (id != tc.targeted) also.push_back(id);
      }
      if (!also.empty()) {
        report.collateral.push_back(CollateralEntry{tc.id, tc.targeted, also});
      }
    }
  }
  const std::set<std::string> sites = DedupSites(outcomes);
  report.unique_sites.assign(sites.begin(), sites.end());
  report.rows.assign(rows.begin(), rows.end());
  report.wall_model_seconds =
      EstimateSeconds(config.budget, report.Total().executed).ToString();
  return report;
}

}  // namespace

absl::StatusOr<Seed> LoadSeed(std::shared_ptr<const Schema> schema,
                              const std::filesystem::path& dir,
                              const std::string& name) {
  absl::StatusOr<std::string> bytes = ReadTextFile(dir / (name + ".bin"));
  if (!bytes.ok()) return bytes.status();
  absl::StatusOr<DecodedMessage> msg =
      View(schema,
           std::span<const uint8_t>(
               reinterpret_cast<const uint8_t*>(bytes->data()), bytes->size()));
  if (!msg.ok()) return msg.status();
  const std::filesystem::path json_path = dir / (name + ".json");
  if (std::filesystem::exists(json_path)) {
    absl::StatusOr<nlohmann::json> j = ReadJsonFile(json_path);
    if (!j.ok()) return j.status();
    absl::StatusOr<Value> tree = MessageFromJson(*schema, *j);
    if (!tree.ok()) return tree.status();
    if (!(*tree == msg->tree())) {
      return absl::DataLossError(
          absl::StrCat(name, ".bin does not decode to ", name, ".json"));
    }
  }
  return Seed{name, *std::move(msg)};
}

ordered_json CampaignConfig::ToJson() const {
  return ordered_json{{"evidence", std::string(EvidenceModeName(evidence))},
                      {"ie_budget", ie_budget},
                      {"client", client},
                      {"dependency_budget", dependency.budget},
                      {"prompt", induction.prompt_template},
                      {"budget", budget.ToJson()}};
}

absl::StatusOr<ToolConfig> LoadToolConfig(const std::filesystem::path& path) {
  absl::StatusOr<nlohmann::json> j = ReadJsonFile(path);
  if (!j.ok()) return j.status();
  ToolConfig out;
  out.ota.overhead_s = Rational(1071, 100);
  try {
    if (j->contains("client")) {
      out.client = (*j)["client"];
      out.campaign.induction.parallelism = out.client.value("parallelism", 1);
    }
    if (j->contains("budget")) {
      absl::StatusOr<BudgetModel> ota = BudgetModel::FromJson((*j)["budget"]);
      if (!ota.ok()) return ota.status();
      out.ota = *ota;
    }
    if (j->contains("campaign")) {
      const nlohmann::json& c = (*j)["campaign"];
      absl::StatusOr<EvidenceMode> mode =
          ParseEvidenceMode(c.value("evidence", "full"));
      if (!mode.ok()) return mode.status();
      out.campaign.evidence = *mode;
      out.campaign.ie_budget = c.value("ie_budget", size_t{0});
      out.campaign.workers = c.value("workers", 1);
      out.campaign.dependency.budget =
          c.value("dependency_budget", size_t{10000});
      if (c.contains("prompt")) {
        absl::StatusOr<std::string> prompt =
            ReadTextFile(path.parent_path() / c["prompt"].get<std::string>());
        if (!prompt.ok()) return prompt.status();
        out.campaign.induction.prompt_template = *prompt;
      }
      if (c.contains("budget")) {
        absl::StatusOr<BudgetModel> b = BudgetModel::FromJson(c["budget"]);
        if (!b.ok()) return b.status();
        out.campaign.budget = *b;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), ": ", e.what()));
  }
  return out;
}

std::vector<FieldPair> AllFieldPairs(const Schema& schema) {
  std::vector<std::string> ies;
  for (const IEDef& ie : schema.ies()) ies.push_back(ie.name);
  std::vector<FieldPair> out = IntraPairs(schema, ies);
  for (FieldPair& p : ReferencePairs(schema)) out.push_back(std::move(p));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<FieldPair> SamplePairs(std::vector<FieldPair> pairs, size_t k,
                                   uint64_t rng_seed) {
  std::sort(pairs.begin(), pairs.end());
  k = std::min(k, pairs.size());
  std::mt19937_64 rng(rng_seed);
  // Partial Fisher-Yates; modulo keeps the draw identical across standard
  // libraries.
  for (size_t i = 0; i < k; ++i) {
    const size_t j = i + static_cast<size_t>(rng() % (pairs.size() - i));
    std::swap(pairs[i], pairs[j]);
  }
  pairs.resize(k);
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

CasePlan PlanCases(const std::vector<Seed>& seeds, const RuleSet& rules,
                   const DependencyOptions& options) {
  CasePlan plan;
  auto take = [&](PlanOutcome outcome, const std::string& id,
                  const Seed& seed) {
    if (!outcome.planned()) {
      plan.infeasible.push_back(
          InfeasibleEntry{id, seed.id, *outcome.infeasible});
      return;
    }
    for (TestCase& tc : outcome.cases) {
      tc.id = absl::StrCat(seed.id, "/", tc.id);
      plan.cases.push_back(std::move(tc));
    }
  };
  for (const Seed& seed : seeds) {
    for (const RangeConstraint& rc : rules.ranges) {
      take(PlanRange(seed.message, rc, seed.id), rc.id(), seed);
    }
    for (const PresenceConstraint& pc : rules.presence) {
      take(PlanPresence(seed.message, pc, seed.id), pc.id(), seed);
    }
    for (const ConstraintRule& rule : rules.rules) {
      take(PlanDependency(seed.message, rule, options, seed.id), rule.id, seed);
    }
  }
  return plan;
}

GuidedPlan PlanGuided(const CampaignInputs& inputs,
                      const CampaignConfig& config, InducerClient& client) {
  const Schema& schema = *inputs.schema;
  GuidedPlan plan;
  plan.rules = SchemaRuleSet(schema);
  const size_t budget =
      config.ie_budget == 0 ? schema.ies().size() : config.ie_budget;
  const CoverageReport cover = SelectIntraIes(schema, budget);
  std::vector<FieldPair> pairs = IntraPairs(schema, cover.selected);
  for (FieldPair& p : ReferencePairs(schema)) pairs.push_back(std::move(p));
  plan.induction = BatchInduce(std::move(pairs), inputs.corpus, config.evidence,
                               client, schema, config.induction);
  plan.rules.rules = plan.induction.rules;

  CasePlan cases = PlanCases(inputs.seeds, plan.rules, config.dependency);
  plan.cases = std::move(cases.cases);
  plan.infeasible = std::move(cases.infeasible);
  return plan;
}

absl::StatusOr<CampaignReport> RunCampaign(const CampaignInputs& inputs,
                                           const CampaignMode& mode,
                                           const CampaignConfig& config,
                                           InducerClient& client) {
  if (inputs.schema == nullptr) return absl::InvalidArgumentError("no schema");
  if (inputs.seeds.empty())
    return absl::InvalidArgumentError("no seed messages");
  CampaignReport report;
  if (mode.kind == CampaignMode::Kind::kGuided) {
    GuidedPlan plan = PlanGuided(inputs, config, client);
    report = Execute(inputs, plan.cases, config);
    report.mode = "guided";
    report.infeasible = std::move(plan.infeasible);
    for (const ConstraintRule& r : plan.rules.rules) {
      report.rules.push_back(RuleSummary{
          r.id, std::string(ConstraintClassName(ClassOf(r))), r.ToText()});
    }
    for (const TransportFailure& f : plan.induction.failures) {
      report.transport_failures.push_back(
          absl::StrCat(f.pair.ToString(), ": ", f.error));
    }
  } else {
    std::vector<FieldPair> pairs = mode.pairs;
    if (pairs.empty()) {
      if (mode.sample < 1) {
        return absl::InvalidArgumentError("enumeration needs sample >= 1");
      }
      pairs = SamplePairs(AllFieldPairs(*inputs.schema), mode.sample,
                          mode.rng_seed);
    }
    std::vector<TestCase> cases;
    for (const Seed& seed : inputs.seeds) {
      for (const FieldPair& pair : pairs) {
        for (TestCase& tc : PlanEnumeration(seed.message, pair, seed.id)) {
          tc.id = absl::StrCat(seed.id, "/", tc.id);
          cases.push_back(std::move(tc));
        }
      }
    }
    report = Execute(inputs, cases, config);
    report.mode = "enumeration";
    for (const FieldPair& p : pairs) report.pairs.push_back(p.ToString());
  }
  report.config_digest = Digest(inputs, mode, config);
  return report;
}

}  // namespace semprobe
