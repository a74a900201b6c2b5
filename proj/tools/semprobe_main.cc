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

// semprobe: command-line front end over the core library. Every command
// writes JSON (or a text table for reports) to stdout or --out.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "nlohmann/json.hpp"
#include "semprobe/budget.h"
#include "semprobe/campaign.h"
#include "semprobe/live_client.h"
#include "semprobe/mutation_engine.h"
#include "semprobe/report.h"
#include "semprobe/rule_induction.h"
#include "semprobe/rule_set.h"
#include "semprobe/schema.h"
#include "semprobe/spec_miner.h"
#include "semprobe/ue_sim.h"

namespace semprobe {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

struct Options {
  std::string assets = SEMPROBE_DEFAULT_ASSET_DIR;
  std::string config;
  std::string schema;
  std::string corpus;
  std::string seeds_dir;
  std::vector<std::string> seeds = {"seed_rrcsetup"};
  std::string validators;
  std::string out = "-";

  std::string evidence;
  size_t ie_budget = 0;
  bool ie_budget_set = false;
  std::string client = "mock";
  std::string rules;
  std::string profile = "buggy-oai-like";
  std::string mode = "guided";
  size_t sample = 0;
  uint64_t rng_seed = 0;
  int workers = 0;
  std::string format = "json";
  std::string in;
  bool all_packages = false;

  std::vector<int64_t> tests;
  std::string timeout_s;
  std::string overhead_s;
  std::string budget_s = "86400";
  std::vector<uint64_t> fields;
};

fs::path Or(const std::string& given, const fs::path& fallback) {
  return given.empty() ? fallback : fs::path(given);
}

absl::Status Emit(const Options& o, const std::string& text) {
  if (o.out == "-") {
    std::cout << text;
    return absl::OkStatus();
  }
  return WriteTextFile(o.out, text);
}

absl::Status EmitJson(const Options& o, const ordered_json& j) {
  return Emit(o, j.dump(2) + "\n");
}

// Explicit --config, else the bundled one when present, else defaults.
absl::StatusOr<ToolConfig> Config(const Options& o) {
  const fs::path bundled = fs::path(o.assets) / "config.json";
  if (o.config.empty() && !fs::exists(bundled)) {
    ToolConfig defaults;
    defaults.ota.overhead_s = Rational(1071, 100);
    return defaults;
  }
  absl::StatusOr<ToolConfig> c = LoadToolConfig(Or(o.config, bundled));
  if (!c.ok()) return c.status();
  if (!o.evidence.empty()) {
    absl::StatusOr<EvidenceMode> mode = ParseEvidenceMode(o.evidence);
    if (!mode.ok()) return mode.status();
    c->campaign.evidence = *mode;
  }
  if (o.ie_budget_set) c->campaign.ie_budget = o.ie_budget;
  if (o.workers > 0) c->campaign.workers = o.workers;
  c->campaign.client = o.client;
  return c;
}

absl::StatusOr<std::shared_ptr<const Schema>> LoadSchema(const Options& o) {
  return LoadSharedSchema(Or(o.schema, fs::path(o.assets) / "mini-rrc.json"));
}

absl::StatusOr<Corpus> LoadCorpus(const Options& o) {
  return Corpus::Load(Or(o.corpus, fs::path(o.assets) / "corpus/corpus.json"));
}

absl::StatusOr<std::unique_ptr<InducerClient>> MakeClient(
    const Options& o, const ToolConfig& config, const Schema& schema) {
  if (o.client == "mock") return MockInducer(schema);
  if (o.client != "live") {
    return absl::InvalidArgumentError(
        absl::StrCat("--client must be mock or live, not '", o.client, "'"));
  }
  absl::StatusOr<LiveClientConfig> live =
      LiveClientConfig::FromJson(config.client);
  if (!live.ok()) return live.status();
  return MakeLiveInducer(*live);
}

fs::path ProfilePath(const Options& o) {
  if (o.profile.find('/') != std::string::npos ||
      fs::path(o.profile).extension() == ".json") {
    return o.profile;
  }
  return fs::path(o.assets) / "profiles" / (o.profile + ".json");
}

absl::StatusOr<CampaignInputs> LoadInputs(const Options& o) {
  CampaignInputs in;
  absl::StatusOr<std::shared_ptr<const Schema>> schema = LoadSchema(o);
  if (!schema.ok()) return schema.status();
  in.schema = *schema;
  absl::StatusOr<Corpus> corpus = LoadCorpus(o);
  if (!corpus.ok()) return corpus.status();
  in.corpus = *std::move(corpus);
  const fs::path seeds_dir = Or(o.seeds_dir, fs::path(o.assets) / "seeds");
  for (const std::string& name : o.seeds) {
    absl::StatusOr<Seed> seed = LoadSeed(in.schema, seeds_dir, name);
    if (!seed.ok()) return seed.status();
    in.seeds.push_back(*std::move(seed));
  }
  absl::StatusOr<UeProfile> profile = LoadProfile(ProfilePath(o), *in.schema);
  if (!profile.ok()) return profile.status();
  in.profile = *std::move(profile);
  absl::StatusOr<RuleSet> validators = ValidatorRuleSet(
      *in.schema,
      Or(o.validators, fs::path(o.assets) / "rules/mini_rules.dsl"));
  if (!validators.ok()) return validators.status();
  in.target_rules = *std::move(validators);
  return in;
}

std::vector<FieldPair> GuidedPairs(const Schema& schema, size_t ie_budget) {
  const size_t budget = ie_budget == 0 ? schema.ies().size() : ie_budget;
  std::vector<FieldPair> pairs =
      IntraPairs(schema, SelectIntraIes(schema, budget).selected);
  for (FieldPair& p : ReferencePairs(schema)) pairs.push_back(std::move(p));
  return pairs;
}

absl::Status Extract(const Options& o) {
  absl::StatusOr<std::shared_ptr<const Schema>> schema = LoadSchema(o);
  if (!schema.ok()) return schema.status();
  return EmitJson(o, SchemaRuleSet(**schema).ToJson());
}

absl::Status Mine(const Options& o) {
  absl::StatusOr<ToolConfig> config = Config(o);
  if (!config.ok()) return config.status();
  absl::StatusOr<std::shared_ptr<const Schema>> schema = LoadSchema(o);
  if (!schema.ok()) return schema.status();
  absl::StatusOr<Corpus> corpus = LoadCorpus(o);
  if (!corpus.ok()) return corpus.status();
  const Schema& s = **schema;
  const size_t budget = config->campaign.ie_budget == 0
                            ? s.ies().size()
                            : config->campaign.ie_budget;
  ordered_json out;
  out["evidence"] = EvidenceModeName(config->campaign.evidence);
  out["coverage"] = SelectIntraIes(s, budget).ToJson();
  out["references"] = ordered_json::array();
  for (const ReferenceField& r : FindReferenceFields(s)) {
    out["references"].push_back(
        {{"field", r.field.ToString()}, {"target_ie", r.target_ie}});
  }
  out["packages"] = ordered_json::array();
  for (const FieldPair& pair : GuidedPairs(s, config->campaign.ie_budget)) {
    const EvidencePackage pkg =
        ScanEvidence(s, *corpus, pair, config->campaign.evidence);
    if (o.all_packages || !pkg.snippets.empty())
      out["packages"].push_back(pkg.ToJson());
  }
  return EmitJson(o, out);
}

absl::Status Induce(const Options& o) {
  absl::StatusOr<ToolConfig> config = Config(o);
  if (!config.ok()) return config.status();
  absl::StatusOr<std::shared_ptr<const Schema>> schema = LoadSchema(o);
  if (!schema.ok()) return schema.status();
  absl::StatusOr<Corpus> corpus = LoadCorpus(o);
  if (!corpus.ok()) return corpus.status();
  absl::StatusOr<std::unique_ptr<InducerClient>> client =
      MakeClient(o, *config, **schema);
  if (!client.ok()) return client.status();
  const BatchResult batch =
      BatchInduce(GuidedPairs(**schema, config->campaign.ie_budget), *corpus,
                  config->campaign.evidence, **client, **schema,
                  config->campaign.induction);
  RuleSet rules = SchemaRuleSet(**schema);
  rules.rules = batch.rules;
  ordered_json out = rules.ToJson();
  ordered_json induction;
  induction["evidence"] = EvidenceModeName(config->campaign.evidence);
  induction["client"] = o.client;
  induction["stats"] = batch.stats.ToJson();
  induction["reports"] = ordered_json::array();
  for (const GateReport& r : batch.reports)
    induction["reports"].push_back(r.ToJson());
  induction["transport_failures"] = ordered_json::array();
  for (const TransportFailure& f : batch.failures) {
    induction["transport_failures"].push_back(
        {{"pair", f.pair.ToString()}, {"error", f.error}});
  }
  out["induction"] = induction;
  absl::Status st = EmitJson(o, out);
  if (st.ok() && !batch.failures.empty()) {
    return absl::UnavailableError(
        absl::StrCat(batch.failures.size(), " pair(s) hit transport failures"));
  }
  return st;
}

absl::Status Gen(const Options& o) {
  absl::StatusOr<ToolConfig> config = Config(o);
  if (!config.ok()) return config.status();
  absl::StatusOr<CampaignInputs> in = LoadInputs(o);
  if (!in.ok()) return in.status();
  CasePlan plan;
  if (!o.rules.empty()) {
    absl::StatusOr<RuleSet> rules = LoadRuleSet(o.rules);
    if (!rules.ok()) return rules.status();
    plan = PlanCases(in->seeds, *rules, config->campaign.dependency);
  } else {
    absl::StatusOr<std::unique_ptr<InducerClient>> client =
        MakeClient(o, *config, *in->schema);
    if (!client.ok()) return client.status();
    GuidedPlan guided = PlanGuided(*in, config->campaign, **client);
    plan.cases = std::move(guided.cases);
    plan.infeasible = std::move(guided.infeasible);
  }
  std::string lines;
  for (const TestCase& tc : plan.cases) {
    lines += tc.ToJson(*in->schema).dump();
    lines += "\n";
  }
  for (const InfeasibleEntry& e : plan.infeasible) {
    std::cerr << "infeasible " << e.constraint << " on " << e.seed << ": "
              << e.reason << "\n";
  }
  return Emit(o, lines);
}

absl::StatusOr<ReportFormat> Format(const Options& o) {
  if (o.format == "json") return ReportFormat::kJson;
  if (o.format == "table") return ReportFormat::kTextTable;
  return absl::InvalidArgumentError(
      absl::StrCat("--format must be json or table, not '", o.format, "'"));
}

absl::Status Run(const Options& o) {
  absl::StatusOr<ReportFormat> format = Format(o);
  if (!format.ok()) return format.status();
  absl::StatusOr<ToolConfig> config = Config(o);
  if (!config.ok()) return config.status();
  absl::StatusOr<CampaignInputs> in = LoadInputs(o);
  if (!in.ok()) return in.status();
  CampaignMode mode;
  if (o.mode == "enumeration") {
    mode = CampaignMode::Enumeration(o.sample, o.rng_seed);
  } else if (o.mode != "guided") {
    return absl::InvalidArgumentError(absl::StrCat(
        "--mode must be guided or enumeration, not '", o.mode, "'"));
  }
  absl::StatusOr<std::unique_ptr<InducerClient>> client =
      MakeClient(o, *config, *in->schema);
  if (!client.ok()) return client.status();
  absl::StatusOr<CampaignReport> report =
      RunCampaign(*in, mode, config->campaign, **client);
  if (!report.ok()) return report.status();
  absl::Status st = Emit(o, RenderReport(*report, *format));
  if (st.ok() && !report->transport_failures.empty()) {
    return absl::UnavailableError(
        "partial report: induction transport failures");
  }
  return st;
}

absl::Status Report(const Options& o) {
  absl::StatusOr<ReportFormat> format = Format(o);
  if (!format.ok()) return format.status();
  absl::StatusOr<nlohmann::json> j = ReadJsonFile(o.in);
  if (!j.ok()) return j.status();
  absl::StatusOr<CampaignReport> report = CampaignReport::FromJson(*j);
  if (!report.ok()) return report.status();
  return Emit(o, RenderReport(*report, *format));
}

absl::Status Budget(const Options& o) {
  absl::StatusOr<ToolConfig> config = Config(o);
  if (!config.ok()) return config.status();
  BudgetModel model = config->ota;
  for (const auto& [text, slot] : {std::pair{o.timeout_s, &model.timeout_s},
                                   {o.overhead_s, &model.overhead_s}}) {
    if (text.empty()) continue;
    absl::StatusOr<Rational> r = Rational::Parse(text);
    if (!r.ok()) return r.status();
    *slot = *r;
  }
  absl::StatusOr<Rational> budget = Rational::Parse(o.budget_s);
  if (!budget.ok()) return budget.status();
  ordered_json out;
  out["model"] = model.ToJson();
  out["estimates"] = ordered_json::array();
  for (int64_t n : o.tests) {
    const Rational seconds = EstimateSeconds(model, n);
    out["estimates"].push_back(
        {{"tests", n},
         {"seconds", FormatDecimal(seconds, 2)},
         {"days", FormatDecimal(SecondsToDays(seconds), 2)}});
  }
  out["budget_seconds"] = FormatDecimal(*budget, 2);
  out["tests_in_budget"] = TestsInBudget(model, *budget);
  out["pair_space"] = ordered_json::array();
  for (uint64_t n : o.fields) {
    out["pair_space"].push_back({{"fields", n}, {"pairs", PairSpace(n)}});
  }
  return EmitJson(o, out);
}

int Main(int argc, char** argv) {
  CLI::App app{"semprobe: constraint-guided semantic testing of RRC messages"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--assets", o.assets, "Asset directory")
      ->capture_default_str();
  app.add_option("--config", o.config,
                 "Tool config (default <assets>/config.json)");
  app.add_option("--schema", o.schema,
                 "Schema JSON (default <assets>/mini-rrc.json)");
  app.add_option("--corpus", o.corpus, "Corpus manifest");
  app.add_option("--seeds-dir", o.seeds_dir,
                 "Directory of seed .bin/.json pairs");
  app.add_option("--seed", o.seeds, "Seed name, repeatable")
      ->capture_default_str();
  app.add_option("--validators", o.validators, "DSL file of receiver checks");
  app.add_option("-o,--out", o.out, "Output file, - for stdout")
      ->capture_default_str();

  auto add_evidence = [&](CLI::App* sub) {
    sub->add_option("--evidence", o.evidence,
                    "full | no-crossdocs | asn1-only");
    sub->add_option_function<size_t>(
        "--ie-budget",
        [&](const size_t& v) {
          o.ie_budget = v;
          o.ie_budget_set = true;
        },
        "IEs chosen by greedy cover, 0 for all");
  };
  auto add_client = [&](CLI::App* sub) {
    sub->add_option("--client", o.client, "mock | live")->capture_default_str();
  };

  CLI::App* extract =
      app.add_subcommand("extract", "Schema range and presence rules");
  CLI::App* mine =
      app.add_subcommand("mine", "Evidence packages for guided pairs");
  add_evidence(mine);
  mine->add_flag("--all", o.all_packages, "Include packages without snippets");
  CLI::App* induce = app.add_subcommand("induce", "Induce dependency rules");
  add_evidence(induce);
  add_client(induce);
  CLI::App* gen = app.add_subcommand("gen", "Test cases as JSON lines");
  add_evidence(gen);
  add_client(gen);
  gen->add_option("--rules", o.rules,
                  "Rule set JSON; induce in-process when absent");
  CLI::App* run =
      app.add_subcommand("run", "Execute a campaign on the simulated UE");
  add_evidence(run);
  add_client(run);
  run->add_option("--profile", o.profile, "Profile name or path")
      ->capture_default_str();
  run->add_option("--mode", o.mode, "guided | enumeration")
      ->capture_default_str();
  run->add_option("--sample", o.sample, "Enumeration: field pairs to draw");
  run->add_option("--rng-seed", o.rng_seed, "Enumeration: sampling seed");
  run->add_option("--workers", o.workers, "Parallel executions");
  run->add_option("--format", o.format, "json | table")->capture_default_str();
  gen->add_option("--profile", o.profile, "Profile name or path")
      ->capture_default_str();
  CLI::App* report = app.add_subcommand("report", "Render a saved report");
  report->add_option("--in", o.in, "Report JSON")->required();
  report->add_option("--format", o.format, "json | table")
      ->capture_default_str();
  CLI::App* budget = app.add_subcommand("budget", "OTA budget arithmetic");
  budget->add_option("--tests", o.tests, "Test counts to price, repeatable");
  budget->add_option("--timeout", o.timeout_s, "Seconds per test");
  budget->add_option("--overhead", o.overhead_s,
                     "Reinitialization seconds per test");
  budget
      ->add_option("--budget-seconds", o.budget_s, "Budget for tests_in_budget")
      ->capture_default_str();
  budget->add_option("--fields", o.fields,
                     "Field counts for C(n, 2), repeatable");

  CLI11_PARSE(app, argc, argv);

  absl::Status st;
  if (extract->parsed()) st = Extract(o);
  if (mine->parsed()) st = Mine(o);
  if (induce->parsed()) st = Induce(o);
  if (gen->parsed()) st = Gen(o);
  if (run->parsed()) st = Run(o);
  if (report->parsed()) st = Report(o);
  if (budget->parsed()) st = Budget(o);
  if (!st.ok()) {
    std::cerr << "semprobe: " << st << "\n";
    return st.code() == absl::StatusCode::kUnavailable ? 3 : 1;
  }
  return 0;
}

}  // namespace
}  // namespace semprobe

int main(int argc, char** argv) { return semprobe::Main(argc, argv); }
