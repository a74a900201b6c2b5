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

// Acceptance suite: one PASS/FAIL line per criterion; exit status 0 only
// when every criterion passes.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "dsl_oracle.h"
#include "semprobe/budget.h"
#include "semprobe/campaign.h"
#include "semprobe/dsl_evaluate.h"
#include "semprobe/dsl_normalize.h"
#include "semprobe/dsl_parser.h"
#include "semprobe/mutation_engine.h"
#include "semprobe/report.h"
#include "semprobe/rule_induction.h"
#include "semprobe/schema_rules.h"
#include "semprobe/spec_miner.h"
#include "semprobe/ue_sim.h"
#include "semprobe/wire_codec.h"
#include "test_util.h"

namespace semprobe {
namespace {

using testing::AssetDir;
using testing::MiniSchema;
using testing::Must;
using testing::P;

// Pinned tolerances.
constexpr double kCodecSeconds = 5.0;
constexpr double kEnumerationSeconds = 60.0;
constexpr int kDayPlaces = 2;
constexpr int kCodecMessages = 1000;
constexpr int kEvaluatorPairs = 500;
constexpr int kCaseStudyRepeats = 10;

struct Result {
  bool pass = true;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

const DecodedMessage& Seed() {
  static const auto* seed = new DecodedMessage(testing::SeedMessage());
  return *seed;
}

FieldPath First(const std::string& pattern) {
  for (const LeafEntry& leaf : Seed().flat()) {
    if (leaf.present && leaf.pattern.ToString() == pattern) return leaf.path;
  }
  std::cerr << "seed has no " << pattern << "\n";
  std::abort();
}

ConstraintRule Rule(const std::string& text) {
  NormalizeResult n = ParseAndNormalize(text, *MiniSchema());
  if (!n.ok()) {
    std::cerr << text << ": " << n.reason << "\n";
    std::abort();
  }
  return *n.rule;
}

std::vector<FieldPair> GuidedPairs(size_t budget) {
  std::vector<FieldPair> pairs =
      IntraPairs(*MiniSchema(), SelectIntraIes(*MiniSchema(), budget).selected);
  for (const FieldPair& p : ReferencePairs(*MiniSchema())) pairs.push_back(p);
  return pairs;
}

Result CodecSoundness() {
  const auto start = std::chrono::steady_clock::now();
  const Schema& schema = *MiniSchema();
  std::mt19937_64 rng(1);
  int ok = 0;
  for (int i = 0; i < kCodecMessages; ++i) {
    const Value m = testing::RandomMessage(schema, rng);
    absl::StatusOr<std::vector<uint8_t>> bytes =
        Encode(schema, m, EncodeMode::kChecked);
    if (!bytes.ok()) continue;
    absl::StatusOr<Value> back = Decode(schema, *bytes);
    if (back.ok() && *back == m) ++ok;
  }
  absl::StatusOr<std::vector<uint8_t>> seed =
      Encode(schema, testing::SeedTree(), EncodeMode::kChecked);
  const bool golden = seed.ok() && *seed == testing::SeedBytes();
  const double secs = Seconds(start);
  return {ok == kCodecMessages && golden && secs < kCodecSeconds,
          absl::StrCat(ok, "/", kCodecMessages, " round trips, seed bytes ",
                       golden ? "identical" : "DIFFER", ", ", secs,
                       " s (limit ", kCodecSeconds, " s)")};
}

Result RangeProbes() {
  auto probes = [](const std::string& pattern, std::string* shown) {
    std::set<std::pair<int64_t, std::string>> got;
    RangeConstraint rc;
    for (const RangeConstraint& r : ExtractRanges(*MiniSchema())) {
      if (r.path.ToString() == pattern) rc = r;
    }
    const PlanOutcome out = PlanRange(Seed(), rc);
    // The first instance's probes.
    for (size_t i = 0; i < std::min<size_t>(2, out.cases.size()); ++i) {
      const TestCase& tc = out.cases[i];
      got.emplace(std::get<int64_t>(*tc.edits[0].value),
                  std::string(DeliveryName(tc.delivery)));
    }
    std::vector<std::string> parts;
    for (const auto& [v, d] : got) parts.push_back(absl::StrCat(v, "/", d));
    *shown = absl::StrCat("[", rc.lo, ",", rc.hi, "] -> {",
                          absl::StrJoin(parts, ", "), "}");
    return got;
  };
  std::string a, b;
  const auto wide = probes("SRS-Resource.spatialRelationInfo.csi-RS-Index", &a);
  const auto narrow = probes("SRS-Resource.resourceMapping.startPosition", &b);
  using Set = std::set<std::pair<int64_t, std::string>>;
  const bool pass = wide == Set{{-1, "raw-override"}, {192, "wire"}} &&
                    narrow == Set{{-1, "raw-override"}, {6, "wire"}};
  return {pass, a + "; " + b};
}

Result CaseStudies() {
  const RuleSet validators = Must(
      ValidatorRuleSet(*MiniSchema(), AssetDir() / "rules/mini_rules.dsl"));
  const UeSimulator sim(
      MiniSchema(), validators,
      Must(LoadProfile(AssetDir() / "profiles/buggy-oai-like.json",
                       *MiniSchema())));
  const ConstraintRule rel =
      Rule("INTRA(SRS-Resource): GE(startPosition, nrofSymbols - 1)");
  const ConstraintRule match = Rule(
      "INTER(SearchSpace, ControlResourceSet): "
      "MATCH(SearchSpace.controlResourceSetId, "
      "ControlResourceSet.controlResourceSetId)");
  struct Study {
    std::string name;
    std::vector<Edit> edits;
    std::string constraint;
    std::string site;
    const ConstraintRule* rule;
  };
  const std::vector<Study> studies = {
      {"a",
       {Edit::SetValue(First("SRS-Resource.resourceMapping.startPosition"),
                       int64_t{6})},
       "range:SRS-Resource.resourceMapping.startPosition",
       "nr_mac_common.c:5122",
       nullptr},
      {"b",
       {Edit::Omit(
           First("SRS-Resource.spatialRelationInfo.ssb-Index").Parent())},
       "presence:SRS-Resource.spatialRelationInfo",
       "nr_srs_spatial.c:2217",
       nullptr},
      {"c",
       {Edit::SetValue(First("SRS-Resource.resourceMapping.nrofSymbols"),
                       std::string("n4"))},
       rel.id,
       "nr_srs_rx.c:913",
       &rel},
      {"d",
       {Edit::SetValue(First("SearchSpace.controlResourceSetId"), int64_t{11})},
       match.id,
       "nr_pdcch_config.c:1408",
       &match},
  };
  std::vector<std::string> parts;
  bool pass = true;
  for (const Study& s : studies) {
    int hits = 0;
    for (int r = 0; r < kCaseStudyRepeats; ++r) {
      // Deliver on the wire: edit, re-encode, decode.
      absl::StatusOr<DecodedMessage> edited = ApplyEdits(Seed(), s.edits);
      if (!edited.ok()) break;
      absl::StatusOr<std::vector<uint8_t>> bytes = Reencode(*edited);
      if (!bytes.ok()) break;
      absl::StatusOr<DecodedMessage> delivered = View(MiniSchema(), *bytes);
      if (!delivered.ok()) break;
      const Outcome out = sim.RunMessage(*delivered);
      const bool violated =
          s.rule == nullptr || Evaluate(*s.rule, *delivered).violated();
      if (violated && out.kind == Outcome::Kind::kCrash &&
          out.constraint == s.constraint && out.mode.site == s.site) {
        ++hits;
      }
    }
    pass = pass && hits == kCaseStudyRepeats;
    parts.push_back(absl::StrCat("(", s.name, ") ", hits, "/",
                                 kCaseStudyRepeats, " at ", s.site));
  }
  return {pass, absl::StrJoin(parts, ", ")};
}

Result EvaluatorOracle() {
  const Schema& schema = *MiniSchema();
  std::mt19937_64 rng(500);
  testing::RuleGen gen(schema, rng);
  testing::BruteForce oracle(schema);
  int compared = 0;
  int mismatches = 0;
  std::map<Verdict::Kind, int> seen;
  while (compared < kEvaluatorPairs) {
    const std::string text = gen.Next();
    absl::StatusOr<ConstraintRule> parsed = ParseRule(text);
    if (!parsed.ok()) continue;
    NormalizeResult norm = Normalize(*parsed, schema);
    if (!norm.ok()) continue;
    const DecodedMessage msg = Must(DecodedMessage::FromTree(
        MiniSchema(), testing::RandomMessage(schema, rng)));
    const Verdict::Kind got = Evaluate(*norm.rule, msg).kind;
    if (got != oracle.Run(*parsed, msg.tree())) ++mismatches;
    ++seen[got];
    ++compared;
  }
  return {
      mismatches == 0,
      absl::StrCat(compared, " pairs, ", mismatches, " mismatches (violated ",
                   seen[Verdict::Kind::kViolated], ", satisfied ",
                   seen[Verdict::Kind::kSatisfied], ", inapplicable ",
                   seen[Verdict::Kind::kInapplicable], ")")};
}

Result MinimalEdits() {
  const CampaignInputs in = testing::BundledInputs("buggy-oai-like");
  auto client = MockInducer(*in.schema);
  const GuidedPlan plan = PlanGuided(in, CampaignConfig{}, *client);
  std::map<std::string, const ConstraintRule*> by_id;
  for (const ConstraintRule& r : plan.rules.rules) by_id[r.id] = &r;
  int checked = 0;
  int minimal = 0;
  for (const TestCase& tc : plan.cases) {
    auto it = by_id.find(tc.targeted);
    if (it == by_id.end()) continue;
    ++checked;
    absl::StatusOr<int64_t> best =
        testing::OracleMinDeviation(Seed(), *it->second);
    if (best.ok() && EditDeviation(Seed(), tc.edits) == *best) ++minimal;
  }
  return {checked > 0 && minimal == checked,
          absl::StrCat(minimal, "/", checked,
                       " dependency cases at the exhaustive minimum")};
}

Result InductionAblation() {
  const Corpus corpus = Must(Corpus::Load(AssetDir() / "corpus/corpus.json"));
  auto client = MockInducer(*MiniSchema());
  std::map<EvidenceMode, size_t> counts;
  int citations = 0;
  int verbatim = 0;
  for (EvidenceMode mode : {EvidenceMode::kFull, EvidenceMode::kNoCrossDocs,
                            EvidenceMode::kAsn1Only}) {
    const BatchResult batch =
        BatchInduce(GuidedPairs(MiniSchema()->ies().size()), corpus, mode,
                    *client, *MiniSchema());
    counts[mode] = batch.rules.size();
    for (const GateReport& report : batch.reports) {
      if (!report.accepted) continue;
      const EvidencePackage pkg =
          ScanEvidence(*MiniSchema(), corpus, report.pair, mode);
      const InductionResult again =
          CheckCandidate(pkg, report.candidate, *MiniSchema());
      for (const Citation& c : again.rule->citations) {
        ++citations;
        for (const Snippet& s : pkg.snippets) {
          if (s.doc == c.doc && s.text.find(c.quote) != std::string::npos) {
            ++verbatim;
            break;
          }
        }
      }
    }
  }
  const size_t full = counts[EvidenceMode::kFull];
  const size_t local = counts[EvidenceMode::kNoCrossDocs];
  const size_t asn1 = counts[EvidenceMode::kAsn1Only];
  return {full > local && local >= asn1 && asn1 == 0 && citations > 0 &&
              verbatim == citations,
          absl::StrCat("full ", full, " > no-crossdocs ", local,
                       " >= asn1-only ", asn1, "; ", verbatim, "/", citations,
                       " citations verbatim")};
}

Result GreedyCover() {
  const nlohmann::json raw = Must(ReadJsonFile(AssetDir() / "mini-rrc.json"));
  std::map<std::string, std::set<std::string>> leaves;
  for (const nlohmann::json& ie : raw["ies"])
    leaves[ie["name"].get<std::string>()];
  for (const auto& [path, domain] : testing::OracleLeafDomains(raw)) {
    const size_t dot = path.find('.');
    leaves[path.substr(0, dot)].insert(path.substr(dot + 1));
  }
  std::vector<std::string> names;
  std::set<std::string> universe;
  for (const auto& [ie, set] : leaves) {
    names.push_back(ie);
    universe.insert(set.begin(), set.end());
  }
  const size_t n = names.size();
  std::vector<size_t> optimum(n + 1, 0);
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::set<std::string> u;
    for (size_t i = 0; i < n; ++i) {
      if (mask & (1u << i))
        u.insert(leaves[names[i]].begin(), leaves[names[i]].end());
    }
    const size_t k = static_cast<size_t>(__builtin_popcount(mask));
    optimum[k] = std::max(optimum[k], u.size());
  }
  bool pass = n <= 8;
  std::vector<std::string> suboptimal;
  std::string budget3;
  for (size_t k = 1; k <= n; ++k) {
    const CoverageReport got = SelectIntraIes(*MiniSchema(), k);
    std::set<std::string> covered;
    for (const std::string& ie : got.selected) {
      covered.insert(leaves[ie].begin(), leaves[ie].end());
    }
    const Rational recount(static_cast<int64_t>(covered.size()),
                           static_cast<int64_t>(universe.size()));
    pass = pass && got.covered_fraction == recount;
    // Greedy stops when nothing new is covered, which is optimal by then.
    if (covered.size() != optimum[std::min(k, n)] && got.selected.size() == k) {
      suboptimal.push_back(absl::StrCat(k));
    }
    if (k == 3) {
      budget3 = absl::StrCat("budget 3 covers ",
                             got.covered_fraction.ToString(), " (optimum ",
                             Rational(static_cast<int64_t>(optimum[3]),
                                      static_cast<int64_t>(universe.size()))
                                 .ToString(),
                             ")");
    }
  }
  pass = pass && suboptimal.empty();
  return {pass, absl::StrCat(n, " IEs; ", budget3,
                             "; greedy below optimum at budgets {",
                             absl::StrJoin(suboptimal, ","), "}")};
}

Result BudgetArithmetic() {
  const BudgetModel flat;
  std::vector<std::string> misses;
  auto days = [&](int64_t n) {
    return FormatDecimal(SecondsToDays(EstimateSeconds(flat, n)), kDayPlaces);
  };
  auto expect = [&](const std::string& what, const std::string& got,
                    const std::string& want) {
    if (got != want)
      misses.push_back(absl::StrCat(what, " = ", got, ", expected ", want));
  };
  expect("1458 x 45 s", EstimateSeconds(flat, 1458).ToString(), "65610");
  expect("1458 tests in days", days(1458), "0.76");
  expect("30600 tests in days", days(30600), "15.94");
  // 1.17e3 at three significant figures.
  expect("2.25e6 tests in days",
         FormatDecimal(SecondsToDays(EstimateSeconds(flat, 2250000)) / 10, 0),
         "117");
  expect("C(939,2)", absl::StrCat(PairSpace(939)), "440391");
  const int64_t literal =
      TestsInBudget(BudgetModel{45, Rational(1071, 100)}, kSecondsPerDay);
  expect("floor(86400 / (45 + 10.71))", absl::StrCat(literal), "1551");
  const Rational derived = DerivedOverhead(kSecondsPerDay, 1551, 45);
  const int64_t exact = TestsInBudget(BudgetModel{45, derived}, kSecondsPerDay);
  return {misses.empty(),
          absl::StrCat(misses.empty() ? "all figures match"
                                      : absl::StrJoin(misses, "; "),
                       " [exact overhead ", derived.ToString(), " ~ ",
                       FormatDecimal(derived, 2), " s gives ", exact, "]")};
}

Result GuidedVersusEnumeration() {
  const CampaignInputs in = testing::BundledInputs("buggy-oai-like");
  auto client = MockInducer(*in.schema);
  const GuidedPlan plan = PlanGuided(in, CampaignConfig{}, *client);
  std::vector<FieldPair> pairs;
  for (const ConstraintRule& r : plan.rules.rules) {
    const std::vector<FieldPath> f = r.Fields();
    pairs.push_back(FieldPair{f[0], f[1]});
  }
  const CampaignReport guided =
      Must(RunCampaign(in, CampaignMode::Guided(), CampaignConfig{}, *client));
  const auto start = std::chrono::steady_clock::now();
  const CampaignReport enumeration = Must(RunCampaign(
      in, CampaignMode::EnumerationOver(pairs), CampaignConfig{}, *client));
  const double secs = Seconds(start);
  std::set<std::string> sites(guided.unique_sites.begin(),
                              guided.unique_sites.end());
  size_t reached = 0;
  std::set<std::string> seeded;
  for (const auto& [id, mode] : in.profile.failure_map)
    seeded.insert(mode.site);
  for (const std::string& s : seeded) reached += sites.contains(s);
  const int64_t g = guided.Total().generated;
  const int64_t e = enumeration.Total().generated;
  return {g < e && reached == seeded.size() && secs < kEnumerationSeconds,
          absl::StrCat("guided ", g, " < enumeration ", e, " cases on ",
                       pairs.size(), " matched pairs; ", reached, "/",
                       seeded.size(), " seeded sites reached; enumeration ",
                       secs, " s (limit ", kEnumerationSeconds, " s)")};
}

std::string CliRun(const std::string& out) {
#ifdef SEMPROBE_CLI_PATH
  const std::string cmd =
      absl::StrCat("\"", SEMPROBE_CLI_PATH,
                   "\" run --mode guided --client mock -o \"", out, "\"");
  if (std::system(cmd.c_str()) != 0) return "";
  absl::StatusOr<std::string> text = ReadTextFile(out);
  return text.ok() ? *text : "";
#else
  (void)out;
  return "";
#endif
}

Result Determinism() {
  const CampaignInputs in = testing::BundledInputs("buggy-oai-like");
  const CampaignConfig config = testing::BundledConfig().campaign;
  auto client = MockInducer(*in.schema);
  const std::string a = RenderReport(
      Must(RunCampaign(in, CampaignMode::Guided(), config, *client)),
      ReportFormat::kJson);
  const std::string b = RenderReport(
      Must(RunCampaign(in, CampaignMode::Guided(), config, *client)),
      ReportFormat::kJson);
  bool pass = a == b;
  std::string detail =
      absl::StrCat("in-process reports ", pass ? "identical" : "DIFFER", " (",
                   a.size(), " bytes)");
#ifdef SEMPROBE_CLI_PATH
  const std::filesystem::path dir = std::filesystem::temp_directory_path();
  const std::string c = CliRun((dir / "semprobe_accept_1.json").string());
  const std::string d = CliRun((dir / "semprobe_accept_2.json").string());
  const bool cli = !c.empty() && c == d && c == a;
  pass = pass && cli;
  absl::StrAppend(
      &detail, "; CLI runs ",
      cli ? "identical to each other and in-process" : "DIFFER or failed");
#endif
  return {pass, detail};
}

int Main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria =
      {
          {"codec soundness", CodecSoundness},
          {"range-probe fidelity", RangeProbes},
          {"case-study regressions", CaseStudies},
          {"evaluator oracle equivalence", EvaluatorOracle},
          {"minimal-edit oracle", MinimalEdits},
          {"induction ablation ordering", InductionAblation},
          {"greedy-cover optimality", GreedyCover},
          {"budget arithmetic", BudgetArithmetic},
          {"guided vs enumeration", GuidedVersusEnumeration},
          {"determinism", Determinism},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const Result r = criteria[i].second();
    failed += r.pass ? 0 : 1;
    std::cout << (r.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] "
              << criteria[i].first << ": " << r.detail << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace semprobe

int main() { return semprobe::Main(); }
