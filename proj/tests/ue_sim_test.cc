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

#include "semprobe/ue_sim.h"

#include <algorithm>
#include <string>

#include "gtest/gtest.h"
#include "semprobe/dsl_evaluate.h"
#include "semprobe/dsl_normalize.h"
#include "semprobe/mutation_engine.h"
#include "semprobe/rule_set.h"
#include "semprobe/schema_rules.h"
#include "test_util.h"

namespace semprobe {
namespace {

using json = nlohmann::json;
using testing::AssetDir;
using testing::MiniSchema;
using testing::Must;
using testing::P;

const DecodedMessage& Seed() {
  static const auto* seed = new DecodedMessage(testing::SeedMessage());
  return *seed;
}

const RuleSet& Validators() {
  static const auto* rules = new RuleSet(Must(
      ValidatorRuleSet(*MiniSchema(), AssetDir() / "rules/mini_rules.dsl")));
  return *rules;
}

UeSimulator Sim(const std::string& profile) {
  return UeSimulator(
      MiniSchema(), Validators(),
      Must(LoadProfile(AssetDir() / "profiles" / (profile + ".json"),
                       *MiniSchema())));
}

std::string RuleId(const std::string& text) {
  return ParseAndNormalize(text, *MiniSchema()).rule->id;
}

const char kMatch[] =
    "INTER(SearchSpace, ControlResourceSet): "
    "MATCH(SearchSpace.controlResourceSetId, "
    "ControlResourceSet.controlResourceSetId)";
const char kPucch[] =
    "INTRA(PUCCH-Config): IMPLIES(EQ(format, 'format0'); EQ(nrofPRBs, 1))";

// Concrete path of the first seed leaf whose pattern is `pattern`.
FieldPath First(const std::string& pattern) {
  for (const LeafEntry& leaf : Seed().flat()) {
    if (leaf.pattern.ToString() == pattern) return leaf.path;
  }
  ADD_FAILURE() << pattern;
  return {};
}

DecodedMessage Edited(std::vector<Edit> edits) {
  return Must(ApplyEdits(Seed(), edits));
}

TEST(UeSimTest, SeedAttachesUnderEveryProfile) {
  for (const char* name : {"strict", "buggy-oai-like"}) {
    const Outcome out = Sim(name).RunMessage(Seed());
    EXPECT_EQ(out.kind, Outcome::Kind::kAttachOk) << name;
    EXPECT_TRUE(out.silent.empty()) << name;
  }
  EXPECT_TRUE(Sim("strict").Violations(Seed()).empty());
}

TEST(UeSimTest, StartPositionProbeCrashesOnlyWhenUnchecked) {
  const std::string id = "range:SRS-Resource.resourceMapping.startPosition";
  const DecodedMessage msg = Edited({Edit::SetValue(
      First("SRS-Resource.resourceMapping.startPosition"), int64_t{6})});
  const Outcome buggy = Sim("buggy-oai-like").RunMessage(msg);
  EXPECT_EQ(buggy.kind, Outcome::Kind::kCrash);
  EXPECT_EQ(buggy.constraint, id);
  EXPECT_EQ(buggy.mode, (FailureMode{FailureMode::Kind::kSegfault,
                                     "nr_mac_common.c:5122"}));
  const Outcome strict = Sim("strict").RunMessage(msg);
  EXPECT_EQ(strict.kind, Outcome::Kind::kReject);
  EXPECT_EQ(strict.constraint, id);
}

TEST(UeSimTest, RawOverrideProbeIsDelivered) {
  const PlanOutcome plan = PlanRange(
      Seed(),
      RangeConstraint{P("SRS-Resource.resourceMapping.startPosition"), 0, 5});
  const TestCase& under = plan.cases[1];
  ASSERT_EQ(under.delivery, Delivery::kRawOverride);
  const UeSimulator sim = Sim("buggy-oai-like");
  const Outcome out = sim.Run(under);
  // startPosition -1 also breaks the SRS symbol rule, whose id sorts first.
  const std::vector<std::string> v =
      sim.Violations(Must(DeliveredMessage(MiniSchema(), under)));
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[1], "range:SRS-Resource.resourceMapping.startPosition");
  EXPECT_EQ(out.kind, Outcome::Kind::kCrash);
  EXPECT_EQ(out.constraint, v[0]);
  EXPECT_EQ(out.mode.site, "nr_srs_rx.c:913");
}

TEST(UeSimTest, PresenceOmissions) {
  const DecodedMessage no_spatial = Edited({Edit::Omit(P(
      "RRCSetup.srs-Config.srs-ResourceToAddModList[0].spatialRelationInfo"))});
  const Outcome crash = Sim("buggy-oai-like").RunMessage(no_spatial);
  EXPECT_EQ(crash.kind, Outcome::Kind::kCrash);
  EXPECT_EQ(crash.constraint, "presence:SRS-Resource.spatialRelationInfo");
  EXPECT_EQ(crash.mode.site, "nr_srs_spatial.c:2217");

  // A stored prior value covers the omission; without one it is missing.
  const DecodedMessage no_p0 =
      Edited({Edit::Omit(First("PUCCH-Config.p0-nominal"))});
  EXPECT_EQ(Sim("buggy-oai-like").RunMessage(no_p0).kind,
            Outcome::Kind::kAttachOk);
  const Outcome strict = Sim("strict").RunMessage(no_p0);
  EXPECT_EQ(strict.kind, Outcome::Kind::kReject);
  EXPECT_EQ(strict.constraint, "presence:PUCCH-Config.p0-nominal");
}

TEST(UeSimTest, UnmappedDisabledNeedMFaultsAsNullUse) {
  const std::string id = "presence:PUCCH-Config.schedulingRequestID";
  const UeProfile profile = Must(UeProfile::FromJson(
      json{{"name", "null-use"}, {"disabled_checks", {id}}}, *MiniSchema()));
  const UeSimulator sim(MiniSchema(), Validators(), profile);
  const Outcome out = sim.RunMessage(
      Edited({Edit::Omit(First("PUCCH-Config.schedulingRequestID"))}));
  EXPECT_EQ(out.kind, Outcome::Kind::kCrash);
  EXPECT_EQ(out.constraint, id);
  EXPECT_EQ(out.mode,
            (FailureMode{FailureMode::Kind::kSegfault,
                         "null-use:PUCCH-Config.schedulingRequestID"}));
}

TEST(UeSimTest, NeedRAbsenceConforms) {
  const DecodedMessage msg =
      Edited({Edit::Omit(First("SRS-Config.srs-ResourceId"))});
  EXPECT_TRUE(Sim("strict").Violations(msg).empty());
}

TEST(UeSimTest, UnmappedRuleIsSilent) {
  const DecodedMessage msg =
      Edited({Edit::SetValue(First("PUCCH-Config.nrofPRBs"), int64_t{2})});
  const Outcome out = Sim("buggy-oai-like").RunMessage(msg);
  EXPECT_EQ(out.kind, Outcome::Kind::kAttachOk);
  EXPECT_EQ(out.silent, std::vector<std::string>{RuleId(kPucch)});
  EXPECT_EQ(Sim("strict").RunMessage(msg).constraint, RuleId(kPucch));
}

TEST(UeSimTest, MatchViolationAsserts) {
  const DecodedMessage msg = Edited(
      {Edit::SetValue(First("SearchSpace.controlResourceSetId"), int64_t{1})});
  const Outcome out = Sim("buggy-oai-like").RunMessage(msg);
  EXPECT_EQ(out.kind, Outcome::Kind::kCrash);
  EXPECT_EQ(out.constraint, RuleId(kMatch));
  EXPECT_EQ(out.mode, (FailureMode{FailureMode::Kind::kAssert,
                                   "nr_pdcch_config.c:1408"}));
}

TEST(UeSimTest, FirstViolatedCheckInIdOrderDecides) {
  const DecodedMessage msg = Edited(
      {Edit::SetValue(First("PUCCH-Config.nrofPRBs"), int64_t{2}),
       Edit::SetValue(First("SRS-Resource.resourceMapping.startPosition"),
                      int64_t{6})});
  const std::vector<std::string> v = Sim("strict").Violations(msg);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
  EXPECT_EQ(Sim("strict").RunMessage(msg).constraint, v.front());
}

TEST(UeSimTest, UndecodablePayloadIsRejected) {
  TestCase tc;
  tc.id = "broken";
  tc.targeted = "range:x";
  tc.payload = testing::SeedBytes();
  tc.payload.resize(tc.payload.size() / 2);
  const Outcome out = Sim("buggy-oai-like").Run(tc);
  EXPECT_EQ(out.kind, Outcome::Kind::kReject);
  EXPECT_EQ(out.constraint, kDecodeErrorId);
}

// Every crash names a constraint the evaluator sees violated, and reruns
// give the same outcome.
TEST(UeSimTest, CrashAttributionIsSoundAndDeterministic) {
  std::vector<TestCase> cases;
  for (const RangeConstraint& rc : Validators().ranges) {
    for (TestCase& tc : PlanRange(Seed(), rc).cases)
      cases.push_back(std::move(tc));
  }
  for (const PresenceConstraint& pc : Validators().presence) {
    for (TestCase& tc : PlanPresence(Seed(), pc).cases)
      cases.push_back(std::move(tc));
  }
  for (const ConstraintRule& r : Validators().rules) {
    for (TestCase& tc : PlanDependency(Seed(), r).cases)
      cases.push_back(std::move(tc));
  }
  const UeSimulator sim = Sim("buggy-oai-like");
  std::vector<Outcome> outcomes;
  size_t crashes = 0;
  for (const TestCase& tc : cases) {
    const Outcome out = sim.Run(tc);
    EXPECT_EQ(out, sim.Run(tc));
    outcomes.push_back(out);
    if (out.kind != Outcome::Kind::kCrash) continue;
    ++crashes;
    const DecodedMessage msg = Must(DeliveredMessage(MiniSchema(), tc));
    const std::vector<std::string> v = sim.Violations(msg);
    EXPECT_NE(std::find(v.begin(), v.end(), out.constraint), v.end()) << tc.id;
    for (const ConstraintRule& r : Validators().rules) {
      if (r.id == out.constraint) {
        EXPECT_TRUE(Evaluate(r, msg).violated());
      }
    }
  }
  EXPECT_GT(crashes, 0u);
  EXPECT_EQ(
      DedupSites(outcomes),
      (std::set<std::string>{"nr_mac_common.c:5122", "nr_pdcch_config.c:1408",
                             "nr_srs_rx.c:913", "nr_srs_spatial.c:2217"}));
}

TEST(DedupSitesTest, Basics) {
  EXPECT_TRUE(DedupSites({}).empty());
  Outcome crash;
  crash.kind = Outcome::Kind::kCrash;
  crash.mode = FailureMode{FailureMode::Kind::kAssert, "a.c:1"};
  Outcome reject;
  reject.kind = Outcome::Kind::kReject;
  EXPECT_EQ(DedupSites({crash, crash, reject, Outcome{}}),
            std::set<std::string>{"a.c:1"});
}

TEST(UeProfileTest, RejectsInconsistentProfiles) {
  // A fault site on a check that still runs could never be reached.
  EXPECT_FALSE(
      UeProfile::FromJson(json::parse(R"({"name": "x", "disabled_checks": [],
                     "failure_map": {"range:PUCCH-Config.nrofPRBs":
                                     {"mode": "assert", "site": "a.c:1"}}})"),
                          *MiniSchema())
          .ok());
  EXPECT_FALSE(UeProfile::FromJson(
                   json{{"name", "x"},
                        {"disabled_checks", {"rule:INTRA(Nope): EQ(a, 1)"}}},
                   *MiniSchema())
                   .ok());
  const UeProfile buggy = Must(
      LoadProfile(AssetDir() / "profiles/buggy-oai-like.json", *MiniSchema()));
  EXPECT_TRUE(buggy.disabled_checks.contains(RuleId(kMatch)));
  const UeProfile back = Must(
      UeProfile::FromJson(json::parse(buggy.ToJson().dump()), *MiniSchema()));
  EXPECT_EQ(back.ToJson(), buggy.ToJson());
}

}  // namespace
}  // namespace semprobe
