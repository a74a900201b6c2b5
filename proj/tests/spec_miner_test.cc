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

#include "semprobe/spec_miner.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include "gtest/gtest.h"
#include "test_util.h"

namespace semprobe {
namespace {

using json = nlohmann::json;
using testing::AssetDir;
using testing::MiniSchema;
using testing::Must;
using testing::P;

const Corpus& MiniCorpus() {
  static const Corpus corpus =
      Must(Corpus::Load(AssetDir() / "corpus/corpus.json"));
  return corpus;
}

std::vector<std::string> Texts(const std::vector<SurfaceForm>& forms) {
  std::vector<std::string> out;
  for (const SurfaceForm& f : forms)
    out.push_back(f.text + (f.weak ? "~" : ""));
  return out;
}

// IE name to its IE-relative leaf paths, read straight from the JSON.
std::map<std::string, std::set<std::string>> OracleIeLeaves() {
  std::map<std::string, std::set<std::string>> out;
  const json raw = Must(ReadJsonFile(AssetDir() / "mini-rrc.json"));
  for (const auto& [path, domain] : testing::OracleLeafDomains(raw)) {
    const size_t dot = path.find('.');
    out[path.substr(0, dot)].insert(path.substr(dot + 1));
  }
  for (const json& ie : raw["ies"]) out[ie["name"].get<std::string>()];
  return out;
}

TEST(SurfaceFormTest, SchedulingRequestId) {
  EXPECT_EQ(
      Texts(SurfaceForms("schedulingRequestID", MiniSchema()->aliases())),
      (std::vector<std::string>{"schedulingRequestID", "scheduling request id",
                                "scheduling-request-id", "SR~"}));
}

TEST(SurfaceFormTest, SingleWordHasOneForm) {
  EXPECT_EQ(Texts(SurfaceForms("format")), std::vector<std::string>{"format"});
}

TEST(SurfaceFormTest, HyphensAndAcronymsSplit) {
  EXPECT_EQ(Texts(SurfaceForms("nrofSRS-Ports")),
            (std::vector<std::string>{"nrofSRS-Ports", "nrof srs ports",
                                      "nrof-srs-ports"}));
  EXPECT_EQ(
      Texts(SurfaceForms("ControlResourceSet", MiniSchema()->aliases())),
      (std::vector<std::string>{"ControlResourceSet", "control resource set",
                                "control-resource-set", "CORESET~"}));
}

TEST(SurfaceFormTest, FieldIdentifierSkipsAlternatives) {
  EXPECT_EQ(
      FieldIdentifier(*MiniSchema(), P("SRS-Resource.transmissionComb.n2")),
      "transmissionComb");
  EXPECT_EQ(FieldIdentifier(*MiniSchema(),
                            P("SRS-Resource.resourceMapping.startPosition")),
            "startPosition");
}

TEST(KeywordTest, WordBoundariesAndMultiwordCues) {
  EXPECT_EQ(MatchKeywords("The UE shall apply it."),
            std::vector<std::string>{"mandatory:shall"});
  EXPECT_TRUE(MatchKeywords("a UE-specific search space").empty());
  EXPECT_EQ(
      MatchKeywords("valid only if configured"),
      (std::vector<std::string>{"conditional:if", "conditional:only if"}));
  EXPECT_TRUE(MatchKeywords("depends  on two spaces").empty());
  EXPECT_EQ(MatchKeywords("Determined By the network"),
            std::vector<std::string>{"dependency:determined by"});
  EXPECT_FALSE(ContainsForm("srs-ResourceIdList", "srs-ResourceId"));
  EXPECT_TRUE(ContainsForm("(srs-ResourceId)", "SRS-RESOURCEID"));
}

TEST(CoverageTest, BudgetThreeMatchesExhaustiveSearch) {
  const std::map<std::string, std::set<std::string>> leaves = OracleIeLeaves();
  std::vector<std::string> names;
  std::set<std::string> universe;
  for (const auto& [ie, set] : leaves) {
    names.push_back(ie);
    universe.insert(set.begin(), set.end());
  }
  size_t best = 0;
  for (size_t i = 0; i < names.size(); ++i) {
    for (size_t j = i + 1; j < names.size(); ++j) {
      for (size_t k = j + 1; k < names.size(); ++k) {
        std::set<std::string> u = leaves.at(names[i]);
        u.insert(leaves.at(names[j]).begin(), leaves.at(names[j]).end());
        u.insert(leaves.at(names[k]).begin(), leaves.at(names[k]).end());
        best = std::max(best, u.size());
      }
    }
  }
  const CoverageReport got = SelectIntraIes(*MiniSchema(), 3);
  ASSERT_EQ(got.selected.size(), 3u);
  std::set<std::string> covered;
  int64_t pairs = 0;
  for (const std::string& ie : got.selected) {
    covered.insert(leaves.at(ie).begin(), leaves.at(ie).end());
    const int64_t n = static_cast<int64_t>(leaves.at(ie).size());
    pairs += n * (n - 1) / 2;
  }
  EXPECT_EQ(covered.size(), best);
  EXPECT_EQ(got.covered_fraction,
            Rational(static_cast<int64_t>(covered.size()),
                     static_cast<int64_t>(universe.size())));
  EXPECT_EQ(got.pairs, pairs);
  EXPECT_EQ(got.selected, (std::vector<std::string>{
                              "SRS-Resource", "SearchSpace", "PUCCH-Config"}));
}

TEST(CoverageTest, FullBudgetCoversEverything) {
  const CoverageReport got = SelectIntraIes(*MiniSchema(), 100);
  EXPECT_EQ(got.covered_fraction, Rational(1));
  EXPECT_EQ(got.selected.size(), 8u);
  int64_t pairs = 0;
  for (const auto& [ie, set] : OracleIeLeaves()) {
    const int64_t n = static_cast<int64_t>(set.size());
    pairs += n * (n - 1) / 2;
  }
  EXPECT_EQ(got.pairs, pairs);
}

TEST(CoverageTest, GreedyNeverTakesZeroGain) {
  const Schema s = Must(Schema::FromJson(json::parse(R"({
    "name": "t", "version": "1", "root": "A",
    "ies": [
      {"name": "A", "fields": [{"name": "x", "kind": {"int": {"lo": 0, "hi": 1}}},
                               {"name": "y", "kind": {"int": {"lo": 0, "hi": 1}}},
                               {"name": "b", "kind": {"nested": "B"}}]},
      {"name": "B", "fields": [{"name": "x", "kind": {"int": {"lo": 0, "hi": 1}}}]}
    ]})")));
  const CoverageReport got = SelectIntraIes(s, 5);
  EXPECT_EQ(got.selected, std::vector<std::string>{"A"});
  EXPECT_EQ(got.covered_fraction, Rational(1));
}

TEST(ReferenceTest, HandEnumeratedHits) {
  const std::vector<ReferenceField> want = {
      {P("SRS-Config.srs-ResourceId"), "SRS-Resource"},
      {P("SearchSpace.controlResourceSetId"), "ControlResourceSet"},
  };
  EXPECT_EQ(FindReferenceFields(*MiniSchema()), want);
  EXPECT_EQ(
      ReferencePairs(*MiniSchema()),
      (std::vector<FieldPair>{
          {P("SRS-Config.srs-ResourceId"), P("SRS-Resource.srs-ResourceId")},
          {P("SearchSpace.controlResourceSetId"),
           P("ControlResourceSet.controlResourceSetId")}}));
}

TEST(EvidenceTest, CoresetSentenceIsRetained) {
  const FieldPair pair{P("SearchSpace.controlResourceSetId"),
                       P("ControlResourceSet.controlResourceSetId")};
  const EvidencePackage pkg =
      ScanEvidence(*MiniSchema(), MiniCorpus(), pair, EvidenceMode::kFull);
  ASSERT_EQ(pkg.snippets.size(), 1u);
  EXPECT_EQ(pkg.snippets[0].doc, "ts213");
  EXPECT_NE(pkg.snippets[0].text.find(
                "the UE shall associate the search space with a CORESET by "
                "controlResourceSetId"),
            std::string::npos);
  EXPECT_EQ(pkg.snippets[0].keywords,
            std::vector<std::string>{"mandatory:shall"});
  EXPECT_TRUE(pkg.scope.inter);
  EXPECT_NE(pkg.asn1_block.find("ControlResourceSet ::= SEQUENCE"),
            std::string::npos);
  EXPECT_TRUE(ScanEvidence(*MiniSchema(), MiniCorpus(), pair,
                           EvidenceMode::kNoCrossDocs)
                  .snippets.empty());
}

TEST(EvidenceTest, SingleFieldWindowIsRejected) {
  const FieldPair pair{P("SRS-Resource.resourceMapping.nrofSymbols"),
                       P("SRS-Resource.resourceMapping.repetitionFactor")};
  EXPECT_TRUE(
      ScanEvidence(*MiniSchema(), MiniCorpus(), pair, EvidenceMode::kFull)
          .snippets.empty());
}

TEST(EvidenceTest, WeakAliasAloneIsNotAMention) {
  const FieldPair pair{P("PUCCH-Config.format"),
                       P("PUCCH-Config.schedulingRequestID")};
  const EvidencePackage pkg =
      ScanEvidence(*MiniSchema(), MiniCorpus(), pair, EvidenceMode::kFull);
  EXPECT_TRUE(pkg.snippets.empty());
  // The alias line does exist and would match were SR strong.
  bool alias_line = false;
  for (const std::string& line : MiniCorpus().Find("ts331")->lines) {
    alias_line = alias_line ||
                 (ContainsForm(line, "SR") && ContainsForm(line, "format"));
  }
  EXPECT_TRUE(alias_line);
}

TEST(EvidenceTest, Asn1OnlyHasNoSnippetsAndModesNest) {
  std::vector<std::string> ies;
  for (const IEDef& ie : MiniSchema()->ies()) ies.push_back(ie.name);
  std::vector<FieldPair> pairs = IntraPairs(*MiniSchema(), ies);
  for (const FieldPair& p : ReferencePairs(*MiniSchema())) pairs.push_back(p);
  size_t full_total = 0;
  for (const FieldPair& pair : pairs) {
    const EvidencePackage asn1 = ScanEvidence(*MiniSchema(), MiniCorpus(), pair,
                                              EvidenceMode::kAsn1Only);
    const EvidencePackage local = ScanEvidence(
        *MiniSchema(), MiniCorpus(), pair, EvidenceMode::kNoCrossDocs);
    const EvidencePackage full =
        ScanEvidence(*MiniSchema(), MiniCorpus(), pair, EvidenceMode::kFull);
    EXPECT_TRUE(asn1.snippets.empty()) << pair.ToString();
    EXPECT_FALSE(asn1.asn1_block.empty());
    for (const Snippet& s : local.snippets) {
      EXPECT_NE(std::find(full.snippets.begin(), full.snippets.end(), s),
                full.snippets.end())
          << pair.ToString();
    }
    full_total += full.snippets.size();
  }
  EXPECT_GT(full_total, 0u);
}

TEST(EvidenceTest, DeterministicAndJsonRoundTrip) {
  const FieldPair pair{P("SRS-Resource.resourceMapping.nrofSymbols"),
                       P("SRS-Resource.resourceMapping.startPosition")};
  const EvidencePackage a =
      ScanEvidence(*MiniSchema(), MiniCorpus(), pair, EvidenceMode::kFull);
  const EvidencePackage b =
      ScanEvidence(*MiniSchema(), MiniCorpus(), pair, EvidenceMode::kFull);
  EXPECT_EQ(a.ToJson().dump(), b.ToJson().dump());
  ASSERT_EQ(a.snippets.size(), 1u);
  EXPECT_EQ(a.field_mentions.at("SRS-Resource.resourceMapping.startPosition"),
            std::vector<std::string>{"startPosition"});
  EXPECT_EQ(Must(EvidencePackage::FromJson(json::parse(a.ToJson().dump()))), a);
}

TEST(CorpusTest, RejectsRepeatedIdsAndUnknownRoles) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "semprobe_corpus_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "a.txt") << "line one\nline two\n";
  std::ofstream(dir / "dup.json")
      << R"({"docs":[{"id":"a","role":"crossdoc","path":"a.txt"},)"
      << R"({"id":"a","role":"crossdoc","path":"a.txt"}]})";
  std::ofstream(dir / "role.json")
      << R"({"docs":[{"id":"a","role":"other","path":"a.txt"}]})";
  std::ofstream(dir / "ok.json")
      << R"({"docs":[{"id":"a","role":"crossdoc","path":"a.txt"}]})";
  EXPECT_FALSE(Corpus::Load(dir / "dup.json").ok());
  EXPECT_FALSE(Corpus::Load(dir / "role.json").ok());
  const Corpus ok = Must(Corpus::Load(dir / "ok.json"));
  EXPECT_EQ(ok.docs[0].lines,
            (std::vector<std::string>{"line one", "line two"}));
}

}  // namespace
}  // namespace semprobe
