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

#ifndef SEMPROBE_RULE_INDUCTION_H_
#define SEMPROBE_RULE_INDUCTION_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "semprobe/dsl_ast.h"
#include "semprobe/schema.h"
#include "semprobe/spec_miner.h"

namespace semprobe {

// Literal verdict an inducer returns when the evidence supports no rule.
inline constexpr std::string_view kNoRule = "NO_RULE";

// The inference boundary: a client sees one evidence package and the prompt
// rendered from it, nothing else. Implementations must be stateless.
class InducerClient {
 public:
  virtual ~InducerClient() = default;
  // Candidate text: NO_RULE, or {"result","type","dsl","citations"} JSON.
  // A non-OK status is a transport failure, never a verdict.
  virtual absl::StatusOr<std::string> Propose(const EvidencePackage& pkg,
                                              std::string_view prompt) = 0;
};

// Offline client answering three sentence shapes:
//   "... associate ... by <id>"                  -> MATCH
//   "<f> shall be set to <v> if <g> is <w>"       -> IMPLIES(EQ(g, w); EQ(f,
//   v))
//   "<f> shall be at least <g|k> [minus <k>]"     -> GE(f, g - k)
// and NO_RULE for anything else.
std::unique_ptr<InducerClient> MockInducer(const Schema& schema);

// Fills {{ie}}, {{field_a}}, {{field_b}}, {{asn1}} and {{snippets}}.
std::string RenderPrompt(std::string_view tmpl, const EvidencePackage& pkg);

enum class GateStatus { kPass, kFail, kSkip };

struct GateResult {
  std::string gate;
  GateStatus status = GateStatus::kSkip;
  std::string detail;
};

std::string_view GateStatusName(GateStatus s);

// Gate names in evaluation order.
const std::vector<std::string>& GateNames();

struct GateReport {
  FieldPair pair;
  std::string candidate;
  std::vector<GateResult> gates;
  bool accepted = false;
  std::string reason;  // first failing gate, or why the client said NO_RULE

  nlohmann::ordered_json ToJson() const;
};

struct InductionResult {
  std::optional<ConstraintRule> rule;  // set iff accepted
  GateReport report;
};

// Runs the candidate through the six gates. Accepted rules carry provenance
// `induced` and the candidate's citations.
InductionResult CheckCandidate(const EvidencePackage& pkg,
                               std::string_view candidate,
                               const Schema& schema);

// Proposes then gates; only a transport failure is an error.
absl::StatusOr<InductionResult> Induce(const EvidencePackage& pkg,
                                       InducerClient& client,
                                       const Schema& schema,
                                       std::string_view prompt_template = "");

struct InductionStats {
  int64_t pairs = 0;
  int64_t candidates = 0;  // proposals other than NO_RULE
  int64_t accepted = 0;
  int64_t no_rule = 0;
  int64_t transport_failures = 0;

  nlohmann::ordered_json ToJson() const;
};

struct TransportFailure {
  FieldPair pair;
  std::string error;
};

struct BatchResult {
  std::vector<ConstraintRule> rules;  // sorted by id, duplicates merged
  InductionStats stats;
  std::vector<GateReport> reports;  // one per answered pair, sorted by pair
  std::vector<TransportFailure> failures;
};

struct BatchOptions {
  int parallelism = 1;
  std::string prompt_template;
};

// Pairs are processed in sorted order; results do not depend on parallelism.
BatchResult BatchInduce(std::vector<FieldPair> pairs, const Corpus& corpus,
                        EvidenceMode mode, InducerClient& client,
                        const Schema& schema, const BatchOptions& options = {});

}  // namespace semprobe

#endif  // SEMPROBE_RULE_INDUCTION_H_
