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

#ifndef SEMPROBE_REPORT_H_
#define SEMPROBE_REPORT_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "semprobe/rule_set.h"

namespace semprobe {

struct ClassCounts {
  int64_t generated = 0;
  int64_t executed = 0;  // <= generated
  int64_t crashing = 0;  // <= executed
  int64_t rejected = 0;
  int64_t attach_ok = 0;  // executed = crashing + rejected + attach_ok

  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

struct InfeasibleEntry {
  std::string constraint;
  std::string seed;
  std::string reason;

  friend bool operator==(const InfeasibleEntry&,
                         const InfeasibleEntry&) = default;
};

// A case whose message also violates checks other than its target.
struct CollateralEntry {
  std::string test_case;
  std::string targeted;
  std::vector<std::string> also_violated;

  friend bool operator==(const CollateralEntry&,
                         const CollateralEntry&) = default;
};

struct SilentEntry {
  std::string test_case;
  std::vector<std::string> constraints;

  friend bool operator==(const SilentEntry&, const SilentEntry&) = default;
};

// One line of the text table.
struct ReportRow {
  std::string constraint;
  std::string affected_ie;
  std::string outcome;
  std::string site;

  friend auto operator<=>(const ReportRow&, const ReportRow&) = default;
};

struct RuleSummary {
  std::string id;
  std::string cls;
  std::string text;

  friend bool operator==(const RuleSummary&, const RuleSummary&) = default;
};

struct CampaignReport {
  std::string config_digest;
  std::string mode;  // guided | enumeration
  std::string profile;
  std::map<std::string, ClassCounts> classes;  // value, presence, intra, inter
  std::vector<std::string> unique_sites;       // sorted
  std::vector<InfeasibleEntry> infeasible;
  std::vector<CollateralEntry> collateral;
  std::vector<SilentEntry> silent;
  std::vector<ReportRow> rows;     // sorted, distinct
  std::vector<RuleSummary> rules;  // dependency rules used for planning
  std::vector<std::string> pairs;  // enumeration pairs, "a ~ b"
  std::vector<std::string> transport_failures;
  std::string wall_model_seconds;  // exact rational

  ClassCounts Total() const;

  nlohmann::ordered_json ToJson() const;
  static absl::StatusOr<CampaignReport> FromJson(const nlohmann::json& j);
  friend bool operator==(const CampaignReport&,
                         const CampaignReport&) = default;
};

// Creates every class key with zero counts.
CampaignReport EmptyReport();

enum class ReportFormat { kJson, kTextTable };

// JSON: two-space indented with a trailing newline. Text: the table with
// columns Constraints / Affected IE / Outcome / Site.
std::string RenderReport(const CampaignReport& report, ReportFormat format);

}  // namespace semprobe

#endif  // SEMPROBE_REPORT_H_
