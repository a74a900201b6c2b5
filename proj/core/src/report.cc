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

#include "semprobe/report.h"

#include <algorithm>
#include <array>

#include "absl/strings/str_cat.h"

namespace semprobe {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::array<const char*, 4> kClassKeys = {"value", "presence", "intra",
                                                   "inter"};

}  // namespace

ClassCounts CampaignReport::Total() const {
  ClassCounts t;
  for (const auto& [name, c] : classes) {
    t.generated += c.generated;
    t.executed += c.executed;
    t.crashing += c.crashing;
    t.rejected += c.rejected;
    t.attach_ok += c.attach_ok;
  }
  return t;
}

CampaignReport EmptyReport() {
  CampaignReport r;
  for (const char* key : kClassKeys) r.classes[key] = ClassCounts{};
  r.wall_model_seconds = "0";
  return r;
}

ordered_json CampaignReport::ToJson() const {
  ordered_json j;
  j["config_digest"] = config_digest;
  j["mode"] = mode;
  j["profile"] = profile;
  j["classes"] = ordered_json::object();
  for (const char* key : kClassKeys) {
    auto it = classes.find(key);
    const ClassCounts c = it == classes.end() ? ClassCounts{} : it->second;
    j["classes"][key] = {{"generated", c.generated},
                         {"executed", c.executed},
                         {"crashing", c.crashing},
                         {"rejected", c.rejected},
                         {"attach_ok", c.attach_ok}};
  }
  j["unique_sites"] = unique_sites;
  j["infeasible"] = ordered_json::array();
  for (const InfeasibleEntry& e : infeasible) {
    j["infeasible"].push_back(
        {{"constraint", e.constraint}, {"seed", e.seed}, {"reason", e.reason}});
  }
  j["collateral"] = ordered_json::array();
  for (const CollateralEntry& e : collateral) {
    j["collateral"].push_back({{"case", e.test_case},
                               {"targeted", e.targeted},
                               {"also_violated", e.also_violated}});
  }
  j["silent"] = ordered_json::array();
  for (const SilentEntry& e : silent) {
    j["silent"].push_back(
        {{"case", e.test_case}, {"constraints", e.constraints}});
  }
  j["rows"] = ordered_json::array();
  for (const ReportRow& r : rows) {
    j["rows"].push_back({{"constraint", r.constraint},
                         {"affected_ie", r.affected_ie},
                         {"outcome", r.outcome},
                         {"site", r.site}});
  }
  j["rules"] = ordered_json::array();
  for (const RuleSummary& r : rules) {
    j["rules"].push_back({{"id", r.id}, {"class", r.cls}, {"text", r.text}});
  }
  j["pairs"] = pairs;
  j["transport_failures"] = transport_failures;
  j["wall_model_seconds"] = wall_model_seconds;
  return j;
}

absl::StatusOr<CampaignReport> CampaignReport::FromJson(
    const nlohmann::json& j) {
  try {
    CampaignReport r;
    r.config_digest = j.at("config_digest").get<std::string>();
    r.mode = j.at("mode").get<std::string>();
    r.profile = j.at("profile").get<std::string>();
    for (const auto& [key, c] : j.at("classes").items()) {
      r.classes[key] = ClassCounts{
          c.at("generated").get<int64_t>(), c.at("executed").get<int64_t>(),
          c.at("crashing").get<int64_t>(), c.at("rejected").get<int64_t>(),
          c.at("attach_ok").get<int64_t>()};
    }
    r.unique_sites = j.at("unique_sites").get<std::vector<std::string>>();
    for (const nlohmann::json& e : j.at("infeasible")) {
      r.infeasible.push_back(InfeasibleEntry{
          e.at("constraint").get<std::string>(),
          e.at("seed").get<std::string>(), e.at("reason").get<std::string>()});
    }
    for (const nlohmann::json& e : j.at("collateral")) {
      r.collateral.push_back(CollateralEntry{
          e.at("case").get<std::string>(), e.at("targeted").get<std::string>(),
          e.at("also_violated").get<std::vector<std::string>>()});
    }
    for (const nlohmann::json& e : j.at("silent")) {
      r.silent.push_back(
          SilentEntry{e.at("case").get<std::string>(),
                      e.at("constraints").get<std::vector<std::string>>()});
    }
    for (const nlohmann::json& e : j.at("rows")) {
      r.rows.push_back(ReportRow{e.at("constraint").get<std::string>(),
                                 e.at("affected_ie").get<std::string>(),
                                 e.at("outcome").get<std::string>(),
                                 e.at("site").get<std::string>()});
    }
    for (const nlohmann::json& e : j.at("rules")) {
      r.rules.push_back(RuleSummary{e.at("id").get<std::string>(),
                                    e.at("class").get<std::string>(),
                                    e.at("text").get<std::string>()});
    }
    r.pairs = j.at("pairs").get<std::vector<std::string>>();
    r.transport_failures =
        j.at("transport_failures").get<std::vector<std::string>>();
    r.wall_model_seconds = j.at("wall_model_seconds").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("report: ", e.what()));
  }
}

std::string RenderReport(const CampaignReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) return report.ToJson().dump(2) + "\n";
  std::vector<std::array<std::string, 4>> lines = {
      {"Constraints", "Affected IE", "Outcome", "Site"}};
  for (const ReportRow& r : report.rows) {
    lines.push_back({r.constraint, r.affected_ie, r.outcome, r.site});
  }
  std::array<size_t, 4> width{};
  for (const auto& line : lines) {
    for (size_t i = 0; i < 4; ++i)
      width[i] = std::max(width[i], line[i].size());
  }
  auto render = [&](const std::array<std::string, 4>& line) {
    std::string out;
    for (size_t i = 0; i < 4; ++i) {
      if (i > 0) out += " | ";
      out += line[i];
      if (i < 3) out.append(width[i] - line[i].size(), ' ');
    }
    return out + "\n";
  };
  std::string out = render(lines[0]);
  for (size_t i = 0; i < 4; ++i) {
    if (i > 0) out += "-+-";
    out.append(width[i], '-');
  }
  out += "\n";
  for (size_t i = 1; i < lines.size(); ++i) out += render(lines[i]);
  return out;
}

}  // namespace semprobe
