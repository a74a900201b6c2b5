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

#include "semprobe/rule_set.h"

#include <algorithm>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "semprobe/dsl_normalize.h"
#include "semprobe/dsl_parser.h"

namespace semprobe {
namespace {

using ordered_json = nlohmann::ordered_json;

absl::StatusOr<FieldPath> PathField(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_string()) {
    return absl::InvalidArgumentError(
        absl::StrCat("rule set entry lacks string '", key, "'"));
  }
  return FieldPath::Parse(j[key].get<std::string>());
}

}  // namespace

std::string_view ConstraintClassName(ConstraintClass c) {
  switch (c) {
    case ConstraintClass::kValue:
      return "value";
    case ConstraintClass::kPresence:
      return "presence";
    case ConstraintClass::kIntra:
      return "intra";
    case ConstraintClass::kInter:
      return "inter";
  }
  return "?";
}

absl::StatusOr<ConstraintClass> ParseConstraintClass(std::string_view text) {
  for (ConstraintClass c : {ConstraintClass::kValue, ConstraintClass::kPresence,
                            ConstraintClass::kIntra, ConstraintClass::kInter}) {
    if (ConstraintClassName(c) == text) return c;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown constraint class '", std::string(text), "'"));
}

ConstraintClass ClassOf(const ConstraintRule& rule) {
  return rule.scope.inter ? ConstraintClass::kInter : ConstraintClass::kIntra;
}

std::vector<ConstraintInfo> RuleSet::Constraints() const {
  std::vector<ConstraintInfo> out;
  for (const RangeConstraint& r : ranges) {
    out.push_back(ConstraintInfo{r.id(), ConstraintClass::kValue, r.ToString(),
                                 r.path.segments().front().name});
  }
  for (const PresenceConstraint& p : presence) {
    out.push_back(ConstraintInfo{p.id(), ConstraintClass::kPresence,
                                 p.ToString(), p.path.segments().front().name});
  }
  for (const ConstraintRule& r : rules) {
    out.push_back(ConstraintInfo{r.id, ClassOf(r), r.ClauseText(),
                                 absl::StrJoin(r.scope.ies, ", ")});
  }
  std::sort(out.begin(), out.end(),
            [](const ConstraintInfo& a, const ConstraintInfo& b) {
              return a.id < b.id;
            });
  return out;
}

std::optional<ConstraintInfo> RuleSet::Find(std::string_view id) const {
  for (ConstraintInfo& c : Constraints()) {
    if (c.id == id) return std::move(c);
  }
  return std::nullopt;
}

ordered_json RuleSet::ToJson() const {
  ordered_json j;
  j["schema"] = schema_ref;
  j["ranges"] = ordered_json::array();
  for (const RangeConstraint& r : ranges) {
    j["ranges"].push_back(ordered_json{{"id", r.id()},
                                       {"path", r.path.ToString()},
                                       {"lo", r.lo},
                                       {"hi", r.hi},
                                       {"provenance", "schema"}});
  }
  j["presence"] = ordered_json::array();
  for (const PresenceConstraint& p : presence) {
    j["presence"].push_back(
        ordered_json{{"id", p.id()},
                     {"path", p.path.ToString()},
                     {"need", std::string(NeedCodeName(p.need))},
                     {"provenance", "schema"}});
  }
  j["rules"] = ordered_json::array();
  for (const ConstraintRule& r : rules) j["rules"].push_back(RuleToJson(r));
  return j;
}

namespace {

absl::StatusOr<RuleSet> RuleSetFromJsonUnchecked(const nlohmann::json& j) {
  if (!j.is_object())
    return absl::InvalidArgumentError("rule set: not an object");
  RuleSet out;
  out.schema_ref = j.value("schema", "");
  for (const nlohmann::json& r : j.value("ranges", nlohmann::json::array())) {
    absl::StatusOr<FieldPath> path = PathField(r, "path");
    if (!path.ok()) return path.status();
    if (!r.contains("lo") || !r.contains("hi") ||
        !r["lo"].is_number_integer() || !r["hi"].is_number_integer()) {
      return absl::InvalidArgumentError("range entry needs integer lo/hi");
    }
    RangeConstraint rc{*path, r["lo"].get<int64_t>(), r["hi"].get<int64_t>()};
    if (rc.lo > rc.hi) {
      return absl::InvalidArgumentError(
          absl::StrCat("range ", rc.path.ToString(), " has lo > hi"));
    }
    out.ranges.push_back(std::move(rc));
  }
  for (const nlohmann::json& p : j.value("presence", nlohmann::json::array())) {
    absl::StatusOr<FieldPath> path = PathField(p, "path");
    if (!path.ok()) return path.status();
    absl::StatusOr<NeedCode> need = ParseNeedCode(p.value("need", ""));
    if (!need.ok()) return need.status();
    out.presence.push_back(PresenceConstraint{*path, *need});
  }
  for (const nlohmann::json& r : j.value("rules", nlohmann::json::array())) {
    absl::StatusOr<ConstraintRule> rule = RuleFromJson(r);
    if (!rule.ok()) return rule.status();
    out.rules.push_back(*std::move(rule));
  }
  return out;
}

}  // namespace

absl::StatusOr<RuleSet> RuleSet::FromJson(const nlohmann::json& j) {
  try {
    return RuleSetFromJsonUnchecked(j);
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("rule set: ", e.what()));
  }
}

RuleSet SchemaRuleSet(const Schema& schema) {
  RuleSet out;
  out.schema_ref = absl::StrCat(schema.name(), "@", schema.version());
  out.ranges = ExtractRanges(schema);
  out.presence = ExtractPresence(schema);
  return out;
}

absl::StatusOr<std::vector<ConstraintRule>> LoadRuleFile(
    const std::filesystem::path& path, const Schema& schema,
    Provenance provenance) {
  absl::StatusOr<std::string> text = ReadTextFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<std::vector<ConstraintRule>> parsed = ParseRuleFile(*text);
  if (!parsed.ok()) {
    return absl::InvalidArgumentError(absl::StrCat(
        path.string(), ": ", std::string(parsed.status().message())));
  }
  std::vector<ConstraintRule> out;
  for (const ConstraintRule& r : *parsed) {
    NormalizeResult n = Normalize(r, schema);
    if (!n.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          path.string(), ": ", r.ToText(), ": NO_RULE: ", n.reason));
    }
    n.rule->provenance = provenance;
    out.push_back(*std::move(n.rule));
  }
  return out;
}

absl::StatusOr<RuleSet> LoadRuleSet(const std::filesystem::path& path) {
  absl::StatusOr<nlohmann::json> j = ReadJsonFile(path);
  if (!j.ok()) return j.status();
  return RuleSet::FromJson(*j);
}

absl::StatusOr<RuleSet> ValidatorRuleSet(
    const Schema& schema, const std::filesystem::path& dsl_file) {
  absl::StatusOr<std::vector<ConstraintRule>> rules =
      LoadRuleFile(dsl_file, schema, Provenance::kMined);
  if (!rules.ok()) return rules.status();
  RuleSet out = SchemaRuleSet(schema);
  out.rules = *std::move(rules);
  return out;
}

}  // namespace semprobe
