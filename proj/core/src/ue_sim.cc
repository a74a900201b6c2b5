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
#include <utility>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "semprobe/dsl_evaluate.h"
#include "semprobe/dsl_normalize.h"

namespace semprobe {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kRulePrefix = "rule:";

absl::StatusOr<std::string> ResolveKey(const std::string& key,
                                       const Schema& schema) {
  if (!absl::StartsWith(key, std::string(kRulePrefix))) return key;
  NormalizeResult n = ParseAndNormalize(
      std::string_view(key).substr(kRulePrefix.size()), schema);
  if (!n.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("profile key '", key, "': NO_RULE: ", n.reason));
  }
  return n.rule->id;
}

absl::StatusOr<FailureMode::Kind> ParseFailureKind(const std::string& s) {
  for (FailureMode::Kind k :
       {FailureMode::Kind::kAssert, FailureMode::Kind::kSegfault,
        FailureMode::Kind::kSilentMisconfig}) {
    if (FailureKindName(k) == s) return k;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown failure mode '", s, "'"));
}

}  // namespace

std::string_view FailureKindName(FailureMode::Kind k) {
  switch (k) {
    case FailureMode::Kind::kAssert:
      return "assert";
    case FailureMode::Kind::kSegfault:
      return "segfault";
    case FailureMode::Kind::kSilentMisconfig:
      return "silent";
  }
  return "?";
}

std::string_view OutcomeKindName(Outcome::Kind k) {
  switch (k) {
    case Outcome::Kind::kAttachOk:
      return "attach-ok";
    case Outcome::Kind::kReject:
      return "reject";
    case Outcome::Kind::kCrash:
      return "crash";
  }
  return "?";
}

absl::StatusOr<UeProfile> UeProfile::FromJson(const nlohmann::json& j,
                                              const Schema& schema) {
  try {
    UeProfile p;
    p.name = j.at("name").get<std::string>();
    for (const nlohmann::json& k :
         j.value("disabled_checks", nlohmann::json::array())) {
      absl::StatusOr<std::string> id = ResolveKey(k.get<std::string>(), schema);
      if (!id.ok()) return id.status();
      p.disabled_checks.insert(*id);
    }
    // items() views its object, so the defaults need names that outlive it.
    const nlohmann::json failure_map =
        j.value("failure_map", nlohmann::json::object());
    const nlohmann::json need_store =
        j.value("need_store", nlohmann::json::object());
    for (const auto& [key, mode] : failure_map.items()) {
      absl::StatusOr<std::string> id = ResolveKey(key, schema);
      if (!id.ok()) return id.status();
      absl::StatusOr<FailureMode::Kind> kind =
          ParseFailureKind(mode.at("mode").get<std::string>());
      if (!kind.ok()) return kind.status();
      FailureMode fm{*kind, mode.value("site", "")};
      if (fm.kind != FailureMode::Kind::kSilentMisconfig && fm.site.empty()) {
        return absl::InvalidArgumentError(
            absl::StrCat(key, ": crash mode needs a site"));
      }
      if (!p.disabled_checks.contains(*id)) {
        return absl::InvalidArgumentError(
            absl::StrCat("failure_map key ", key, " is not a disabled check"));
      }
      p.failure_map[*id] = std::move(fm);
    }
    for (const auto& [path, value] : need_store.items()) {
      absl::StatusOr<Scalar> s = ScalarFromJson(value);
      if (!s.ok()) return s.status();
      p.need_store[path] = *s;
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("profile: ", e.what()));
  }
}

ordered_json UeProfile::ToJson() const {
  ordered_json j;
  j["name"] = name;
  j["disabled_checks"] = disabled_checks;
  j["failure_map"] = ordered_json::object();
  for (const auto& [id, mode] : failure_map) {
    j["failure_map"][id] = {{"mode", std::string(FailureKindName(mode.kind))},
                            {"site", mode.site}};
  }
  j["need_store"] = ordered_json::object();
  for (const auto& [path, v] : need_store)
    j["need_store"][path] = ScalarToJson(v);
  return j;
}

absl::StatusOr<UeProfile> LoadProfile(const std::filesystem::path& path,
                                      const Schema& schema) {
  absl::StatusOr<nlohmann::json> j = ReadJsonFile(path);
  if (!j.ok()) return j.status();
  absl::StatusOr<UeProfile> p = UeProfile::FromJson(*j, schema);
  if (!p.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), ": ", std::string(p.status().message())));
  }
  return p;
}

ordered_json Outcome::ToJson() const {
  ordered_json j;
  j["outcome"] = std::string(OutcomeKindName(kind));
  if (kind != Kind::kAttachOk) j["constraint"] = constraint;
  if (kind == Kind::kCrash) {
    j["mode"] = std::string(FailureKindName(mode.kind));
    j["site"] = mode.site;
  }
  if (!silent.empty()) j["silent"] = silent;
  return j;
}

UeSimulator::UeSimulator(std::shared_ptr<const Schema> schema, RuleSet rules,
                         UeProfile profile)
    : schema_(std::move(schema)),
      rules_(std::move(rules)),
      profile_(std::move(profile)) {
  for (size_t i = 0; i < rules_.ranges.size(); ++i) {
    checks_.push_back(Check{rules_.ranges[i].id(), Check::Type::kRange, i});
  }
  for (size_t i = 0; i < rules_.presence.size(); ++i) {
    checks_.push_back(
        Check{rules_.presence[i].id(), Check::Type::kPresence, i});
  }
  for (size_t i = 0; i < rules_.rules.size(); ++i) {
    checks_.push_back(Check{rules_.rules[i].id, Check::Type::kRule, i});
  }
  std::sort(checks_.begin(), checks_.end(),
            [](const Check& a, const Check& b) { return a.id < b.id; });
}

bool UeSimulator::Violated(const Check& check,
                           const DecodedMessage& msg) const {
  switch (check.type) {
    case Check::Type::kRange:
      return CheckRange(msg, rules_.ranges[check.index]).violated();
    case Check::Type::kPresence: {
      const PresenceConstraint& pc = rules_.presence[check.index];
      // Need R absence is a release and always conforms.
      if (pc.need != NeedCode::kMaintain) return false;
      if (profile_.need_store.contains(pc.path.ToString())) return false;
      for (const PresenceSlot& slot : PresenceInstances(msg, pc)) {
        if (!slot.present) return true;
      }
      return false;
    }
    case Check::Type::kRule:
      return Evaluate(rules_.rules[check.index], msg).violated();
  }
  return false;
}

std::vector<std::string> UeSimulator::Violations(
    const DecodedMessage& msg) const {
  std::vector<std::string> out;
  for (const Check& c : checks_) {
    if (Violated(c, msg)) out.push_back(c.id);
  }
  return out;
}

Outcome UeSimulator::RunMessage(const DecodedMessage& msg) const {
  Outcome out;
  for (const Check& c : checks_) {
    if (!Violated(c, msg)) continue;
    if (!profile_.disabled_checks.contains(c.id)) {
      out.kind = Outcome::Kind::kReject;
      out.constraint = c.id;
      return out;
    }
    auto mapped = profile_.failure_map.find(c.id);
    if (mapped != profile_.failure_map.end() &&
        mapped->second.kind != FailureMode::Kind::kSilentMisconfig) {
      out.kind = Outcome::Kind::kCrash;
      out.constraint = c.id;
      out.mode = mapped->second;
      return out;
    }
    if (mapped == profile_.failure_map.end() &&
        c.type == Check::Type::kPresence) {
      // The missing Need M value is dereferenced later.
      out.kind = Outcome::Kind::kCrash;
      out.constraint = c.id;
      out.mode = FailureMode{
          FailureMode::Kind::kSegfault,
          absl::StrCat("null-use:", rules_.presence[c.index].path.ToString())};
      return out;
    }
    out.silent.push_back(c.id);
  }
  return out;
}

Outcome UeSimulator::Run(const TestCase& tc) const {
  absl::StatusOr<DecodedMessage> msg = DeliveredMessage(schema_, tc);
  if (!msg.ok()) {
    Outcome out;
    out.kind = Outcome::Kind::kReject;
    out.constraint = std::string(kDecodeErrorId);
    return out;
  }
  return RunMessage(*msg);
}

Outcome RunTarget(const UeProfile& profile, const TestCase& tc,
                  std::shared_ptr<const Schema> schema, const RuleSet& rules) {
  return UeSimulator(std::move(schema), rules, profile).Run(tc);
}

std::set<std::string> DedupSites(const std::vector<Outcome>& outcomes) {
  std::set<std::string> out;
  for (const Outcome& o : outcomes) {
    if (o.kind == Outcome::Kind::kCrash) out.insert(o.mode.site);
  }
  return out;
}

}  // namespace semprobe
