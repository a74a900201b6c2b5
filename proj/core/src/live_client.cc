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

#include "semprobe/live_client.h"

#include <cstdlib>
#include <regex>
#include <utility>

#include "absl/strings/str_cat.h"
#include "httplib.h"

namespace semprobe {
namespace {

using ordered_json = nlohmann::ordered_json;

class LiveInducer : public InducerClient {
 public:
  LiveInducer(LiveClientConfig config, std::string origin, std::string path)
      : config_(std::move(config)),
        origin_(std::move(origin)),
        path_(std::move(path)) {}

  absl::StatusOr<std::string> Propose(const EvidencePackage&,
                                      std::string_view prompt) override {
    const ordered_json body{
        {"model", config_.model},
        {"temperature", config_.temperature},
        {"messages", {{{"role", "user"}, {"content", std::string(prompt)}}}}};
    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
      if (const char* key = std::getenv(config_.api_key_env.c_str())) {
        headers.emplace("Authorization", absl::StrCat("Bearer ", key));
      }
    }
    std::string last_error;
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
      // A fresh client per attempt keeps the object free of shared state.
      httplib::Client client(origin_);
      client.set_connection_timeout(config_.timeout_s, 0);
      client.set_read_timeout(config_.timeout_s, 0);
      httplib::Result res =
          client.Post(path_, headers, body.dump(), "application/json");
      if (!res) {
        last_error = httplib::to_string(res.error());
        continue;
      }
      if (res->status != 200) {
        last_error = absl::StrCat("HTTP ", res->status);
        continue;
      }
      nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
      if (reply.is_discarded()) {
        last_error = "reply is not JSON";
        continue;
      }
      try {
        return reply.at("choices")
            .at(0)
            .at("message")
            .at("content")
            .get<std::string>();
      } catch (const nlohmann::json::exception&) {
        last_error = "reply lacks choices[0].message.content";
      }
    }
    return absl::UnavailableError(absl::StrCat("inducer endpoint failed after ",
                                               config_.retries + 1,
                                               " attempts: ", last_error));
  }

 private:
  LiveClientConfig config_;
  std::string origin_;
  std::string path_;
};

}  // namespace

absl::StatusOr<LiveClientConfig> LiveClientConfig::FromJson(
    const nlohmann::json& j) {
  if (!j.is_object())
    return absl::InvalidArgumentError("client: not an object");
  LiveClientConfig c;
  try {
    c.endpoint = j.value("endpoint", "");
    c.model = j.value("model", "");
    c.temperature = j.value("temperature", 0.0);
    c.retries = j.value("retries", 2);
    c.timeout_s = j.value("timeout_s", 60);
    c.parallelism = j.value("parallelism", 1);
    c.api_key_env = j.value("api_key_env", "");
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("client: ", e.what()));
  }
  if (c.retries < 0 || c.timeout_s <= 0 || c.parallelism < 1) {
    return absl::InvalidArgumentError(
        "client: retries >= 0, timeout_s > 0 and parallelism >= 1 required");
  }
  return c;
}

ordered_json LiveClientConfig::ToJson() const {
  return ordered_json{
      {"endpoint", endpoint},       {"model", model},
      {"temperature", temperature}, {"retries", retries},
      {"timeout_s", timeout_s},     {"parallelism", parallelism},
      {"api_key_env", api_key_env}};
}

absl::StatusOr<std::unique_ptr<InducerClient>> MakeLiveInducer(
    const LiveClientConfig& config) {
  static const std::regex kUrl(R"(^(http://[^/]+)(/.*)$)");
  std::smatch m;
  if (!std::regex_match(config.endpoint, m, kUrl)) {
    return absl::InvalidArgumentError(
        absl::StrCat("endpoint '", config.endpoint,
                     "' is not an http://host[:port]/path URL"));
  }
  return std::unique_ptr<InducerClient>(
      std::make_unique<LiveInducer>(config, m[1].str(), m[2].str()));
}

}  // namespace semprobe
