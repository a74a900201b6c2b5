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

#ifndef SEMPROBE_LIVE_CLIENT_H_
#define SEMPROBE_LIVE_CLIENT_H_

#include <memory>
#include <string>

#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "semprobe/rule_induction.h"

namespace semprobe {

struct LiveClientConfig {
  // OpenAI-compatible chat completions URL, e.g.
  // http://127.0.0.1:8000/v1/chat/completions. Plain http only.
  std::string endpoint;
  std::string model;
  double temperature = 0.0;  // the determinism knob; keep at 0
  int retries = 2;           // extra attempts after the first
  int timeout_s = 60;
  int parallelism = 1;
  std::string api_key_env;  // environment variable holding a bearer token

  static absl::StatusOr<LiveClientConfig> FromJson(const nlohmann::json& j);
  nlohmann::ordered_json ToJson() const;
};

// Sends the rendered prompt as one user message and returns the first
// choice's content. Connection errors, non-200 replies and unreadable bodies
// are retried, then surfaced as UNAVAILABLE.
absl::StatusOr<std::unique_ptr<InducerClient>> MakeLiveInducer(
    const LiveClientConfig& config);

}  // namespace semprobe

#endif  // SEMPROBE_LIVE_CLIENT_H_
