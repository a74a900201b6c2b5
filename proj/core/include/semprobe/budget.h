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

#ifndef SEMPROBE_BUDGET_H_
#define SEMPROBE_BUDGET_H_

#include <cstdint>
#include <string>

#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "semprobe/rational.h"

namespace semprobe {

inline constexpr int64_t kSecondsPerDay = 86400;

// Per-test cost of over-the-air testing: the observation timeout plus the
// re-initialization overhead, both in seconds and both >= 0.
struct BudgetModel {
  Rational timeout_s = 45;
  Rational overhead_s = 0;

  Rational per_test() const { return timeout_s + overhead_s; }

  // {"timeout_s": "45", "overhead_s": "10.71"}; numbers or decimal strings.
  static absl::StatusOr<BudgetModel> FromJson(const nlohmann::json& j);
  nlohmann::ordered_json ToJson() const;
};

// n * (timeout + overhead).
Rational EstimateSeconds(const BudgetModel& model, int64_t n_tests);
Rational SecondsToDays(const Rational& seconds);
// floor(budget / (timeout + overhead)).
int64_t TestsInBudget(const BudgetModel& model, const Rational& budget_s);
// The overhead that makes `n_tests` exactly fill `budget_s`.
Rational DerivedOverhead(const Rational& budget_s, int64_t n_tests,
                         const Rational& timeout_s);
// n (n - 1) / 2 for n >= 2, else 0.
uint64_t PairSpace(uint64_t n_fields);

// Decimal rendering rounded half away from zero, e.g. (65610/86400, 2) -> 0.76.
std::string FormatDecimal(const Rational& r, int places);

}  // namespace semprobe

#endif  // SEMPROBE_BUDGET_H_
