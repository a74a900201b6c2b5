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

#include "semprobe/budget.h"

#include "absl/strings/str_cat.h"

namespace semprobe {
namespace {

absl::StatusOr<Rational> ReadRational(const nlohmann::json& j, const char* key,
                                      Rational fallback) {
  if (!j.contains(key)) return fallback;
  const nlohmann::json& v = j[key];
  if (v.is_number_integer()) return Rational(v.get<int64_t>());
  if (v.is_string()) return Rational::Parse(v.get<std::string>());
  return absl::InvalidArgumentError(absl::StrCat(
      "budget: '", key, "' must be an integer or a decimal string"));
}

}  // namespace

absl::StatusOr<BudgetModel> BudgetModel::FromJson(const nlohmann::json& j) {
  if (!j.is_object())
    return absl::InvalidArgumentError("budget: not an object");
  BudgetModel m;
  absl::StatusOr<Rational> timeout = ReadRational(j, "timeout_s", m.timeout_s);
  if (!timeout.ok()) return timeout.status();
  absl::StatusOr<Rational> overhead =
      ReadRational(j, "overhead_s", m.overhead_s);
  if (!overhead.ok()) return overhead.status();
  if (*timeout < Rational(0) || *overhead < Rational(0)) {
    return absl::InvalidArgumentError(
        "budget: timeout and overhead must be >= 0");
  }
  m.timeout_s = *timeout;
  m.overhead_s = *overhead;
  return m;
}

nlohmann::ordered_json BudgetModel::ToJson() const {
  return nlohmann::ordered_json{{"timeout_s", timeout_s.ToString()},
                                {"overhead_s", overhead_s.ToString()}};
}

Rational EstimateSeconds(const BudgetModel& model, int64_t n_tests) {
  return model.per_test() * Rational(n_tests);
}

Rational SecondsToDays(const Rational& seconds) {
  return seconds / Rational(kSecondsPerDay);
}

int64_t TestsInBudget(const BudgetModel& model, const Rational& budget_s) {
  if (model.per_test() == Rational(0)) return 0;
  return (budget_s / model.per_test()).Floor();
}

Rational DerivedOverhead(const Rational& budget_s, int64_t n_tests,
                         const Rational& timeout_s) {
  return budget_s / Rational(n_tests) - timeout_s;
}

uint64_t PairSpace(uint64_t n_fields) {
  return n_fields < 2 ? 0 : n_fields * (n_fields - 1) / 2;
}

std::string FormatDecimal(const Rational& r, int places) {
  int64_t scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const Rational scaled = r.Abs() * Rational(scale) + Rational(1, 2);
  const int64_t units = scaled.Floor();
  std::string digits = absl::StrCat(units / scale);
  if (places > 0) {
    std::string frac = absl::StrCat(units % scale);
    frac.insert(0, static_cast<size_t>(places) - frac.size(), '0');
    absl::StrAppend(&digits, ".", frac);
  }
  return (r < Rational(0) && units != 0) ? absl::StrCat("-", digits) : digits;
}

}  // namespace semprobe
