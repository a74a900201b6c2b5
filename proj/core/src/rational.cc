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

#include "semprobe/rational.h"

#include <cstdio>
#include <cstdlib>
#include <numeric>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"

namespace semprobe {
namespace {

void Require(bool ok, const char* what) {
  if (!ok) {
    std::fprintf(stderr, "semprobe::Rational: %s\n", what);
    std::abort();
  }
}

int64_t Narrow(__int128 v) {
  Require(v >= INT64_MIN && v <= INT64_MAX, "overflow");
  return static_cast<int64_t>(v);
}

Rational Make(__int128 num, __int128 den) {
  Require(den != 0, "division by zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 a = num < 0 ? -num : num;
  __int128 b = den;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Rational(Narrow(num), Narrow(den));
}

}  // namespace

Rational::Rational(int64_t num, int64_t den) {
  Require(den != 0, "division by zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const int64_t g = std::gcd(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

absl::StatusOr<Rational> Rational::Parse(std::string_view text) {
  const std::string s(text);
  auto bad = [&] {
    return absl::InvalidArgumentError(absl::StrCat("bad rational '", s, "'"));
  };
  if (size_t slash = s.find('/'); slash != std::string::npos) {
    int64_t n = 0;
    int64_t d = 0;
    if (!absl::SimpleAtoi(s.substr(0, slash), &n) ||
        !absl::SimpleAtoi(s.substr(slash + 1), &d) || d == 0) {
      return bad();
    }
    return Rational(n, d);
  }
  if (size_t dot = s.find('.'); dot != std::string::npos) {
    const std::string whole = s.substr(0, dot);
    const std::string frac = s.substr(dot + 1);
    if (frac.empty() || frac.size() > 15 ||
        frac.find_first_not_of("0123456789") != std::string::npos) {
      return bad();
    }
    const bool negative = !whole.empty() && whole[0] == '-';
    int64_t w = 0;
    if (!whole.empty() && whole != "-" && !absl::SimpleAtoi(whole, &w)) {
      return bad();
    }
    int64_t f = 0;
    if (!absl::SimpleAtoi(frac, &f)) return bad();
    int64_t scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Rational magnitude = Rational(w < 0 ? -w : w) + Rational(f, scale);
    return negative ? -magnitude : magnitude;
  }
  int64_t n = 0;
  if (!absl::SimpleAtoi(s, &n)) return bad();
  return Rational(n);
}

int64_t Rational::Floor() const {
  int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

int64_t Rational::Ceil() const {
  int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ > 0) ++q;
  return q;
}

std::string Rational::ToString() const {
  if (den_ == 1) return absl::StrCat(num_);
  return absl::StrCat(num_, "/", den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Make(static_cast<__int128>(a.num_) * b.den_ +
                  static_cast<__int128>(b.num_) * a.den_,
              static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Make(static_cast<__int128>(a.num_) * b.num_,
              static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return Make(static_cast<__int128>(a.num_) * b.den_,
              static_cast<__int128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const __int128 l = static_cast<__int128>(a.num_) * b.den_;
  const __int128 r = static_cast<__int128>(b.num_) * a.den_;
  return l <=> r;
}

}  // namespace semprobe
