// Copyright 2026 The Flowcore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flowcore/rational.h"

#include <cctype>
#include <cmath>
#include <string>

#include "flowcore/error.h"

namespace flowcore {
namespace {

bool AllDigits(std::string_view s) {
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void BadRational(std::string_view text) {
  throw Error(ErrorKind::kStructural,
              "malformed rational '" + std::string(text) + "'");
}

}  // namespace

Rational ParseRational(std::string_view text) {
  std::string_view body = text;
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front())))
    body.remove_prefix(1);
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back())))
    body.remove_suffix(1);
  if (body.empty()) BadRational(text);

  bool negative = false;
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (body.empty()) BadRational(text);

  Rational result;
  if (const auto slash = body.find('/'); slash != std::string_view::npos) {
    std::string_view num = body.substr(0, slash);
    std::string_view den = body.substr(slash + 1);
    if (num.empty() || den.empty() || !AllDigits(num) || !AllDigits(den)) {
      BadRational(text);
    }
    mpz_class d(std::string(den), 10);
    if (d == 0) BadRational(text);
    result = Rational(mpz_class(std::string(num), 10), d);
  } else {
    const auto dot = body.find('.');
    std::string_view whole = body.substr(0, dot);
    std::string_view frac =
        dot == std::string_view::npos ? std::string_view() : body.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || !AllDigits(whole) ||
        !AllDigits(frac)) {
      BadRational(text);
    }
    std::string digits = std::string(whole) + std::string(frac);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    result = Rational(mpz_class(digits.empty() ? "0" : digits, 10), scale);
  }
  result.canonicalize();
  if (negative) result = -result;
  return result;
}

std::string ToString(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string ToDecimal(const Rational& value, int places) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
  Rational scaled = abs(value) * scale;
  // Round half away from zero on the magnitude.
  mpz_class q = scaled.get_num() / scaled.get_den();
  Rational rem = scaled - Rational(q);
  if (rem * 2 >= 1) ++q;
  std::string digits = q.get_str();
  if (static_cast<int>(digits.size()) <= places) {
    digits.insert(0, places + 1 - digits.size(), '0');
  }
  std::string out = digits.substr(0, digits.size() - places);
  if (places > 0) out += "." + digits.substr(digits.size() - places);
  if (value < 0 && q != 0) out.insert(0, "-");
  return out;
}

double ToDouble(const Rational& value) { return value.get_d(); }

Rational FromDouble(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::kStructural, "non-finite value has no rational form");
  }
  Rational r(value);
  r.canonicalize();
  return r;
}

}  // namespace flowcore
