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

#ifndef FLOWCORE_RATIONAL_H_
#define FLOWCORE_RATIONAL_H_

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace flowcore {

// Every algorithmic quantity (capacities, demands, flows, payoffs, LP data)
// is an exact rational.
using Rational = mpq_class;

// Canonical p/q. Two-argument mpq_class construction does not reduce, and
// GMP arithmetic requires canonical operands, so fractions go through here.
inline Rational Frac(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Accepts "p/q", integers and plain decimals ("1.25", "-.5", "3e2" is not
// accepted). Decimals are converted exactly, so "0.1" is 1/10.
Rational ParseRational(std::string_view text);

// Canonical form: "p" when the denominator is one, else "p/q".
std::string ToString(const Rational& value);

// Fixed-point rendering rounded half away from zero.
std::string ToDecimal(const Rational& value, int places = 6);

double ToDouble(const Rational& value);

// Exact conversion of a finite double (a dyadic rational).
Rational FromDouble(double value);

}  // namespace flowcore

#endif  // FLOWCORE_RATIONAL_H_
