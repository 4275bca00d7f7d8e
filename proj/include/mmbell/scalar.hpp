// Copyright 2026 The mmbell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <variant>

namespace mmbell {

// Exact arithmetic is carried by GMP rationals; arbitrary-precision integers
// back every factorial and binomial so region sums never round.
using BigInt = mpz_class;
using Rational = mpq_class;

enum class NumericMode { exact, log_space };

/// Rational from a numerator/denominator pair, canonicalized.
Rational make_rational(long num, long den);
Rational make_rational(const BigInt& num, const BigInt& den);

/// Renders q as "num/den" with an explicit denominator ("1/1", "-3/4", ...).
std::string rational_str(const Rational& q);

/// base^e, exact.
Rational rational_pow(const Rational& base, unsigned long e);

/// Natural log of |q|. Valid far outside double range; -inf for q == 0.
double log_abs(const Rational& q);
double log_abs(const BigInt& n);

/// Signed log-magnitude float: value == sign * exp(log_mag).
/// sign == 0 encodes exact zero (log_mag is then ignored).
struct LogValue {
  int sign = 0;
  double log_mag = 0.0;
  // Raised by signed_log_sum when the summands cancelled below the 1e-6
  // ratio; callers holding exact inputs should redo the sum in exact mode.
  bool cancellation = false;

  static LogValue zero() { return LogValue{}; }
  static LogValue from_double(double x);
  static LogValue from_rational(const Rational& q);

  double to_double() const;
  bool is_zero() const { return sign == 0; }

  LogValue operator*(const LogValue& o) const;
  LogValue operator-() const;
};

/// Sum of signed log-space terms by max extraction.
///
/// The largest magnitude L is factored out and the residual sum accumulated
/// with Neumaier compensation, so the summation itself contributes ~2 ulp
/// and the result is permutation-stable well below 1e-12. Accuracy relative
/// to the true sum is limited by the exp() rounding of each term, i.e.
/// roughly machine epsilon divided by the cancellation ratio; results whose
/// magnitude falls below 1e-6 of the largest term carry the cancellation
/// flag. An empty span (or all-zero signs) is an exact zero.
LogValue signed_log_sum(std::span<const LogValue> terms);

/// Dual-mode real number: exact rational or signed log-magnitude float.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  explicit Scalar(Rational q) : value_(std::move(q)) {}
  explicit Scalar(const LogValue& lv) : value_(lv) {}

  NumericMode mode() const {
    return std::holds_alternative<Rational>(value_) ? NumericMode::exact
                                                    : NumericMode::log_space;
  }
  bool is_exact() const { return mode() == NumericMode::exact; }

  /// Throws std::logic_error when the scalar is in the other mode.
  const Rational& exact() const;
  const LogValue& log() const;

  double to_double() const;

 private:
  std::variant<Rational, LogValue> value_;
};

/// sign * sqrt(square), with square an exact nonnegative rational.
///
/// Closed under multiplication; enough to carry Fock amplitudes (which are
/// square roots of rationals here) through state construction, beamsplitter
/// expansion, and |amp|^2 extraction without ever rounding.
struct SqrtRational {
  int sign = 0;
  Rational square = Rational(0);

  static SqrtRational zero() { return SqrtRational{}; }
  /// Value equal to the rational q itself (square becomes q^2).
  static SqrtRational from_rational(const Rational& q);
  /// sgn * sqrt(square); square must be >= 0.
  static SqrtRational from_square(int sgn, Rational square);

  bool is_zero() const { return sign == 0; }
  /// |value|^2 as an exact rational.
  Rational norm2() const { return sign == 0 ? Rational(0) : square; }

  SqrtRational operator*(const SqrtRational& o) const;
  SqrtRational operator-() const;
  double to_double() const;
};

}  // namespace mmbell
