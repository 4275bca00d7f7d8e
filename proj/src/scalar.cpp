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

#include "mmbell/scalar.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mmbell {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kCancellationRatio = 1e-6;
constexpr double kLn2 = 0.6931471805599453094172321214581766;
}  // namespace

Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string rational_str(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rational_pow(const Rational& base, unsigned long e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
  out.canonicalize();
  return out;
}

double log_abs(const BigInt& n) {
  if (n == 0) return kNegInf;
  // d * 2^e decomposition keeps the log finite beyond double range.
  signed long e = 0;
  double d = mpz_get_d_2exp(&e, n.get_mpz_t());
  return std::log(std::fabs(d)) + static_cast<double>(e) * kLn2;
}

double log_abs(const Rational& q) {
  if (q == 0) return kNegInf;
  return log_abs(BigInt(q.get_num())) - log_abs(BigInt(q.get_den()));
}

LogValue LogValue::from_double(double x) {
  if (x == 0.0) return zero();
  return LogValue{x > 0 ? 1 : -1, std::log(std::fabs(x))};
}

LogValue LogValue::from_rational(const Rational& q) {
  int s = sgn(q);
  if (s == 0) return zero();
  return LogValue{s, log_abs(q)};
}

double LogValue::to_double() const {
  if (sign == 0) return 0.0;
  return static_cast<double>(sign) * std::exp(log_mag);
}

LogValue LogValue::operator*(const LogValue& o) const {
  if (sign == 0 || o.sign == 0) return zero();
  return LogValue{sign * o.sign, log_mag + o.log_mag, cancellation || o.cancellation};
}

LogValue LogValue::operator-() const {
  LogValue r = *this;
  r.sign = -r.sign;
  return r;
}

LogValue signed_log_sum(std::span<const LogValue> terms) {
  double top = kNegInf;
  bool flagged_input = false;
  for (const LogValue& t : terms) {
    if (t.sign == 0) continue;
    flagged_input |= t.cancellation;
    if (t.log_mag > top) top = t.log_mag;
  }
  if (top == kNegInf) return LogValue::zero();

  // Neumaier-compensated accumulation of sign * exp(log_mag - top).
  double sum = 0.0, comp = 0.0;
  for (const LogValue& t : terms) {
    if (t.sign == 0) continue;
    double v = static_cast<double>(t.sign) * std::exp(t.log_mag - top);
    double s = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      comp += (sum - s) + v;
    } else {
      comp += (v - s) + sum;
    }
    sum = s;
  }
  sum += comp;

  if (sum == 0.0) {
    LogValue r = LogValue::zero();
    r.cancellation = true;
    return r;
  }
  LogValue r{sum > 0 ? 1 : -1, top + std::log(std::fabs(sum))};
  r.cancellation = flagged_input || std::fabs(sum) < kCancellationRatio;
  return r;
}

const Rational& Scalar::exact() const {
  if (!std::holds_alternative<Rational>(value_)) {
    throw std::logic_error("Scalar: exact() called on a log-space value");
  }
  return std::get<Rational>(value_);
}

const LogValue& Scalar::log() const {
  if (!std::holds_alternative<LogValue>(value_)) {
    throw std::logic_error("Scalar: log() called on an exact value");
  }
  return std::get<LogValue>(value_);
}

double Scalar::to_double() const {
  if (std::holds_alternative<Rational>(value_)) {
    return std::get<Rational>(value_).get_d();
  }
  return std::get<LogValue>(value_).to_double();
}

SqrtRational SqrtRational::from_rational(const Rational& q) {
  int s = sgn(q);
  if (s == 0) return zero();
  return SqrtRational{s, q * q};
}

SqrtRational SqrtRational::from_square(int sgn_in, Rational sq) {
  if (sgn(sq) < 0) {
    throw std::domain_error("SqrtRational: negative square");
  }
  if (sgn_in == 0 || sq == 0) return zero();
  return SqrtRational{sgn_in > 0 ? 1 : -1, std::move(sq)};
}

SqrtRational SqrtRational::operator*(const SqrtRational& o) const {
  if (sign == 0 || o.sign == 0) return zero();
  return SqrtRational{sign * o.sign, square * o.square};
}

SqrtRational SqrtRational::operator-() const {
  SqrtRational r = *this;
  r.sign = -r.sign;
  return r;
}

double SqrtRational::to_double() const {
  if (sign == 0) return 0.0;
  // Via logs: the square's numerator/denominator routinely exceed 1e308.
  return static_cast<double>(sign) * std::exp(0.5 * log_abs(square));
}

}  // namespace mmbell
