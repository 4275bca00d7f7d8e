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

#include <cstdint>
#include <mutex>
#include <vector>

#include "mmbell/scalar.hpp"

namespace mmbell {

/// Shared factorial/binomial cache.
///
/// Log-factorials come from std::lgamma (documented choice; relative error is
/// a few ulp) and are memoized for small arguments only, so queries up to
/// n ~ 1e7+ never allocate. Exact factorials are GMP integers memoized up to
/// the largest n requested. Growth is mutex-guarded; concurrent readers are
/// safe once (and while) the table grows on demand.
class CombinatoricsTable {
 public:
  static CombinatoricsTable& shared();

  /// ln(n!). Finite for any n >= 0 that fits a double's exponent.
  double log_factorial(std::int64_t n) const;

  /// n! as an exact integer (memoized; returned by value).
  BigInt factorial(unsigned long n) const;

  /// C(n, k), exact. Throws std::domain_error for k outside [0, n].
  BigInt binomial(long n, long k) const;

  /// ln C(n, k). Same domain contract as binomial().
  double log_binomial(std::int64_t n, std::int64_t k) const;

 private:
  CombinatoricsTable() = default;

  mutable std::mutex mu_;
  mutable std::vector<double> log_fact_;
  mutable std::vector<BigInt> fact_;
};

inline double log_factorial(std::int64_t n) {
  return CombinatoricsTable::shared().log_factorial(n);
}
inline BigInt factorial_exact(unsigned long n) {
  return CombinatoricsTable::shared().factorial(n);
}
inline BigInt binomial_exact(long n, long k) {
  return CombinatoricsTable::shared().binomial(n, k);
}
inline double log_binomial(std::int64_t n, std::int64_t k) {
  return CombinatoricsTable::shared().log_binomial(n, k);
}

}  // namespace mmbell
