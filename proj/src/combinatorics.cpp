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

#include "mmbell/combinatorics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mmbell {

namespace {
// Beyond this the lgamma call is cheap enough that caching buys nothing.
constexpr std::int64_t kLogMemoLimit = 4096;
}  // namespace

CombinatoricsTable& CombinatoricsTable::shared() {
  static CombinatoricsTable table;
  return table;
}

double CombinatoricsTable::log_factorial(std::int64_t n) const {
  if (n < 0) {
    throw std::domain_error("log_factorial: negative argument " + std::to_string(n));
  }
  if (n >= kLogMemoLimit) {
    return std::lgamma(static_cast<double>(n) + 1.0);
  }
  std::lock_guard<std::mutex> lock(mu_);
  if (static_cast<std::int64_t>(log_fact_.size()) <= n) {
    std::size_t old = log_fact_.size();
    log_fact_.resize(static_cast<std::size_t>(n) + 1);
    for (std::size_t i = old; i < log_fact_.size(); ++i) {
      log_fact_[i] = std::lgamma(static_cast<double>(i) + 1.0);
    }
  }
  return log_fact_[static_cast<std::size_t>(n)];
}

BigInt CombinatoricsTable::factorial(unsigned long n) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (fact_.size() <= n) {
    if (fact_.empty()) fact_.emplace_back(1);
    for (std::size_t i = fact_.size(); i <= n; ++i) {
      fact_.push_back(fact_.back() * static_cast<unsigned long>(i));
    }
  }
  return fact_[n];
}

BigInt CombinatoricsTable::binomial(long n, long k) const {
  if (n < 0 || k < 0 || k > n) {
    throw std::domain_error("binomial: k=" + std::to_string(k) +
                            " outside [0, " + std::to_string(n) + "]");
  }
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return r;
}

double CombinatoricsTable::log_binomial(std::int64_t n, std::int64_t k) const {
  if (n < 0 || k < 0 || k > n) {
    throw std::domain_error("log_binomial: k=" + std::to_string(k) +
                            " outside [0, " + std::to_string(n) + "]");
  }
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

}  // namespace mmbell
