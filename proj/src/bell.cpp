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

#include "mmbell/bell.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mmbell/combinatorics.hpp"

namespace mmbell {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
// Largest N where the exact route is mandatory; beyond it sweeps go log-space.
constexpr int kExactLimit = 64;

void check_n(int n, const char* where) {
  if (n < 0) {
    throw std::domain_error(std::string(where) + ": negative N");
  }
}

void check_n_sigma(int n_sigma, const char* where) {
  if (n_sigma < 0) {
    throw std::domain_error(std::string(where) + ": negative N_sigma");
  }
}

// Numerator of F_N(k) over the common denominator M^2 = 4^N N! (N+1)!.
BigInt term_numerator(int n, int k) {
  const CombinatoricsTable& tab = CombinatoricsTable::shared();
  BigInt c = tab.binomial(n, k);
  return c * c * tab.factorial(static_cast<unsigned long>(2 * k)) *
         tab.factorial(static_cast<unsigned long>(2 * (n - k) + 1));
}

double log_m_squared(int n) {
  constexpr double kLn4 = 1.3862943611198906188344642429163531;
  return static_cast<double>(n) * kLn4 + log_factorial(n) + log_factorial(n + 1);
}

double log_term_F(int n, int k) {
  return 2.0 * log_binomial(n, k) + log_factorial(2 * k) +
         log_factorial(2 * (n - k) + 1) - log_m_squared(n);
}

}  // namespace

bool IndexInterval::operator==(const IndexInterval& o) const {
  if (empty() && o.empty()) return true;
  return !empty() && !o.empty() && lo == o.lo && hi == o.hi;
}

AngleSettings AngleSettings::optimal() {
  return AngleSettings{0.0, kPi / 4.0, kPi / 8.0, -kPi / 8.0};
}

RegionPair regions(int n, int n_sigma) {
  check_n(n, "regions");
  check_n_sigma(n_sigma, "regions");
  RegionPair r;
  // S+: 2k <= N_sigma and 2N-2k+1 > N_sigma, i.e.
  //     k <= floor(N_sigma/2) and k <= N - ceil(N_sigma/2).
  r.s_plus.lo = 0;
  r.s_plus.hi = std::min(n_sigma / 2, n - (n_sigma + 1) / 2);
  // S-: 2k > N_sigma and 2N-2k+1 <= N_sigma, i.e.
  //     k >= floor(N_sigma/2)+1 and k >= N - floor((N_sigma-1)/2).
  if (n_sigma == 0) {
    r.s_minus = IndexInterval{};  // 2N-2k+1 <= 0 is impossible
  } else {
    r.s_minus.lo = std::max(n_sigma / 2 + 1, n - (n_sigma - 1) / 2);
    r.s_minus.hi = n;
    if (r.s_minus.lo > n) r.s_minus = IndexInterval{};
  }
  if (r.s_plus.hi < 0) r.s_plus = IndexInterval{};
  return r;
}

Scalar term_F(int n, int k, NumericMode mode) {
  check_n(n, "term_F");
  if (k < 0 || k > n) {
    throw std::domain_error("term_F: k=" + std::to_string(k) + " outside [0, " +
                            std::to_string(n) + "]");
  }
  if (mode == NumericMode::exact) {
    return Scalar(make_rational(term_numerator(n, k), MacroQubit::m_squared(n).get_num()));
  }
  return Scalar(LogValue{1, log_term_F(n, k)});
}

Scalar distinguishability(int n, int n_sigma, NumericMode mode) {
  check_n(n, "distinguishability");
  check_n_sigma(n_sigma, "distinguishability");

  if (mode == NumericMode::exact) {
    RegionPair r = regions(n, n_sigma);
    BigInt acc(0);
    if (!r.s_plus.empty()) {
      for (int k = r.s_plus.lo; k <= r.s_plus.hi; ++k) acc += term_numerator(n, k);
    }
    if (!r.s_minus.empty()) {
      for (int k = r.s_minus.lo; k <= r.s_minus.hi; ++k) acc -= term_numerator(n, k);
    }
    return Scalar(make_rational(acc, MacroQubit::m_squared(n).get_num()));
  }

  // Log-space: reflect the threshold below N, then telescope. With
  // b = floor((s-1)/2) the region sums collapse to
  //   v = [s even] F_N(s/2) + sum_{k=0}^{b} (F_N(k) - F_N(N-k))
  // and each difference is (C(N,k)/M)^2 (2k)! (2N-2k)! (2N-4k) >= 0.
  std::int64_t s = n_sigma <= n ? n_sigma : 2 * static_cast<std::int64_t>(n) - n_sigma;
  if (s < 0) return Scalar(LogValue::zero());

  const double lm2 = log_m_squared(n);
  std::vector<LogValue> terms;
  std::int64_t b = s >= 1 ? (s - 1) / 2 : -1;
  terms.reserve(static_cast<std::size_t>(b + 2));
  if (s % 2 == 0) {
    terms.push_back(LogValue{1, log_term_F(n, static_cast<int>(s / 2))});
  }
  for (std::int64_t k = 0; k <= b; ++k) {
    double diff = 2.0 * static_cast<double>(n) - 4.0 * static_cast<double>(k);
    terms.push_back(LogValue{1, 2.0 * log_binomial(n, k) + log_factorial(2 * k) +
                                    log_factorial(2 * (n - k)) + std::log(diff) - lm2});
  }
  return Scalar(signed_log_sum(terms));
}

double distinguishability_value(int n, int n_sigma) {
  NumericMode mode = n <= kExactLimit ? NumericMode::exact : NumericMode::log_space;
  return distinguishability(n, n_sigma, mode).to_double();
}

Rational v_max_closed(int n) {
  check_n(n, "v_max_closed");
  int h = n / 2;
  BigInt c = binomial_exact(n, h);
  BigInt four_n;
  mpz_ui_pow_ui(four_n.get_mpz_t(), 4, static_cast<unsigned long>(n));
  long mult = n % 2 == 0 ? n + 1 : n + 2;
  return make_rational(c * c * mult, four_n);
}

double v_max_asymptote(std::int64_t n) {
  if (n < 0) {
    throw std::domain_error("v_max_asymptote: negative N");
  }
  std::int64_t h = n / 2;
  double lc = log_factorial(n) - log_factorial(h) - log_factorial(n - h);
  double mult = n % 2 == 0 ? static_cast<double>(n) + 1.0 : static_cast<double>(n) + 2.0;
  constexpr double kLn2 = 0.6931471805599453094172321214581766;
  return std::exp(2.0 * (lc - static_cast<double>(n) * kLn2) + std::log(mult));
}

double v_max_value(std::int64_t n) {
  if (n <= kExactLimit) return v_max_closed(static_cast<int>(n)).get_d();
  return v_max_asymptote(n);
}

int v_max_threshold(int n) {
  check_n(n, "v_max_threshold");
  return n % 2 == 0 ? n : n - 1;
}

double correlator(int n, int n_sigma, double phi_a, double phi_b) {
  return std::cos(2.0 * (phi_a - phi_b)) * distinguishability_value(n, n_sigma);
}

double chsh_angle_factor(const AngleSettings& s) {
  return std::cos(2.0 * (s.phi_a - s.phi_b)) + std::cos(2.0 * (s.phi_a - s.phi_b_prime)) +
         std::cos(2.0 * (s.phi_a_prime - s.phi_b)) -
         std::cos(2.0 * (s.phi_a_prime - s.phi_b_prime));
}

double chsh_value(int n, int n_sigma, const AngleSettings& settings) {
  return chsh_angle_factor(settings) * distinguishability_value(n, n_sigma);
}

double preselected_chsh(const GainSpec& gain, int n_threshold, int n_sigma,
                        const AngleSettings& settings) {
  check_n_sigma(n_sigma, "preselected_chsh");
  PhotonSpectrum spectrum = photon_spectrum(gain, n_threshold);
  double v_eff = 0.0;
  for (int n = spectrum.n_threshold(); n <= spectrum.n_max(); ++n) {
    double w = spectrum.weight(n);
    if (w == 0.0) continue;
    v_eff += w * distinguishability_value(n, n_sigma);
  }
  return chsh_angle_factor(settings) * v_eff;
}

double preselected_chsh_optimal(const GainSpec& gain, int n_threshold) {
  PhotonSpectrum spectrum = photon_spectrum(gain, n_threshold);
  double acc = 0.0;
  for (int n = spectrum.n_threshold(); n <= spectrum.n_max(); ++n) {
    double w = spectrum.weight(n);
    if (w == 0.0) continue;
    acc += w * v_max_value(n);
  }
  return 2.0 * std::sqrt(2.0) * acc;
}

std::vector<int> violation_frontier(int max_n) {
  check_n(max_n, "violation_frontier");
  std::vector<int> out;
  const Rational half = make_rational(1, 2);
  for (int n = 0; n <= max_n; ++n) {
    Rational v = v_max_closed(n);
    if (v * v > half) out.push_back(n);
  }
  return out;
}

int recommended_n_sigma(double mean_photons) {
  long r = std::lround(mean_photons / 2.0) - 1;
  return r < 0 ? 0 : static_cast<int>(r);
}

}  // namespace mmbell
