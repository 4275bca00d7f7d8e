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

#include "mmbell/macro_states.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mmbell/combinatorics.hpp"

namespace mmbell {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.6931471805599453094172321214581766;
}  // namespace

GainSpec::GainSpec(double gain, double eps) {
  if (!(gain >= 0.0) || !std::isfinite(gain)) {
    throw std::domain_error("GainSpec: gain must be finite and >= 0, got " +
                                std::to_string(gain));
  }
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw std::domain_error("GainSpec: truncation epsilon must lie in (0, 1)");
  }
  g = gain;
  cosh_g = std::cosh(gain);
  sinh_g = std::sinh(gain);
  tanh_g = std::tanh(gain);
  truncation_epsilon = eps;
  if (gain == 0.0) {
    log_cosh = 0.0;
    log_tanh = kNegInf;
  } else {
    double e2 = std::exp(-2.0 * gain);
    log_cosh = gain - kLn2 + std::log1p(e2);
    log_tanh = std::log1p(-e2) - std::log1p(e2);
  }
}

Scalar beta(int n, const GainSpec& gain) {
  if (n < 0) {
    throw std::domain_error("beta: negative component index");
  }
  if (gain.g == 0.0) {
    return Scalar(n == 0 ? LogValue{1, 0.0} : LogValue::zero());
  }
  double lm = 0.5 * std::log(static_cast<double>(n) + 1.0) +
              static_cast<double>(n) * gain.log_tanh - 2.0 * gain.log_cosh;
  return Scalar(LogValue{1, lm});
}

MacroQubit::MacroQubit(int n, Polarization pol) : n_(n), pol_(pol) {
  if (n < 0) {
    throw std::domain_error("MacroQubit: negative N");
  }
  const CombinatoricsTable& tab = CombinatoricsTable::shared();
  Rational m2 = m_squared(n);
  amps_.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    BigInt c = tab.binomial(n, k);
    BigInt num = c * c;
    if (pol == Polarization::phi) {
      num *= tab.factorial(static_cast<unsigned long>(2 * k + 1));
      num *= tab.factorial(static_cast<unsigned long>(2 * (n - k)));
    } else {
      num *= tab.factorial(static_cast<unsigned long>(2 * k));
      num *= tab.factorial(static_cast<unsigned long>(2 * (n - k) + 1));
    }
    amps_.push_back(SqrtRational::from_square(1, Rational(num) / m2));
  }
}

int MacroQubit::n_phi(int k) const {
  return pol_ == Polarization::phi ? 2 * k + 1 : 2 * k;
}

int MacroQubit::n_phi_perp(int k) const {
  return pol_ == Polarization::phi ? 2 * (n_ - k) : 2 * (n_ - k) + 1;
}

Rational MacroQubit::norm2() const {
  Rational s(0);
  for (const SqrtRational& a : amps_) s += a.norm2();
  return s;
}

Rational MacroQubit::m_squared(int n) {
  BigInt four_n;
  mpz_ui_pow_ui(four_n.get_mpz_t(), 4, static_cast<unsigned long>(n));
  return Rational(four_n * factorial_exact(static_cast<unsigned long>(n)) *
                  factorial_exact(static_cast<unsigned long>(n) + 1));
}

MacroQubit macro_qubit(int n, Polarization pol) { return MacroQubit(n, pol); }

PhotonSpectrum::PhotonSpectrum(int n_threshold, std::vector<double> weights)
    : n_threshold_(n_threshold), weights_(std::move(weights)) {}

double PhotonSpectrum::weight(int n) const {
  if (n < 0 || n >= static_cast<int>(weights_.size())) return 0.0;
  return weights_[static_cast<std::size_t>(n)];
}

double PhotonSpectrum::sum() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

PhotonSpectrum PhotonSpectrum::thresholded(int n_threshold) const {
  if (n_threshold < 0) {
    throw std::domain_error("PhotonSpectrum: negative threshold");
  }
  std::vector<double> w = weights_;
  double mass = 0.0;
  for (int n = 0; n < static_cast<int>(w.size()); ++n) {
    if (n < n_threshold) w[static_cast<std::size_t>(n)] = 0.0;
    mass += w[static_cast<std::size_t>(n)];
  }
  if (mass <= 0.0) {
    throw EmptySupportError("preselection at N_th=" + std::to_string(n_threshold) +
                            " leaves an empty spectrum");
  }
  for (double& x : w) x /= mass;
  return PhotonSpectrum(std::max(n_threshold, n_threshold_), std::move(w));
}

PhotonSpectrum photon_spectrum(const GainSpec& gain, int n_threshold) {
  if (n_threshold < 0) {
    throw std::domain_error("photon_spectrum: negative threshold");
  }
  if (gain.g == 0.0) {
    if (n_threshold >= 1) {
      throw EmptySupportError(
          "photon_spectrum: g=0 carries only the N=0 component, threshold N_th=" +
          std::to_string(n_threshold) + " empties it");
    }
    return PhotonSpectrum(0, {1.0});
  }

  // x = tanh(g)^2; full-series tail beyond N is exactly
  // x^(N+1) * ((N+2) - (N+1) x) / (1-x)^2 and the target is eps / (1-x)^2.
  const double lx = 2.0 * gain.log_tanh;
  const double x = std::exp(lx);
  int n_max = n_threshold;
  while (true) {
    double tail = std::exp(static_cast<double>(n_max + 1) * lx) *
                  (static_cast<double>(n_max + 2) - static_cast<double>(n_max + 1) * x);
    if (tail < gain.truncation_epsilon) break;
    ++n_max;
  }

  std::vector<LogValue> lw(static_cast<std::size_t>(n_max - n_threshold) + 1);
  for (int n = n_threshold; n <= n_max; ++n) {
    lw[static_cast<std::size_t>(n - n_threshold)] =
        LogValue{1, std::log(static_cast<double>(n) + 1.0) + static_cast<double>(n) * lx};
  }
  LogValue norm = signed_log_sum(lw);

  std::vector<double> weights(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (int n = n_threshold; n <= n_max; ++n) {
    weights[static_cast<std::size_t>(n)] =
        std::exp(lw[static_cast<std::size_t>(n - n_threshold)].log_mag - norm.log_mag);
  }
  return PhotonSpectrum(n_threshold, std::move(weights));
}

double mean_total_photons(const PhotonSpectrum& spectrum) {
  double mean = 0.0;
  for (int n = 0; n <= spectrum.n_max(); ++n) {
    mean += spectrum.weight(n) * (2.0 * n + 2.0);
  }
  return mean;
}

}  // namespace mmbell
