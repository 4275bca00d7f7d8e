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

#include <stdexcept>
#include <vector>

#include "mmbell/scalar.hpp"

namespace mmbell {

/// Thrown when a preselection threshold removes every component.
struct EmptySupportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Squeezing gain g >= 0 of the phase-covariant amplifier, with the
/// hyperbolic quantities every formula needs. log_cosh/log_tanh are computed
/// from expm1/log1p so they stay accurate for large g.
struct GainSpec {
  double g = 0.0;
  double cosh_g = 1.0;
  double sinh_g = 0.0;
  double tanh_g = 0.0;
  double log_cosh = 0.0;
  double log_tanh = 0.0;  // -inf at g == 0
  double truncation_epsilon = 1e-12;

  explicit GainSpec(double gain, double eps = 1e-12);
};

/// Amplitude beta_N of the N-th double-pair component of the amplified
/// singlet: cosh(g)^-2 * tanh(g)^N * sqrt(N+1). Log-space scalar.
Scalar beta(int n, const GainSpec& gain);

enum class Polarization { phi, phi_perp };

/// One polarization branch of the 2N+1 photon macro qubit, expanded over the
/// two-mode Fock basis. Branch phi occupies |odd, even> kets, branch phi_perp
/// |even, odd>; amplitudes are real nonnegative square roots of rationals and
/// the squared amplitudes sum to exactly 1.
class MacroQubit {
 public:
  MacroQubit(int n, Polarization pol);

  int n() const { return n_; }
  Polarization pol() const { return pol_; }
  int terms() const { return n_ + 1; }

  /// Occupation of the k-th basis ket, k in [0, N].
  int n_phi(int k) const;
  int n_phi_perp(int k) const;

  const SqrtRational& amp(int k) const { return amps_.at(static_cast<std::size_t>(k)); }
  Rational amp2(int k) const { return amp(k).norm2(); }
  double amp_double(int k) const { return amp(k).to_double(); }

  /// Exact squared norm (== 1).
  Rational norm2() const;

  /// Squared normalization constant M^2 = 4^N * N! * (N+1)!.
  static Rational m_squared(int n);

 private:
  int n_;
  Polarization pol_;
  std::vector<SqrtRational> amps_;
};

MacroQubit macro_qubit(int n, Polarization pol);

/// Photon-pair-number distribution of the (optionally preselected) amplified
/// state: weights proportional to beta_N^2 for N >= n_threshold, renormalized
/// over the truncation window.
class PhotonSpectrum {
 public:
  PhotonSpectrum(int n_threshold, std::vector<double> weights);

  int n_threshold() const { return n_threshold_; }
  int n_max() const { return static_cast<int>(weights_.size()) - 1; }
  double weight(int n) const;
  const std::vector<double>& weights() const { return weights_; }
  double sum() const;

  /// Re-applies a preselection threshold and renormalizes.
  /// Throws EmptySupportError when nothing survives.
  PhotonSpectrum thresholded(int n_threshold) const;

 private:
  int n_threshold_;
  std::vector<double> weights_;  // index N = 0..n_max; zero below threshold
};

/// Spectrum of the amplified singlet preselected on N >= n_threshold.
///
/// Truncation: smallest N_max with the exact full-series tail
/// sum_{N > N_max} (N+1) T^2N < eps * cosh(g)^4, i.e. relative tail mass
/// below eps. (For deep thresholds the window-relative truncation error can
/// exceed eps; the rule is measured against the full series.)
/// Throws EmptySupportError for g == 0 with n_threshold >= 1.
PhotonSpectrum photon_spectrum(const GainSpec& gain, int n_threshold);

/// Mean total photon number, micro arm included: sum of weights * (2N+2).
/// Equals 4*sinh(g)^2 + 2 for an unpreselected spectrum.
double mean_total_photons(const PhotonSpectrum& spectrum);

}  // namespace mmbell
