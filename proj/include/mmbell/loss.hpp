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

#include <vector>

#include "mmbell/bell.hpp"
#include "mmbell/macro_states.hpp"
#include "mmbell/scalar.hpp"

namespace mmbell {

/// Weight G^M_n = 1 / (n! (M-n)!) of the loss pattern removing n photons
/// from the phi mode and M-n from the orthogonal mode.
Rational loss_pattern_weight(int n, int m);

/// Distribution of the total reflected count M for the 2N+1 macro photons:
/// Binomial(2N+1, 1 - t^2). Exact overload takes t^2 as a rational.
std::vector<Rational> reflected_count_distribution(int n, const Rational& t2);
std::vector<double> reflected_count_distribution(int n, double t2);

/// Distinguishability after losing exactly M photons, threshold unchanged:
/// enumerates the M+1 loss patterns with weights G^M_n, normalized by
/// C(2N+1, M). Reduces exactly to distinguishability(N, N_sigma) at M = 0.
/// Throws std::domain_error for M > 2N+1.
Scalar lossy_distinguishability(int n, int m, int n_sigma,
                                NumericMode mode = NumericMode::exact);

/// Nonnegative least-squares decomposition of the loss-averaged observable's
/// diagonal (on the 2N+1 photon shell) into plain threshold observables with
/// thresholds in [min(N_sigma, M), M + N_sigma].
struct MixtureFitReport {
  int n = 0;
  int m = 0;
  int n_sigma = 0;
  int range_lo = 0;
  int range_hi = 0;
  std::vector<double> weights;  // indexed by threshold - range_lo
  double weight_sum = 0.0;
  bool weight_sum_ok = false;   // sum <= 1 + 1e-9
  double residual_norm = 0.0;
  // Same fit with thresholds free over [0, 2N+1].
  double unrestricted_residual = 0.0;
};

MixtureFitReport threshold_mixture_check(int n, int m, int n_sigma);

/// Pair spectrum after preselecting on at least K_th photons reflected at a
/// beamsplitter of transmissivity t^2: joint weights proportional to
/// beta_N^2 * Binomial(2N+1, 1-t^2){M} for M >= K_th, renormalized.
struct BsPreselectedSpectrum {
  int k_th = 0;
  double t2 = 1.0;
  struct JointWeight {
    int n = 0;
    int m = 0;
    double weight = 0.0;
  };
  std::vector<JointWeight> joint;    // sorted by (N, M), zero rows skipped
  std::vector<double> marginal;      // over N, index 0..n_max
};

/// Throws EmptySupportError when no (N, M >= K_th) carries weight.
BsPreselectedSpectrum bs_preselect_spectrum(const GainSpec& gain, double t2, int k_th);

/// Distance of the BS-preselected marginal from the best theoretically
/// preselected spectrum, per K_th.
struct BsConvergenceRow {
  int k_th = 0;
  int best_n_th = 0;
  double tv_distance = 0.0;
};

std::vector<BsConvergenceRow> bs_convergence_report(const GainSpec& gain, double t2,
                                                    int k_th_max);

}  // namespace mmbell
