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

#include "mmbell/macro_states.hpp"
#include "mmbell/scalar.hpp"

namespace mmbell {

/// Closed integer interval [lo, hi]; empty when hi < lo.
struct IndexInterval {
  int lo = 0;
  int hi = -1;

  bool empty() const { return hi < lo; }
  int size() const { return empty() ? 0 : hi - lo + 1; }
  bool contains(int k) const { return !empty() && lo <= k && k <= hi; }
  bool operator==(const IndexInterval& o) const;
};

/// Index sets of the phi_perp branch kets on which the threshold observable
/// resolves to +1 (s_plus) and -1 (s_minus).
struct RegionPair {
  IndexInterval s_plus;
  IndexInterval s_minus;
  bool operator==(const RegionPair& o) const {
    return s_plus == o.s_plus && s_minus == o.s_minus;
  }
};

/// Dichotomic-with-zero threshold measurement: +1 when the phi mode count is
/// at most n_sigma while the orthogonal count exceeds it, -1 for the mirror
/// image, 0 otherwise. basis_angle is the phi direction, in radians.
struct ThresholdObservable {
  int n_sigma = 0;
  double basis_angle = 0.0;

  int eigenvalue(int n_phi, int n_phi_perp) const {
    if (n_phi <= n_sigma && n_phi_perp > n_sigma) return 1;
    if (n_phi > n_sigma && n_phi_perp <= n_sigma) return -1;
    return 0;
  }
};

/// Measurement directions for a CHSH run, in radians.
struct AngleSettings {
  double phi_a = 0.0;
  double phi_a_prime = 0.0;
  double phi_b = 0.0;
  double phi_b_prime = 0.0;

  /// Settings attaining 2*sqrt(2)*v for the correlator cos(2(a-b))*v with
  /// the minus sign on the (a', b') term: (0, pi/4, pi/8, -pi/8).
  static AngleSettings optimal();
};

/// Index sets where the threshold observable is +1/-1 on the phi_perp branch
/// of the N-pair component, as closed intervals.
///
/// Evaluates the primitive inequalities {2k <= N_sigma, 2N-2k+1 > N_sigma}
/// and {2k > N_sigma, 2N-2k+1 <= N_sigma} directly; these are invariant
/// under N_sigma -> 2N - N_sigma (the two inequalities swap), so thresholds
/// above N reduce to their reflection automatically and both sets are empty
/// from N_sigma = 2N+1 on.
RegionPair regions(int n, int n_sigma);

/// F_N(k): squared amplitude of the k-th ket of the phi_perp branch.
Scalar term_F(int n, int k, NumericMode mode = NumericMode::exact);

/// Distinguishability v(N, N_sigma) = sum_{S+} F_N - sum_{S-} F_N.
///
/// The log-space route sums the telescoped differences
/// F_N(k) - F_N(N-k) = (C(N,k)/M)^2 (2k)! (2N-2k)! (2N-4k), whose summands
/// are all nonnegative on the evaluated range, so no cancellation occurs.
Scalar distinguishability(int n, int n_sigma, NumericMode mode = NumericMode::exact);

/// distinguishability as a double, exact route for N <= 64, log-space beyond.
double distinguishability_value(int n, int n_sigma);

/// Best-threshold distinguishability, closed form:
/// (C(N, floor(N/2)) 2^-N)^2 * (N+1) for even N, * (N+2) for odd N.
Rational v_max_closed(int n);

/// Same quantity through log-space, stable up to N ~ 1e7. Decreases to 2/pi.
double v_max_asymptote(std::int64_t n);

/// v_max as a double: exact closed form for N <= 64, log-space beyond.
double v_max_value(std::int64_t n);

/// The threshold where v_max is attained: N for even N, N-1 for odd.
int v_max_threshold(int n);

/// Correlator E(phi_a, phi_b) = cos(2(phi_a - phi_b)) * v(N, N_sigma).
double correlator(int n, int n_sigma, double phi_a, double phi_b);

/// CHSH combination E(a,b) + E(a,b') + E(a',b) - E(a',b').
double chsh_value(int n, int n_sigma, const AngleSettings& settings);

/// The four-cosine factor multiplying v in chsh_value; max 2*sqrt(2).
double chsh_angle_factor(const AngleSettings& settings);

/// CHSH of the preselected state with one shared threshold: the convex sum
/// over the spectrum of per-component CHSH values.
double preselected_chsh(const GainSpec& gain, int n_threshold, int n_sigma,
                        const AngleSettings& settings);

/// Upper envelope over thresholds and angles: 2*sqrt(2) * sum of
/// weights * v_max(N). Strictly below 2*sqrt(2) once any N >= 1 has weight.
double preselected_chsh_optimal(const GainSpec& gain, int n_threshold);

/// All N in [0, max_n] whose optimal CHSH exceeds 2, decided by the exact
/// rational comparison v_max(N)^2 > 1/2.
std::vector<int> violation_frontier(int max_n);

/// Default sweep threshold: round(mean_total_photons / 2) - 1, floored at 0.
/// Callers clamp to [0, 2N+1] per component.
int recommended_n_sigma(double mean_photons);

}  // namespace mmbell
