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

#include "mmbell/verify.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "mmbell/loss.hpp"
#include "mmbell/macro_states.hpp"
#include "mmbell/oracle.hpp"
#include "mmbell/scalar.hpp"

namespace mmbell {

namespace {

std::string fmt_pair(int n, int n_sigma) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "N=%d, N_sigma=%d", n, n_sigma);
  return buf;
}

// Membership test straight from the two defining inequalities; no interval
// arithmetic shared with the closed form.
RegionPair brute_regions(int n, int n_sigma) {
  RegionPair out;
  int plus_lo = -1, plus_hi = -1, minus_lo = -1, minus_hi = -1;
  for (int k = 0; k <= n; ++k) {
    const int n_phi = 2 * k;
    const int n_perp = 2 * (n - k) + 1;
    if (n_phi <= n_sigma && n_perp > n_sigma) {
      if (plus_lo < 0) plus_lo = k;
      plus_hi = k;
    }
    if (n_phi > n_sigma && n_perp <= n_sigma) {
      if (minus_lo < 0) minus_lo = k;
      minus_hi = k;
    }
  }
  if (plus_lo >= 0) out.s_plus = IndexInterval{plus_lo, plus_hi};
  if (minus_lo >= 0) out.s_minus = IndexInterval{minus_lo, minus_hi};
  return out;
}

VerifyGroupResult check_regions(const VerifyOptions& opts) {
  VerifyGroupResult res{"regions", true, "closed form == enumeration, N <= 24"};
  const auto impl = opts.regions_impl
                        ? opts.regions_impl
                        : [](int n, int s) { return regions(n, s); };
  for (int n = 0; n <= 24; ++n) {
    for (int ns = 0; ns <= 2 * n + 3; ++ns) {
      const RegionPair got = impl(n, ns);
      const RegionPair want = brute_regions(n, ns);
      if (!(got == want)) {
        res.pass = false;
        res.detail = "mismatch at " + fmt_pair(n, ns);
        return res;
      }
      // Both defining inequalities swap under N_sigma -> 2N - N_sigma.
      if (ns <= 2 * n && !(impl(n, 2 * n - ns) == want)) {
        res.pass = false;
        res.detail = "reflection mismatch at " + fmt_pair(n, ns);
        return res;
      }
    }
  }
  return res;
}

VerifyGroupResult check_bell() {
  VerifyGroupResult res{"bell", true, "exact == log route, N <= 40"};
  for (int n = 0; n <= 40; ++n) {
    for (int ns = 0; ns <= 2 * n + 1; ++ns) {
      const double ex = distinguishability(n, ns, NumericMode::exact).to_double();
      const double lg = distinguishability(n, ns, NumericMode::log_space).to_double();
      if (std::fabs(ex - lg) > 1e-10 * std::max(std::fabs(ex), 1e-30)) {
        res.pass = false;
        res.detail = "route split at " + fmt_pair(n, ns);
        return res;
      }
    }
    const Rational best = distinguishability(n, v_max_threshold(n)).exact();
    if (best != v_max_closed(n)) {
      res.pass = false;
      res.detail = "closed-form maximum differs at N=" + std::to_string(n);
      return res;
    }
  }
  const double factor = chsh_angle_factor(AngleSettings::optimal());
  if (std::fabs(factor - 2.0 * std::sqrt(2.0)) > 1e-14) {
    res.pass = false;
    res.detail = "optimal angle factor is not 2*sqrt(2)";
  }
  return res;
}

VerifyGroupResult check_antisymmetry() {
  VerifyGroupResult res{"antisymmetry", true,
                        "branch expectations mirror exactly, N <= 64"};
  for (int n = 0; n <= 64; ++n) {
    const MacroQubit phi = macro_qubit(n, Polarization::phi);
    const MacroQubit perp = macro_qubit(n, Polarization::phi_perp);
    for (int ns = 0; ns <= 2 * n + 1; ++ns) {
      const Rational from_phi = threshold_expectation_q(phi, ns);
      const Rational from_perp = threshold_expectation_q(perp, ns);
      if (from_phi != -from_perp) {
        res.pass = false;
        res.detail = "branch asymmetry at " + fmt_pair(n, ns);
        return res;
      }
      if (from_perp != distinguishability(n, ns).exact()) {
        res.pass = false;
        res.detail = "region sum differs from direct sum at " + fmt_pair(n, ns);
        return res;
      }
    }
  }
  return res;
}

VerifyGroupResult check_oracle_chsh() {
  VerifyGroupResult res{"oracle-chsh", true,
                        "dense-state correlators match closed form, N <= 3"};
  const AngleSettings opt = AngleSettings::optimal();
  for (int n = 0; n <= 3; ++n) {
    for (int ns : {0, 1, v_max_threshold(n)}) {
      if (ns > 2 * n + 1) continue;
      const double direct = chsh_value(n, ns, opt);
      const double dense = oracle_chsh(n, ns, opt);
      if (std::fabs(direct - dense) > 1e-8) {
        res.pass = false;
        res.detail = "CHSH split at " + fmt_pair(n, ns);
        return res;
      }
    }
  }
  // Rotating both arms together must leave the correlator at its v value.
  const double v21 = distinguishability_value(2, 1);
  for (double phi : {0.0, 0.3, 1.1}) {
    if (std::fabs(oracle_correlator(2, 1, phi, phi) - v21) > 1e-8) {
      res.pass = false;
      res.detail = "correlator not rotation invariant at phi=" + std::to_string(phi);
      return res;
    }
  }
  if (std::fabs(oracle_correlator(2, 1, 0.4, 0.15) -
                correlator(2, 1, 0.4, 0.15)) > 1e-8) {
    res.pass = false;
    res.detail = "correlator angle dependence differs at N=2";
  }
  return res;
}

VerifyGroupResult check_cross_terms() {
  VerifyGroupResult res{"cross-terms", true,
                        "photon-number sectors stay orthogonal"};
  const std::pair<int, int> pairs[] = {{0, 1}, {1, 2}, {0, 2}, {2, 3}};
  for (auto [n, m] : pairs) {
    for (unsigned long seed : {11UL, 29UL}) {
      if (oracle_cross_term(n, m, seed) != 0.0) {
        res.pass = false;
        res.detail = "nonzero overlap between N=" + std::to_string(n) +
                     " and N=" + std::to_string(m);
        return res;
      }
    }
  }
  if (oracle_cross_term(1, 1, 17UL) == 0.0) {
    res.pass = false;
    res.detail = "diagonal control overlap vanished; check is vacuous";
  }
  return res;
}

VerifyGroupResult check_loss() {
  VerifyGroupResult res{"loss", true,
                        "pattern sum == dense beamsplitter routes, N <= 4"};
  for (int n = 0; n <= 6; ++n) {
    for (int ns = 0; ns <= 2 * n + 1; ++ns) {
      if (lossy_distinguishability(n, 0, ns).exact() !=
          distinguishability(n, ns).exact()) {
        res.pass = false;
        res.detail = "lossless reduction fails at " + fmt_pair(n, ns);
        return res;
      }
    }
  }
  for (int n = 0; n <= 4; ++n) {
    for (const Rational& t2 : {make_rational(1, 2), make_rational(3, 4)}) {
      const std::vector<Rational> pmf = reflected_count_distribution(n, t2);
      for (int m = 0; m <= std::min(2, 2 * n + 1); ++m) {
        for (int ns : {0, 1, n}) {
          const LossConditionalQ got = lossy_threshold_expectation_q(n, t2, m, ns);
          if (got.probability != pmf[static_cast<std::size_t>(m)]) {
            res.pass = false;
            res.detail = "reflected-count probability differs at " + fmt_pair(n, ns) +
                         ", M=" + std::to_string(m);
            return res;
          }
          if (got.value != lossy_distinguishability(n, m, ns).exact()) {
            res.pass = false;
            res.detail = "conditional value differs at " + fmt_pair(n, ns) +
                         ", M=" + std::to_string(m);
            return res;
          }
        }
      }
    }
  }
  for (int n = 0; n <= 3; ++n) {
    for (int m = 0; m <= std::min(2, 2 * n + 1); ++m) {
      const LossConditional fl = lossy_threshold_expectation(n, 0.5, m, 1);
      const LossConditionalQ ex = lossy_threshold_expectation_q(n, make_rational(1, 2), m, 1);
      if (std::fabs(fl.probability - ex.probability.get_d()) > 1e-12 ||
          std::fabs(fl.value - ex.value.get_d()) > 1e-9) {
        res.pass = false;
        res.detail = "float beamsplitter route differs at N=" + std::to_string(n) +
                     ", M=" + std::to_string(m);
        return res;
      }
    }
  }
  return res;
}

VerifyGroupResult check_mixture() {
  VerifyGroupResult res{"mixture", true,
                        "averaged observable decomposes into thresholds"};
  const MixtureFitReport fix = threshold_mixture_check(2, 1, 1);
  const bool fixture_ok =
      fix.range_lo == 1 && fix.range_hi == 2 && fix.weights.size() == 2 &&
      std::fabs(fix.weights[0] - 0.6) < 1e-8 &&
      std::fabs(fix.weights[1] - 0.4) < 1e-8 &&
      fix.residual_norm < 1e-10 && fix.weight_sum_ok;
  if (!fixture_ok) {
    res.pass = false;
    res.detail = "known decomposition (N=2, M=1, N_sigma=1) not reproduced";
    return res;
  }
  const int cases[][3] = {{1, 1, 0}, {2, 2, 1}, {3, 1, 2}, {3, 3, 0}};
  for (const auto& c : cases) {
    const MixtureFitReport rep = threshold_mixture_check(c[0], c[1], c[2]);
    if (!rep.weight_sum_ok) {
      res.pass = false;
      res.detail = "weights exceed 1 at N=" + std::to_string(c[0]) +
                   ", M=" + std::to_string(c[1]);
      return res;
    }
    if (rep.unrestricted_residual > rep.residual_norm + 1e-12) {
      res.pass = false;
      res.detail = "wider threshold range fits worse at N=" + std::to_string(c[0]) +
                   ", M=" + std::to_string(c[1]);
      return res;
    }
  }
  return res;
}

VerifyGroupResult check_spectrum() {
  VerifyGroupResult res{"spectrum", true,
                        "weights normalized; mean matches the gain law"};
  for (double g : {0.25, 0.7, 1.3}) {
    const GainSpec gain(g);
    const PhotonSpectrum spec = photon_spectrum(gain, 0);
    if (std::fabs(spec.sum() - 1.0) > 1e-12) {
      res.pass = false;
      res.detail = "weights do not sum to 1 at g=" + std::to_string(g);
      return res;
    }
    const double want = 4.0 * std::sinh(g) * std::sinh(g) + 2.0;
    if (std::fabs(mean_total_photons(spec) - want) > 1e-6 * want) {
      res.pass = false;
      res.detail = "mean photon number off at g=" + std::to_string(g);
      return res;
    }
    const PhotonSpectrum direct = photon_spectrum(gain, 3);
    const PhotonSpectrum redone = spec.thresholded(3);
    if (direct.n_max() != redone.n_max()) {
      res.pass = false;
      res.detail = "preselection changes the truncation at g=" + std::to_string(g);
      return res;
    }
    for (int n = 0; n <= direct.n_max(); ++n) {
      if (std::fabs(direct.weight(n) - redone.weight(n)) > 1e-13) {
        res.pass = false;
        res.detail = "preselection routes disagree at g=" + std::to_string(g) +
                     ", N=" + std::to_string(n);
        return res;
      }
    }
  }
  const GainSpec gain(0.8);
  const PhotonSpectrum base = photon_spectrum(gain, 0);
  const BsPreselectedSpectrum keep_all = bs_preselect_spectrum(gain, 0.7, 0);
  for (int n = 0; n <= base.n_max(); ++n) {
    if (std::fabs(keep_all.marginal[static_cast<std::size_t>(n)] - base.weight(n)) >
        1e-12) {
      res.pass = false;
      res.detail = "trivial beamsplitter preselection reshapes the spectrum";
      return res;
    }
  }
  bool threw = false;
  try {
    bs_preselect_spectrum(gain, 1.0, 1);
  } catch (const EmptySupportError&) {
    threw = true;
  }
  if (!threw) {
    res.pass = false;
    res.detail = "lossless beamsplitter cannot reflect a photon, yet kept support";
  }
  return res;
}

}  // namespace

std::vector<std::string> verification_group_names() {
  return {"regions",     "bell",        "antisymmetry", "oracle-chsh",
          "cross-terms", "loss",        "mixture",      "spectrum"};
}

std::vector<VerifyGroupResult> run_verification(const VerifyOptions& options) {
  const std::string& f = options.group_filter;
  bool known = f.empty();
  for (const std::string& name : verification_group_names()) {
    if (f == name) known = true;
  }
  if (!known) {
    throw std::domain_error("unknown verification group: " + f);
  }

  std::vector<VerifyGroupResult> out;
  const auto want = [&f](const char* name) { return f.empty() || f == name; };
  if (want("regions")) out.push_back(check_regions(options));
  if (want("bell")) out.push_back(check_bell());
  if (want("antisymmetry")) out.push_back(check_antisymmetry());
  if (want("oracle-chsh")) out.push_back(check_oracle_chsh());
  if (want("cross-terms")) out.push_back(check_cross_terms());
  if (want("loss")) out.push_back(check_loss());
  if (want("mixture")) out.push_back(check_mixture());
  if (want("spectrum")) out.push_back(check_spectrum());
  return out;
}

}  // namespace mmbell
