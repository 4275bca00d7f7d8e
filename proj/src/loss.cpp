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

#include "mmbell/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mmbell/combinatorics.hpp"

namespace mmbell {

namespace {

void check_loss_args(int n, int m, int n_sigma) {
  if (n < 0) throw std::domain_error("photon index must be nonnegative");
  if (m < 0 || m > 2 * n + 1) {
    throw std::domain_error("reflected count " + std::to_string(m) +
                            " outside [0, " + std::to_string(2 * n + 1) + "]");
  }
  if (n_sigma < 0) throw std::domain_error("threshold must be nonnegative");
}

// Diagonal of the loss-averaged threshold observable on the (j, 2N+1-j)
// shell, as exact rationals.
std::vector<Rational> averaged_diagonal(int n, int m, int n_sigma) {
  const int total = 2 * n + 1;
  const ThresholdObservable obs{n_sigma, 0.0};
  const BigInt denom = binomial_exact(total, m);
  std::vector<Rational> diag(total + 1);
  for (int j = 0; j <= total; ++j) {
    BigInt acc = 0;
    const int lo = std::max(0, m - (total - j));
    const int hi = std::min(j, m);
    for (int lost = lo; lost <= hi; ++lost) {
      const int o = obs.eigenvalue(j - lost, total - j - (m - lost));
      if (o == 0) continue;
      acc += o * binomial_exact(j, lost) * binomial_exact(total - j, m - lost);
    }
    diag[j] = make_rational(acc, denom);
  }
  return diag;
}

struct NnlsResult {
  std::vector<double> x;
  double residual = 0.0;
};

// Least squares over the passive columns via normal equations. Returns false
// when the system is numerically singular.
bool solve_subproblem(const std::vector<std::vector<double>>& cols,
                      const std::vector<double>& b, const std::vector<int>& active,
                      std::vector<double>& z) {
  const int p = static_cast<int>(active.size());
  std::vector<double> g(static_cast<std::size_t>(p) * p, 0.0);
  std::vector<double> rhs(p, 0.0);
  for (int a = 0; a < p; ++a) {
    for (int c = a; c < p; ++c) {
      double dot = 0.0;
      const auto& ca = cols[active[a]];
      const auto& cc = cols[active[c]];
      for (std::size_t i = 0; i < b.size(); ++i) dot += ca[i] * cc[i];
      g[a * p + c] = dot;
      g[c * p + a] = dot;
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) dot += cols[active[a]][i] * b[i];
    rhs[a] = dot;
  }
  // Gaussian elimination with partial pivoting.
  std::vector<int> perm(p);
  for (int i = 0; i < p; ++i) perm[i] = i;
  for (int col = 0; col < p; ++col) {
    int piv = col;
    for (int r = col + 1; r < p; ++r) {
      if (std::fabs(g[r * p + col]) > std::fabs(g[piv * p + col])) piv = r;
    }
    if (std::fabs(g[piv * p + col]) < 1e-12) return false;
    if (piv != col) {
      for (int c = 0; c < p; ++c) std::swap(g[piv * p + c], g[col * p + c]);
      std::swap(rhs[piv], rhs[col]);
    }
    for (int r = col + 1; r < p; ++r) {
      const double f = g[r * p + col] / g[col * p + col];
      if (f == 0.0) continue;
      for (int c = col; c < p; ++c) g[r * p + c] -= f * g[col * p + c];
      rhs[r] -= f * rhs[col];
    }
  }
  z.assign(p, 0.0);
  for (int r = p - 1; r >= 0; --r) {
    double s = rhs[r];
    for (int c = r + 1; c < p; ++c) s -= g[r * p + c] * z[c];
    z[r] = s / g[r * p + r];
  }
  return true;
}

// Lawson-Hanson active set iteration; cols hold one candidate per entry.
NnlsResult nnls(const std::vector<std::vector<double>>& cols,
                const std::vector<double>& b) {
  const int ncols = static_cast<int>(cols.size());
  NnlsResult out;
  out.x.assign(ncols, 0.0);

  double bnorm = 0.0;
  for (double v : b) bnorm = std::max(bnorm, std::fabs(v));
  const double tol = 1e-10 * std::max(1.0, bnorm);

  std::vector<bool> in_active(ncols, false);
  std::vector<bool> barred(ncols, false);
  std::vector<int> active;
  std::vector<double> resid = b;
  std::vector<double> z;

  const int outer_cap = 3 * ncols + 10;
  for (int outer = 0; outer < outer_cap; ++outer) {
    int best = -1;
    double best_w = tol;
    for (int j = 0; j < ncols; ++j) {
      if (in_active[j] || barred[j]) continue;
      double w = 0.0;
      for (std::size_t i = 0; i < b.size(); ++i) w += cols[j][i] * resid[i];
      if (w > best_w) {
        best_w = w;
        best = j;
      }
    }
    if (best < 0) break;
    active.push_back(best);
    in_active[best] = true;

    for (int inner = 0; inner <= ncols; ++inner) {
      if (!solve_subproblem(cols, b, active, z)) {
        // Degenerate candidate; drop the newest column for good.
        in_active[active.back()] = false;
        barred[active.back()] = true;
        active.pop_back();
        break;
      }
      const bool feasible =
          std::all_of(z.begin(), z.end(), [](double v) { return v > 0.0; });
      if (feasible) {
        for (std::size_t a = 0; a < active.size(); ++a) out.x[active[a]] = z[a];
        break;
      }
      double alpha = 1.0;
      for (std::size_t a = 0; a < active.size(); ++a) {
        if (z[a] <= 0.0) {
          const double xa = out.x[active[a]];
          alpha = std::min(alpha, xa / (xa - z[a]));
        }
      }
      for (std::size_t a = 0; a < active.size(); ++a) {
        out.x[active[a]] += alpha * (z[a] - out.x[active[a]]);
      }
      std::vector<int> keep;
      for (int j : active) {
        if (out.x[j] > 1e-12) {
          keep.push_back(j);
        } else {
          out.x[j] = 0.0;
          in_active[j] = false;
        }
      }
      active = keep;
      if (active.empty()) break;
    }

    for (std::size_t i = 0; i < b.size(); ++i) {
      double ax = 0.0;
      for (int j : active) ax += cols[j][i] * out.x[j];
      resid[i] = b[i] - ax;
    }
  }

  double rss = 0.0;
  for (double v : resid) rss += v * v;
  out.residual = std::sqrt(rss);
  return out;
}

std::vector<std::vector<double>> threshold_columns(int n, int lo, int hi) {
  const int total = 2 * n + 1;
  std::vector<std::vector<double>> cols;
  cols.reserve(hi - lo + 1);
  for (int t = lo; t <= hi; ++t) {
    const ThresholdObservable obs{t, 0.0};
    std::vector<double> col(total + 1);
    for (int j = 0; j <= total; ++j) {
      col[j] = static_cast<double>(obs.eigenvalue(j, total - j));
    }
    cols.push_back(std::move(col));
  }
  return cols;
}

}  // namespace

Rational loss_pattern_weight(int n, int m) {
  if (m < 0 || n < 0 || n > m) {
    throw std::domain_error("loss pattern requires 0 <= n <= M");
  }
  BigInt den = factorial_exact(static_cast<unsigned long>(n)) *
               factorial_exact(static_cast<unsigned long>(m - n));
  return make_rational(BigInt(1), den);
}

std::vector<Rational> reflected_count_distribution(int n, const Rational& t2) {
  if (n < 0) throw std::domain_error("photon index must be nonnegative");
  if (t2 < 0 || t2 > 1) {
    throw std::domain_error("transmissivity^2 outside [0, 1]");
  }
  const int total = 2 * n + 1;
  const Rational r2 = Rational(1) - t2;
  std::vector<Rational> pmf(total + 1);
  for (int m = 0; m <= total; ++m) {
    pmf[m] = Rational(binomial_exact(total, m)) *
             rational_pow(r2, static_cast<unsigned long>(m)) *
             rational_pow(t2, static_cast<unsigned long>(total - m));
  }
  return pmf;
}

std::vector<double> reflected_count_distribution(int n, double t2) {
  if (n < 0) throw std::domain_error("photon index must be nonnegative");
  if (!std::isfinite(t2) || t2 < 0.0 || t2 > 1.0) {
    throw std::domain_error("transmissivity^2 outside [0, 1]");
  }
  const int total = 2 * n + 1;
  std::vector<double> pmf(total + 1, 0.0);
  if (t2 == 1.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (t2 == 0.0) {
    pmf[total] = 1.0;
    return pmf;
  }
  const double log_r2 = std::log1p(-t2);
  const double log_t2 = std::log(t2);
  for (int m = 0; m <= total; ++m) {
    pmf[m] = std::exp(log_binomial(total, m) + m * log_r2 + (total - m) * log_t2);
  }
  return pmf;
}

Scalar lossy_distinguishability(int n, int m, int n_sigma, NumericMode mode) {
  check_loss_args(n, m, n_sigma);
  const int total = 2 * n + 1;
  const ThresholdObservable obs{n_sigma, 0.0};

  if (mode == NumericMode::exact) {
    BigInt acc = 0;
    for (int k = 0; k <= n; ++k) {
      const BigInt bin = binomial_exact(n, k);
      const BigInt num_k =
          bin * bin * factorial_exact(static_cast<unsigned long>(2 * k)) *
          factorial_exact(static_cast<unsigned long>(2 * (n - k) + 1));
      const int lo = std::max(0, m - (total - 2 * k));
      const int hi = std::min(2 * k, m);
      BigInt inner = 0;
      for (int lost = lo; lost <= hi; ++lost) {
        const int o = obs.eigenvalue(2 * k - lost, total - 2 * k - (m - lost));
        if (o == 0) continue;
        inner +=
            o * binomial_exact(2 * k, lost) * binomial_exact(total - 2 * k, m - lost);
      }
      acc += num_k * inner;
    }
    const BigInt den =
        MacroQubit::m_squared(n).get_num() * binomial_exact(total, m);
    return Scalar(make_rational(acc, den));
  }

  const double lm2 = n * std::log(4.0) + log_factorial(n) + log_factorial(n + 1);
  const double lden = lm2 + log_binomial(total, m);
  std::vector<LogValue> terms;
  for (int k = 0; k <= n; ++k) {
    const double lnum_k = 2.0 * log_binomial(n, k) + log_factorial(2 * k) +
                          log_factorial(2 * (n - k) + 1);
    const int lo = std::max(0, m - (total - 2 * k));
    const int hi = std::min(2 * k, m);
    for (int lost = lo; lost <= hi; ++lost) {
      const int o = obs.eigenvalue(2 * k - lost, total - 2 * k - (m - lost));
      if (o == 0) continue;
      LogValue term;
      term.sign = o;
      term.log_mag = lnum_k + log_binomial(2 * k, lost) +
                     log_binomial(total - 2 * k, m - lost) - lden;
      terms.push_back(term);
    }
  }
  return Scalar(signed_log_sum(terms));
}

MixtureFitReport threshold_mixture_check(int n, int m, int n_sigma) {
  check_loss_args(n, m, n_sigma);
  const int total = 2 * n + 1;

  MixtureFitReport report;
  report.n = n;
  report.m = m;
  report.n_sigma = n_sigma;
  report.range_lo = std::clamp(std::min(n_sigma, m), 0, total);
  report.range_hi = std::clamp(m + n_sigma, 0, total);

  const std::vector<Rational> diag = averaged_diagonal(n, m, n_sigma);
  std::vector<double> b(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) b[i] = diag[i].get_d();

  const NnlsResult fit =
      nnls(threshold_columns(n, report.range_lo, report.range_hi), b);
  report.weights = fit.x;
  report.residual_norm = fit.residual;
  for (double w : report.weights) report.weight_sum += w;
  report.weight_sum_ok = report.weight_sum <= 1.0 + 1e-9;

  report.unrestricted_residual = nnls(threshold_columns(n, 0, total), b).residual;
  return report;
}

BsPreselectedSpectrum bs_preselect_spectrum(const GainSpec& gain, double t2,
                                            int k_th) {
  if (!std::isfinite(t2) || t2 < 0.0 || t2 > 1.0) {
    throw std::domain_error("transmissivity^2 outside [0, 1]");
  }
  if (k_th < 0) throw std::domain_error("preselection count must be nonnegative");

  const PhotonSpectrum base = photon_spectrum(gain, 0);
  BsPreselectedSpectrum out;
  out.k_th = k_th;
  out.t2 = t2;
  out.marginal.assign(base.n_max() + 1, 0.0);

  std::vector<std::vector<double>> pmfs(base.n_max() + 1);
  double norm = 0.0;
  for (int n = 0; n <= base.n_max(); ++n) {
    const double w = base.weight(n);
    if (w <= 0.0 || k_th > 2 * n + 1) continue;
    pmfs[n] = reflected_count_distribution(n, t2);
    double survive = 0.0;
    for (int m = k_th; m <= 2 * n + 1; ++m) survive += pmfs[n][m];
    out.marginal[n] = w * survive;
    norm += w * survive;
  }
  if (norm <= 0.0) {
    throw EmptySupportError("preselection removed every spectral component");
  }
  for (double& w : out.marginal) w /= norm;

  for (int n = 0; n <= base.n_max(); ++n) {
    if (pmfs[n].empty()) continue;
    const double w = base.weight(n);
    for (int m = k_th; m <= 2 * n + 1; ++m) {
      const double joint = w * pmfs[n][m] / norm;
      if (joint <= 0.0) continue;
      out.joint.push_back({n, m, joint});
    }
  }
  return out;
}

std::vector<BsConvergenceRow> bs_convergence_report(const GainSpec& gain, double t2,
                                                    int k_th_max) {
  if (k_th_max < 0) throw std::domain_error("preselection count must be nonnegative");
  const PhotonSpectrum base = photon_spectrum(gain, 0);
  std::vector<BsConvergenceRow> rows;
  for (int k = 0; k <= k_th_max; ++k) {
    BsPreselectedSpectrum spec;
    try {
      spec = bs_preselect_spectrum(gain, t2, k);
    } catch (const EmptySupportError&) {
      break;
    }
    BsConvergenceRow row;
    row.k_th = k;
    row.tv_distance = 2.0;
    for (int nth = 0; nth <= base.n_max(); ++nth) {
      const PhotonSpectrum cand = base.thresholded(nth);
      double tv = 0.0;
      for (int i = 0; i <= base.n_max(); ++i) {
        tv += std::fabs(spec.marginal[i] - cand.weight(i));
      }
      tv *= 0.5;
      if (tv < row.tv_distance) {
        row.tv_distance = tv;
        row.best_n_th = nth;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mmbell
