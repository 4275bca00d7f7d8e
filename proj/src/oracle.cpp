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

#include "mmbell/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include "mmbell/combinatorics.hpp"

namespace mmbell {

namespace {

std::vector<std::size_t> make_strides(const std::vector<int>& dims, int micro_dim) {
  std::vector<std::size_t> strides(dims.size());
  std::size_t acc = static_cast<std::size_t>(micro_dim);
  for (std::size_t k = dims.size(); k-- > 0;) {
    strides[k] = acc;
    acc *= static_cast<std::size_t>(dims[k]);
  }
  return strides;
}

void check_dims(const std::vector<int>& dims) {
  if (dims.empty()) throw std::domain_error("Fock array needs at least one mode");
  for (int d : dims) {
    if (d < 1) throw std::domain_error("Fock mode dimension must be positive");
  }
}

}  // namespace

FockArray::FockArray(std::vector<int> dims, int micro_dim)
    : dims_(std::move(dims)), micro_dim_(micro_dim) {
  check_dims(dims_);
  if (micro_dim_ != 1 && micro_dim_ != 2) {
    throw std::domain_error("two-level index dimension must be 1 or 2");
  }
  strides_ = make_strides(dims_, micro_dim_);
  data_.assign(strides_[0] * static_cast<std::size_t>(dims_[0]), 0.0);
}

std::size_t FockArray::index(std::span<const int> occ, int micro) const {
  if (occ.size() != dims_.size()) {
    throw std::out_of_range("occupation list length mismatch");
  }
  if (micro < 0 || micro >= micro_dim_) {
    throw std::out_of_range("two-level index out of range");
  }
  std::size_t idx = static_cast<std::size_t>(micro);
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (occ[k] < 0 || occ[k] >= dims_[k]) {
      throw std::out_of_range("occupation out of range");
    }
    idx += static_cast<std::size_t>(occ[k]) * strides_[k];
  }
  return idx;
}

double& FockArray::at(std::span<const int> occ, int micro) {
  return data_[index(occ, micro)];
}

double FockArray::at(std::span<const int> occ, int micro) const {
  return data_[index(occ, micro)];
}

std::size_t FockArray::stride(int mode) const {
  return strides_.at(static_cast<std::size_t>(mode));
}

int FockArray::occupation(std::size_t idx, int mode) const {
  const std::size_t m = static_cast<std::size_t>(mode);
  return static_cast<int>((idx / strides_[m]) % static_cast<std::size_t>(dims_[m]));
}

double FockArray::norm2() const {
  double acc = 0.0;
  for (double v : data_) acc += v * v;
  return acc;
}

void pair_rotation(FockArray& state, int mode_i, int mode_j, double theta) {
  if (mode_i == mode_j) throw std::domain_error("rotation needs distinct modes");
  if (!std::isfinite(theta)) throw std::domain_error("rotation angle must be finite");
  if (theta == 0.0) return;

  const std::size_t si = state.stride(mode_i);
  const std::size_t sj = state.stride(mode_j);
  const int di = state.dim(mode_i);
  const int dj = state.dim(mode_j);

  // Halve the step until theta * ||G|| is small, then apply the Taylor
  // series of each sub-step; the truncation error compounds below 1e-14.
  const double coupling = static_cast<double>(std::max(di, dj));
  double step = theta;
  long repeats = 1;
  while (std::fabs(step) * coupling > 0.25) {
    step *= 0.5;
    repeats *= 2;
    if (repeats > (1L << 24)) {
      throw std::runtime_error("rotation step underflow");
    }
  }

  std::vector<double>& x = state.data();
  const std::size_t n = x.size();
  std::vector<double> term(n), next(n);

  for (long r = 0; r < repeats; ++r) {
    term = x;
    for (int t = 1; t <= 80; ++t) {
      const double c = step / static_cast<double>(t);
      double tmax = 0.0;
      for (std::size_t idx = 0; idx < n; ++idx) {
        const int oi = state.occupation(idx, mode_i);
        const int oj = state.occupation(idx, mode_j);
        double v = 0.0;
        if (oi + 1 < di && oj >= 1) {
          v += std::sqrt(static_cast<double>((oi + 1) * oj)) * term[idx + si - sj];
        }
        if (oi >= 1 && oj + 1 < dj) {
          v -= std::sqrt(static_cast<double>(oi * (oj + 1))) * term[idx - si + sj];
        }
        next[idx] = c * v;
      }
      term.swap(next);
      double xmax = 0.0;
      for (std::size_t idx = 0; idx < n; ++idx) {
        x[idx] += term[idx];
        tmax = std::max(tmax, std::fabs(term[idx]));
        xmax = std::max(xmax, std::fabs(x[idx]));
      }
      if (tmax <= 1e-22 * (xmax + 1e-300)) break;
    }
  }
}

void micro_rotation(FockArray& state, double theta) {
  if (state.micro_dim() != 2) {
    throw std::domain_error("state has no two-level index");
  }
  if (!std::isfinite(theta)) throw std::domain_error("rotation angle must be finite");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  std::vector<double>& x = state.data();
  for (std::size_t idx = 0; idx < x.size(); idx += 2) {
    const double a = x[idx];
    const double b = x[idx + 1];
    x[idx] = c * a - s * b;
    x[idx + 1] = s * a + c * b;
  }
}

FockArray dense_macro_qubit(int n, Polarization pol) {
  const int cut = 2 * n + 2;
  FockArray out({cut, cut}, 1);
  const MacroQubit q = macro_qubit(n, pol);
  for (int k = 0; k <= n; ++k) {
    out.at(std::array{q.n_phi(k), q.n_phi_perp(k)}) = q.amp_double(k);
  }
  return out;
}

namespace {

FockArray singlet_component_in(int n, int cut) {
  FockArray out({cut, cut}, 2);
  const MacroQubit phi = macro_qubit(n, Polarization::phi);
  const MacroQubit perp = macro_qubit(n, Polarization::phi_perp);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int k = 0; k <= n; ++k) {
    out.at(std::array{phi.n_phi(k), phi.n_phi_perp(k)}, 1) =
        inv_sqrt2 * phi.amp_double(k);
    out.at(std::array{perp.n_phi(k), perp.n_phi_perp(k)}, 0) =
        -inv_sqrt2 * perp.amp_double(k);
  }
  return out;
}

}  // namespace

FockArray dense_singlet_component(int n) {
  return singlet_component_in(n, 2 * n + 2);
}

double joint_threshold_expectation(const FockArray& state, int n_sigma) {
  if (state.modes() != 2 || state.micro_dim() != 2) {
    throw std::domain_error("expected a two-mode state with a two-level index");
  }
  const ThresholdObservable obs{n_sigma, 0.0};
  const std::vector<double>& x = state.data();
  double acc = 0.0;
  for (std::size_t idx = 0; idx < x.size(); ++idx) {
    if (x[idx] == 0.0) continue;
    const int o = obs.eigenvalue(state.occupation(idx, 0), state.occupation(idx, 1));
    if (o == 0) continue;
    const int s = state.micro_of(idx) == 0 ? 1 : -1;
    acc += x[idx] * x[idx] * o * s;
  }
  return acc;
}

double oracle_correlator(int n, int n_sigma, double phi_a, double phi_b) {
  FockArray state = dense_singlet_component(n);
  pair_rotation(state, 0, 1, -phi_a);
  micro_rotation(state, -phi_b);
  return joint_threshold_expectation(state, n_sigma);
}

double oracle_chsh(int n, int n_sigma, const AngleSettings& settings) {
  return oracle_correlator(n, n_sigma, settings.phi_a, settings.phi_b) +
         oracle_correlator(n, n_sigma, settings.phi_a, settings.phi_b_prime) +
         oracle_correlator(n, n_sigma, settings.phi_a_prime, settings.phi_b) -
         oracle_correlator(n, n_sigma, settings.phi_a_prime, settings.phi_b_prime);
}

double oracle_cross_term(int n, int m, unsigned long seed) {
  if (n < 0 || m < 0) throw std::domain_error("photon index must be nonnegative");
  const int cut = 2 * std::max(n, m) + 2;
  FockArray a = singlet_component_in(n, cut);
  FockArray b = singlet_component_in(m, cut);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-3.1, 3.1);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);

  const double theta_macro = angle(rng);
  const double theta_micro = angle(rng);
  pair_rotation(a, 0, 1, theta_macro);
  pair_rotation(b, 0, 1, theta_macro);
  micro_rotation(a, theta_micro);
  micro_rotation(b, theta_micro);

  double acc = 0.0;
  for (std::size_t idx = 0; idx < a.size(); ++idx) {
    acc += a.data()[idx] * entry(rng) * b.data()[idx];
  }
  return acc;
}

Rational threshold_expectation_q(const MacroQubit& state, int n_sigma) {
  const ThresholdObservable obs{n_sigma, 0.0};
  Rational acc(0);
  for (int k = 0; k <= state.n(); ++k) {
    const int o = obs.eigenvalue(state.n_phi(k), state.n_phi_perp(k));
    if (o == 0) continue;
    acc += o * state.amp2(k);
  }
  return acc;
}

FockArrayQ::FockArrayQ(std::vector<int> dims) : dims_(std::move(dims)) {
  check_dims(dims_);
  strides_ = make_strides(dims_, 1);
  data_.assign(strides_[0] * static_cast<std::size_t>(dims_[0]), SqrtRational::zero());
}

std::size_t FockArrayQ::index(std::span<const int> occ) const {
  if (occ.size() != dims_.size()) {
    throw std::out_of_range("occupation list length mismatch");
  }
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (occ[k] < 0 || occ[k] >= dims_[k]) {
      throw std::out_of_range("occupation out of range");
    }
    idx += static_cast<std::size_t>(occ[k]) * strides_[k];
  }
  return idx;
}

SqrtRational& FockArrayQ::at(std::span<const int> occ) { return data_[index(occ)]; }

const SqrtRational& FockArrayQ::at(std::span<const int> occ) const {
  return data_[index(occ)];
}

int FockArrayQ::occupation(std::size_t idx, int mode) const {
  const std::size_t m = static_cast<std::size_t>(mode);
  return static_cast<int>((idx / strides_[m]) % static_cast<std::size_t>(dims_[m]));
}

Rational FockArrayQ::norm2() const {
  Rational acc(0);
  for (const SqrtRational& v : data_) acc += v.norm2();
  return acc;
}

FockArrayQ dense_macro_qubit_q(int n, Polarization pol) {
  const int cut = 2 * n + 2;
  FockArrayQ out({cut, cut});
  const MacroQubit q = macro_qubit(n, pol);
  for (int k = 0; k <= n; ++k) {
    out.at(std::array{q.n_phi(k), q.n_phi_perp(k)}) = q.amp(k);
  }
  return out;
}

FockArrayQ beamsplit_q(const FockArrayQ& in, int mode, const Rational& t2) {
  if (mode < 0 || mode >= in.modes()) throw std::domain_error("no such mode");
  if (t2 < 0 || t2 > 1) throw std::domain_error("transmissivity^2 outside [0, 1]");
  const Rational r2 = Rational(1) - t2;

  std::vector<int> dims;
  for (int k = 0; k < in.modes(); ++k) dims.push_back(in.dim(k));
  dims.push_back(in.dim(mode));
  FockArrayQ out(std::move(dims));

  std::vector<int> occ(static_cast<std::size_t>(out.modes()), 0);
  for (std::size_t idx = 0; idx < in.size(); ++idx) {
    const SqrtRational& amp = in.data()[idx];
    if (amp.is_zero()) continue;
    for (int k = 0; k < in.modes(); ++k) occ[static_cast<std::size_t>(k)] = in.occupation(idx, k);
    const int nph = occ[static_cast<std::size_t>(mode)];
    for (int j = 0; j <= nph; ++j) {
      const Rational split = Rational(binomial_exact(nph, j)) *
                             rational_pow(t2, static_cast<unsigned long>(nph - j)) *
                             rational_pow(r2, static_cast<unsigned long>(j));
      if (split == 0) continue;
      occ[static_cast<std::size_t>(mode)] = nph - j;
      occ.back() = j;
      out.at(occ) = amp * SqrtRational::from_square(1, split);
    }
    occ[static_cast<std::size_t>(mode)] = nph;
    occ.back() = 0;
  }
  return out;
}

LossConditionalQ lossy_threshold_expectation_q(int n, const Rational& t2, int m,
                                               int n_sigma) {
  if (n < 0) throw std::domain_error("photon index must be nonnegative");
  if (m < 0 || m > 2 * n + 1) {
    throw std::domain_error("reflected count outside [0, 2N+1]");
  }
  FockArrayQ split = beamsplit_q(dense_macro_qubit_q(n, Polarization::phi_perp), 0, t2);
  split = beamsplit_q(split, 1, t2);
  // Modes now (phi, phi_perp, refl_phi, refl_perp).
  const ThresholdObservable obs{n_sigma, 0.0};
  LossConditionalQ out{Rational(0), Rational(0)};
  Rational signed_acc(0);
  for (std::size_t idx = 0; idx < split.size(); ++idx) {
    const SqrtRational& amp = split.data()[idx];
    if (amp.is_zero()) continue;
    if (split.occupation(idx, 2) + split.occupation(idx, 3) != m) continue;
    const Rational w = amp.norm2();
    out.probability += w;
    const int o = obs.eigenvalue(split.occupation(idx, 0), split.occupation(idx, 1));
    if (o != 0) signed_acc += o * w;
  }
  if (out.probability != 0) out.value = signed_acc / out.probability;
  return out;
}

LossConditional lossy_threshold_expectation(int n, double t2, int m, int n_sigma) {
  if (n < 0) throw std::domain_error("photon index must be nonnegative");
  if (m < 0 || m > 2 * n + 1) {
    throw std::domain_error("reflected count outside [0, 2N+1]");
  }
  if (!std::isfinite(t2) || t2 < 0.0 || t2 > 1.0) {
    throw std::domain_error("transmissivity^2 outside [0, 1]");
  }
  const int cut = 2 * n + 2;
  // Modes (phi, refl_phi, phi_perp, refl_perp).
  FockArray state({cut, cut, cut, cut}, 1);
  const MacroQubit q = macro_qubit(n, Polarization::phi_perp);
  for (int k = 0; k <= n; ++k) {
    state.at(std::array{q.n_phi(k), 0, q.n_phi_perp(k), 0}) = q.amp_double(k);
  }
  const double theta = std::acos(std::clamp(std::sqrt(t2), 0.0, 1.0));
  pair_rotation(state, 0, 1, theta);
  pair_rotation(state, 2, 3, theta);

  const ThresholdObservable obs{n_sigma, 0.0};
  LossConditional out;
  double signed_acc = 0.0;
  for (std::size_t idx = 0; idx < state.size(); ++idx) {
    const double amp = state.data()[idx];
    if (amp == 0.0) continue;
    if (state.occupation(idx, 1) + state.occupation(idx, 3) != m) continue;
    const double w = amp * amp;
    out.probability += w;
    const int o = obs.eigenvalue(state.occupation(idx, 0), state.occupation(idx, 2));
    if (o != 0) signed_acc += o * w;
  }
  if (out.probability > 0.0) out.value = signed_acc / out.probability;
  return out;
}

}  // namespace mmbell
