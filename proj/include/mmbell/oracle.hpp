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

#include <cstddef>
#include <span>
#include <vector>

#include "mmbell/bell.hpp"
#include "mmbell/macro_states.hpp"
#include "mmbell/scalar.hpp"

namespace mmbell {

/// Dense Fock coefficient array over a few bosonic modes plus an optional
/// two-level index, used as an independent brute-force route: states are
/// built ket by ket and evolved by explicit mode rotations, with no reuse of
/// the closed-form region or correlator algebra.
class FockArray {
 public:
  FockArray(std::vector<int> dims, int micro_dim = 1);

  int modes() const { return static_cast<int>(dims_.size()); }
  int dim(int mode) const { return dims_.at(static_cast<std::size_t>(mode)); }
  int micro_dim() const { return micro_dim_; }
  std::size_t size() const { return data_.size(); }

  std::size_t index(std::span<const int> occ, int micro = 0) const;
  double& at(std::span<const int> occ, int micro = 0);
  double at(std::span<const int> occ, int micro = 0) const;

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  /// Stride of a mode in the flat layout; micro index has stride 1.
  std::size_t stride(int mode) const;
  /// Occupation of `mode` encoded at flat position `idx`.
  int occupation(std::size_t idx, int mode) const;
  int micro_of(std::size_t idx) const { return static_cast<int>(idx % micro_dim_); }

  double norm2() const;

 private:
  std::vector<int> dims_;
  int micro_dim_;
  std::vector<std::size_t> strides_;
  std::vector<double> data_;
};

/// In-place exp(theta (a_j^dag a_i - a_i^dag a_j)) via scaled-step Taylor
/// iteration. Conserves n_i + n_j, so arrays sized for the total photon
/// number never clip.
void pair_rotation(FockArray& state, int mode_i, int mode_j, double theta);

/// In-place [[cos, -sin], [sin, cos]] on the two-level index.
void micro_rotation(FockArray& state, double theta);

/// Two-mode array holding the N-pair collective qubit, modes (phi, phi_perp).
FockArray dense_macro_qubit(int n, Polarization pol);

/// (2N+1 photon macro pair) x (one micro photon) singlet component: the
/// phi branch rides micro level 1 with +, the orthogonal branch micro level
/// 0 with -. Modes (phi, phi_perp) sized 2N+2 each.
FockArray dense_singlet_component(int n);

/// <state| threshold(modes 0,1) x diag(+1 on micro 0, -1 on micro 1) |state>.
double joint_threshold_expectation(const FockArray& state, int n_sigma);

/// Correlator from explicit rotations: undo phi_a on the macro pair and
/// phi_b on the micro photon, then read the fixed-basis observables.
double oracle_correlator(int n, int n_sigma, double phi_a, double phi_b);

double oracle_chsh(int n, int n_sigma, const AngleSettings& settings);

/// Overlap <component N| D |component M> for a seeded random diagonal D,
/// after a common random rotation. Identically 0.0 for N != M since the
/// components occupy distinct total photon numbers.
double oracle_cross_term(int n, int m, unsigned long seed);

/// Direct term-by-term expectation of the threshold observable in a
/// collective qubit; equals +/- the distinguishability by branch.
Rational threshold_expectation_q(const MacroQubit& state, int n_sigma);

/// Exact-amplitude Fock array (no micro index); closed under beamsplitting
/// because the amplitudes stay square roots of rationals.
class FockArrayQ {
 public:
  explicit FockArrayQ(std::vector<int> dims);

  int modes() const { return static_cast<int>(dims_.size()); }
  int dim(int mode) const { return dims_.at(static_cast<std::size_t>(mode)); }
  std::size_t size() const { return data_.size(); }

  std::size_t index(std::span<const int> occ) const;
  SqrtRational& at(std::span<const int> occ);
  const SqrtRational& at(std::span<const int> occ) const;
  int occupation(std::size_t idx, int mode) const;

  const std::vector<SqrtRational>& data() const { return data_; }
  std::vector<SqrtRational>& data() { return data_; }

  Rational norm2() const;

 private:
  std::vector<int> dims_;
  std::vector<std::size_t> strides_;
  std::vector<SqrtRational> data_;
};

FockArrayQ dense_macro_qubit_q(int n, Polarization pol);

/// Splits `mode` on a beamsplitter of transmissivity t2, appending the
/// reflected mode last: |n> -> sum_j sqrt(C(n,j) t2^(n-j) (1-t2)^j) |n-j>|j>.
FockArrayQ beamsplit_q(const FockArrayQ& in, int mode, const Rational& t2);

struct LossConditionalQ {
  Rational probability;  // of seeing exactly m reflected photons
  Rational value;        // conditional threshold expectation; 0 when p = 0
};

struct LossConditional {
  double probability = 0.0;
  double value = 0.0;
};

/// Exact loss oracle: beamsplits both modes of the phi_perp-branch qubit,
/// conditions on m photons total in the reflected modes.
LossConditionalQ lossy_threshold_expectation_q(int n, const Rational& t2, int m,
                                               int n_sigma);

/// Same conditioning through floating-point mode rotations of angle
/// acos(sqrt(t2)); cross-validates the exact route.
LossConditional lossy_threshold_expectation(int n, double t2, int m, int n_sigma);

}  // namespace mmbell
