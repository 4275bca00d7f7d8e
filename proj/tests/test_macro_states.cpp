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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mmbell/macro_states.hpp"

using namespace mmbell;

TEST_CASE("gain specs validate their inputs") {
  CHECK_THROWS_AS(GainSpec(-0.1), std::domain_error);
  CHECK_THROWS_AS(GainSpec(std::nan("")), std::domain_error);
  CHECK_THROWS_AS(GainSpec(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(GainSpec(1.0, 1.5), std::domain_error);

  const GainSpec gain(1.0);
  CHECK(gain.cosh_g == doctest::Approx(std::cosh(1.0)).epsilon(1e-15));
  CHECK(gain.log_tanh == doctest::Approx(std::log(std::tanh(1.0))).epsilon(1e-13));
}

TEST_CASE("component amplitudes follow the gain law") {
  const GainSpec off(0.0);
  CHECK(beta(0, off).to_double() == doctest::Approx(1.0));
  CHECK(beta(3, off).to_double() == 0.0);

  // beta_0 = cosh(g)^-2 at g = 1.
  const GainSpec gain(1.0);
  CHECK(beta(0, gain).to_double() ==
        doctest::Approx(0.4199743416140261).epsilon(1e-14));

  // beta_N^2 = (N+1) tanh^2N / cosh^4, so adjacent ratios are clean.
  const double r = beta(5, gain).to_double() / beta(4, gain).to_double();
  CHECK(r == doctest::Approx(std::sqrt(6.0 / 5.0) * std::tanh(1.0)).epsilon(1e-12));
}

TEST_CASE("squared amplitudes of both branches sum to one exactly") {
  for (int n = 0; n <= 12; ++n) {
    for (Polarization pol : {Polarization::phi, Polarization::phi_perp}) {
      const MacroQubit q = macro_qubit(n, pol);
      CHECK(q.norm2() == Rational(1));
      Rational acc(0);
      for (int k = 0; k <= n; ++k) acc += q.amp2(k);
      CHECK(acc == Rational(1));
    }
  }
}

TEST_CASE("branch occupations interleave odd and even counts") {
  const MacroQubit phi = macro_qubit(3, Polarization::phi);
  const MacroQubit perp = macro_qubit(3, Polarization::phi_perp);
  for (int k = 0; k <= 3; ++k) {
    CHECK(phi.n_phi(k) == 2 * k + 1);
    CHECK(phi.n_phi_perp(k) == 2 * (3 - k));
    CHECK(perp.n_phi(k) == 2 * k);
    CHECK(perp.n_phi_perp(k) == 2 * (3 - k) + 1);
    CHECK(phi.n_phi(k) + phi.n_phi_perp(k) == 7);
  }
  CHECK(MacroQubit::m_squared(3) == Rational(9216));
}

TEST_CASE("known term weights at one pair") {
  const MacroQubit perp = macro_qubit(1, Polarization::phi_perp);
  CHECK(perp.amp2(0) == make_rational(3, 4));
  CHECK(perp.amp2(1) == make_rational(1, 4));
}

TEST_CASE("spectra normalize, truncate by the tail bound, and preselect") {
  CHECK_THROWS_AS(photon_spectrum(GainSpec(0.0), 1), EmptySupportError);

  const PhotonSpectrum off = photon_spectrum(GainSpec(0.0), 0);
  CHECK(off.n_max() == 0);
  CHECK(off.weight(0) == 1.0);
  CHECK(mean_total_photons(off) == 2.0);

  const GainSpec gain(1.0);
  const PhotonSpectrum spec = photon_spectrum(gain, 0);
  CHECK(spec.sum() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(mean_total_photons(spec) ==
        doctest::Approx(7.524391382167263).epsilon(1e-10));

  // Preselecting through the constructor and after the fact agree.
  const PhotonSpectrum direct = photon_spectrum(gain, 4);
  const PhotonSpectrum redone = spec.thresholded(4);
  REQUIRE(direct.n_max() == redone.n_max());
  for (int n = 0; n <= direct.n_max(); ++n) {
    CHECK(direct.weight(n) == doctest::Approx(redone.weight(n)).epsilon(1e-12));
  }
  CHECK(direct.weight(3) == 0.0);
  CHECK(direct.n_threshold() == 4);

  CHECK_THROWS_AS(spec.thresholded(spec.n_max() + 1), EmptySupportError);
  CHECK_THROWS_AS(photon_spectrum(gain, -1), std::domain_error);
}

TEST_CASE("larger gain pushes the mean to the closed form") {
  for (double g : {0.5, 2.0}) {
    const PhotonSpectrum spec = photon_spectrum(GainSpec(g), 0);
    const double want = 4.0 * std::sinh(g) * std::sinh(g) + 2.0;
    CHECK(mean_total_photons(spec) == doctest::Approx(want).epsilon(1e-9));
  }
}
