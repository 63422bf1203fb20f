/*
 * Copyright 2026 The bellsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "bellsim/detection/detection.hpp"
#include "bellsim/fock/state.hpp"

using namespace bellsim;

TEST_SUITE("state") {

TEST_CASE("vacuum and number states") {
  const auto b = make_basis(3, 3);
  const auto vac = OccupationState::vacuum(b);
  CHECK(vac.norm_squared() == doctest::Approx(1.0));
  const std::array<int, 3> occ{1, 0, 2};
  const auto n = OccupationState::number_state(b, occ);
  CHECK(n.amplitude(occ) == cplx(1.0, 0.0));
  CHECK(expectation(n, number_operator(*b, 2)) == doctest::Approx(2.0));
  CHECK(std::abs(inner_product(vac, n)) == 0.0);
}

TEST_CASE("creation and annihilation") {
  const auto b = make_basis(1, 3);
  const std::array<int, 1> one{1};
  const auto s = apply_creation(OccupationState::number_state(b, one), 0);
  const std::array<int, 1> two{2};
  CHECK(s.amplitude(two).real() == doctest::Approx(std::sqrt(2.0)));
  const auto back = apply_annihilation(s, 0);
  CHECK(back.amplitude(one).real() == doctest::Approx(2.0));
  // pushing |3> past the cutoff is recorded, not renormalized
  const std::array<int, 1> three{3};
  const auto lost = apply_creation(OccupationState::number_state(b, three), 0);
  CHECK(lost.norm_squared() == doctest::Approx(0.0));
  CHECK(lost.truncation_error() == doctest::Approx(4.0));
}

TEST_CASE("coherent synthesis") {
  const auto b = make_basis(2, 16);
  const std::array<cplx, 2> z{cplx(0.6, -0.3), cplx(-0.2, 0.4)};
  const auto s = synthesize_coherent(z, b);
  CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(expectation(s, number_operator(*b, 0)) == doctest::Approx(std::norm(z[0])).epsilon(1e-8));
  const std::array<int, 2> occ{2, 1};
  const cplx expected = std::exp(-(std::norm(z[0]) + std::norm(z[1])) / 2) * z[0] * z[0] / std::sqrt(2.0) * z[1];
  CHECK(std::abs(s.amplitude(occ) - expected) < 1e-14);
}

TEST_CASE("coherent synthesis reports the cutoff it needs") {
  const auto b = make_basis(1, 5);
  const std::array<cplx, 1> z{cplx(2.0, 0.0)};
  int needed = -1;
  try {
    (void)synthesize_coherent(z, b);
  } catch (const TruncationError& e) {
    needed = e.required_cutoff();
    CHECK(e.tail() > 1e-8);
  }
  REQUIRE(needed > 5);
  CHECK(poisson_tail(4.0, needed) <= 1e-8);
  CHECK(poisson_tail(4.0, needed - 1) > 1e-8);
  CHECK_NOTHROW(synthesize_coherent(z, make_basis(1, needed)));
}

TEST_CASE("poisson tail") {
  CHECK(poisson_tail(0.0, 0) == 0.0);
  CHECK(poisson_tail(1.0, 0) == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(poisson_tail(1.0, 1) == doctest::Approx(1.0 - 2.0 * std::exp(-1.0)));
}

TEST_CASE("two-photon state") {
  const auto b = make_basis(4, 2);
  const auto s = two_photon_state(b);
  CHECK(s.norm_squared() == doctest::Approx(1.0));
  const std::array<int, 4> c1001{1, 0, 0, 1}, c1100{1, 1, 0, 0}, c0011{0, 0, 1, 1}, c0110{0, 1, 1, 0};
  CHECK(s.amplitude(c1001).real() == doctest::Approx(0.5));
  CHECK(s.amplitude(c1100).real() == doctest::Approx(-0.5));
  CHECK(s.amplitude(c0011).real() == doctest::Approx(-0.5));
  CHECK(s.amplitude(c0110).real() == doctest::Approx(0.5));
}

TEST_CASE("partial trace of the two-photon state is maximally mixed on one beam") {
  const auto s = two_photon_state(make_basis(4, 2));
  const std::array<int, 2> keep{0, 1};
  const auto rho = partial_trace(s, keep);
  const std::array<std::array<int, 2>, 4> occs{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
  const auto& m = rho.matrix();
  for (const auto& a : occs) {
    for (const auto& c : occs) {
      const auto i = static_cast<Eigen::Index>(rho.basis().index_of(a));
      const auto j = static_cast<Eigen::Index>(rho.basis().index_of(c));
      CHECK(std::abs(m(i, j) - cplx(a == c ? 0.25 : 0.0)) < 1e-14);
    }
  }
  CHECK(rho.purity() == doctest::Approx(0.25));
}

TEST_CASE("partial trace edge cases") {
  const auto s = two_photon_state(make_basis(4, 2));
  CHECK_THROWS_AS(partial_trace(s, std::span<const int>{}), std::invalid_argument);
  const std::array<int, 1> bad{4};
  CHECK_THROWS_AS(partial_trace(s, bad), std::out_of_range);
  const std::array<int, 4> all{0, 1, 2, 3};
  const auto rho = partial_trace(s, all);
  CHECK((rho.matrix() - DensityOperator::from_pure(s).matrix()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("polarizer on a diagonal single photon") {
  const auto b = make_basis(2, 1);
  const std::array<int, 2> x{1, 0}, y{0, 1};
  const auto psi = (OccupationState::number_state(b, x) + OccupationState::number_state(b, y)) * cplx(1.0 / std::sqrt(2.0));
  const auto out = polarizer_apply(DensityOperator::from_pure(psi), 0.0);
  REQUIRE(out.mode_count() == 1);
  Eigen::Matrix2cd expected = Eigen::Matrix2cd::Identity() * 0.5;
  CHECK((out.matrix() - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("density operator validation") {
  const auto b = make_basis(1, 1);
  Eigen::MatrixXcd m(2, 2);
  m << 0.5, cplx(0.1, 0.2), cplx(0.3, 0.0), 0.5;
  CHECK_THROWS_AS(DensityOperator(b, m), std::invalid_argument);
  m << 0.6, 0.0, 0.0, 0.6;
  CHECK_THROWS_AS(DensityOperator(b, m), std::invalid_argument);
  m << 1.5, 0.0, 0.0, -0.5;
  const DensityOperator neg(b, m);
  CHECK(neg.min_eigenvalue() == doctest::Approx(-0.5));
  CHECK_THROWS_AS(neg.check_positive(), Error);
}

TEST_CASE("ensemble to density") {
  const auto b = make_basis(1, 2);
  const std::array<int, 1> zero{0}, one{1};
  const PureEnsemble e({{0.25, OccupationState::number_state(b, zero)}, {0.75, OccupationState::number_state(b, one)}});
  const auto rho = e.to_density();
  CHECK(rho.matrix()(0, 0).real() == doctest::Approx(0.25));
  CHECK(rho.matrix()(1, 1).real() == doctest::Approx(0.75));
  CHECK(expectation(rho, number_operator(*b, 0)) == doctest::Approx(0.75));
  CHECK(expectation(rho, to_dense(number_operator(*b, 0))) == doctest::Approx(0.75));
  CHECK_THROWS_AS(PureEnsemble({{0.5, OccupationState::vacuum(b)}}), std::invalid_argument);
  CHECK_THROWS_AS(PureEnsemble({{-0.5, OccupationState::vacuum(b)}, {1.5, OccupationState::vacuum(b)}}),
                  std::invalid_argument);
}

TEST_CASE("fidelity is phase blind") {
  const auto b = make_basis(2, 2);
  const auto s = two_photon_state(make_basis(4, 2));
  CHECK(fidelity(s, s * cplx(0.0, -3.0)) == doctest::Approx(1.0));
  CHECK_THROWS(fidelity(OccupationState::vacuum(b), OccupationState::vacuum(b) * cplx(0.0)));
}

}
