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
#include <numbers>
#include <random>

#include "bellsim/detection/detection.hpp"

using namespace bellsim;

namespace {

constexpr double pi = std::numbers::pi;

const AngleSettings reference_angles{pi / 8, pi / 4, 3 * pi / 8, 0.0};

OccupationState two_photon() { return two_photon_state(make_basis(4, 2)); }

}  // namespace

TEST_SUITE("detection") {

TEST_CASE("vacuum never clicks") {
  const auto vac = OccupationState::vacuum(make_basis(4, 3));
  const auto r = coincidence_rates(vac, 0.3, 1.1);
  CHECK(r.both == 0.0);
  CHECK(r.none == 0.0);
  const auto rep = ch_functional(vac, reference_angles);
  CHECK(rep.f == 0.0);
  CHECK(rep.verdict == Verdict::not_violated);
}

TEST_CASE("two-photon rates") {
  const auto s = two_photon();
  for (double t1 : {0.0, 0.3, 1.2}) {
    for (double t2 : {0.0, 0.7, 2.9}) {
      const auto r = coincidence_rates(s, t1, t2);
      // only |1001> and |0110> put one photon in each beam
      CHECK(r.both == doctest::Approx(0.25 * std::pow(std::sin(t1 + t2), 2)).epsilon(1e-12));
      CHECK(r.first_only == doctest::Approx(0.25));
      CHECK(r.second_only == doctest::Approx(0.25));
      CHECK(r.none == doctest::Approx(0.5));
    }
  }
}

TEST_CASE("two-photon functional at the reference angles") {
  const auto rep = ch_functional(two_photon(), reference_angles);
  CHECK(rep.f == doctest::Approx((std::sqrt(2.0) - 1) / 4).epsilon(1e-12));
  CHECK(rep.p_none_none == doctest::Approx(0.5));
  CHECK(rep.upper_margin < 0);
  CHECK(rep.verdict == Verdict::violated);
  CHECK(rep.error_bar == 0.0);
}

TEST_CASE("pure, ensemble and density paths agree") {
  std::mt19937_64 rng(4);
  const auto s = apply_passive(two_photon(), haar_unitary(4, rng));
  const PureEnsemble e({{0.3, s}, {0.7, two_photon()}});
  const auto rho = e.to_density();
  for (double t1 : {0.1, 0.9}) {
    const double t2 = 2.2;
    const auto a = coincidence_rates(e, t1, t2);
    const auto c = coincidence_rates(rho, t1, t2);
    CHECK(a.both == doctest::Approx(c.both).epsilon(1e-13));
    CHECK(a.first_only == doctest::Approx(c.first_only).epsilon(1e-13));
    CHECK(a.second_only == doctest::Approx(c.second_only).epsilon(1e-13));
    CHECK(a.none == doctest::Approx(c.none).epsilon(1e-13));
    const auto p = coincidence_rates(s, t1, t2);
    const auto d = coincidence_rates(DensityOperator::from_pure(s), t1, t2);
    CHECK(p.both == doctest::Approx(d.both).epsilon(1e-13));
  }
}

TEST_CASE("rates agree with explicit detection operators") {
  // 1 - vacuum projector on the rotated transmitted mode, via the reduced state
  std::mt19937_64 rng(12);
  const auto s = apply_passive(two_photon(), haar_unitary(4, rng));
  const double t1 = 0.4, t2 = 1.3;
  const auto rotated = apply_passive(s, beam_rotation(t1, t2));
  const std::array<int, 2> modes{0, 2};
  const auto rho = partial_trace(rotated, modes);
  const std::array<int, 2> vac{0, 0};
  double q0 = 0, q2 = 0;
  for (std::size_t i = 0; i < rho.basis().size(); ++i) {
    const auto occ = rho.basis().occupation(i);
    const double w = rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    q0 += occ[0] == 0 ? w : 0;
    q2 += occ[1] == 0 ? w : 0;
  }
  const double q02 = rho.matrix()(static_cast<Eigen::Index>(rho.basis().index_of(vac)), 0).real();
  CHECK(coincidence_rates(s, t1, t2).both == doctest::Approx(1 - q0 - q2 + q02).epsilon(1e-13));
  const std::array<int, 1> m0{0};
  CHECK(prob_at_least_one(rotated, m0) == doctest::Approx(1 - q0).epsilon(1e-13));
  CHECK(prob_at_least_one(DensityOperator::from_pure(rotated), m0) == doctest::Approx(1 - q0).epsilon(1e-13));
}

TEST_CASE("polarizer selection") {
  const auto s = two_photon();
  const auto r = coincidence_rates(s, 0.2, 0.9);
  CHECK(coincidence_rate(s, 0.2, 0.9, {true, true}) == r.both);
  CHECK(coincidence_rate(s, 0.2, 0.9, {true, false}) == r.first_only);
  CHECK(coincidence_rate(s, 0.2, 0.9, {false, true}) == r.second_only);
  CHECK(coincidence_rate(s, 0.2, 0.9, {false, false}) == r.none);
}

TEST_CASE("removed polarizer splits into orthogonal settings for single photons") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> angle(0.0, pi);
  const auto s = two_photon();
  for (int i = 0; i < 20; ++i) {
    const double t1 = angle(rng), t2 = angle(rng);
    const auto r = coincidence_rates(s, t1, t2);
    CHECK(r.first_only == doctest::Approx(r.both + coincidence_rates(s, t1, t2 + pi / 2).both).epsilon(1e-12));
    CHECK(r.second_only == doctest::Approx(r.both + coincidence_rates(s, t1 + pi / 2, t2).both).epsilon(1e-12));
  }
}

TEST_CASE("angles are defined modulo pi") {
  const auto s = apply_passive(two_photon(), polarizer_rotation(0.3, 1, 2, 4));
  const auto a = ch_functional(s, {0.1, 0.5, 2.0, 1.0});
  const auto b = ch_functional(s, {0.1 + pi, 0.5 - pi, 2.0 + 3 * pi, 1.0});
  CHECK(a.f == doctest::Approx(b.f).epsilon(1e-12));
  CHECK(AngleSettings{-pi / 4, pi, 0.0, 7.0}.canonical().theta1 == doctest::Approx(3 * pi / 4));
}

TEST_CASE("mirrored second beam flips the second angle") {
  const auto s = apply_passive(two_photon(), polarizer_rotation(0.3, 1, 2, 4));
  const auto a = coincidence_rates(s, 0.4, -0.7);
  const auto b = coincidence_rates(s, 0.4, 0.7, Geometry{true});
  CHECK(a.both == doctest::Approx(b.both).epsilon(1e-13));
}

TEST_CASE("verdict classification") {
  const NumericalPolicy p;
  CHECK(classify(0.0, 1.0, 0.0, p) == Verdict::not_violated);
  CHECK(classify(1e-10, 1.0, 0.0, p) == Verdict::not_violated);
  CHECK(classify(1e-8, 1.0, 0.0, p) == Verdict::violated);
  CHECK(classify(1e-8, 1.0, 1e-7, p) == Verdict::inconclusive);
  CHECK(classify(-1.0 - 1e-8, 1.0, 0.0, p) == Verdict::violated);
  CHECK(classify(-1.0, 1.0, 0.0, p) == Verdict::not_violated);
  CHECK(verdict_name(Verdict::inconclusive) == "inconclusive");
}

TEST_CASE("invalid rate sources are rejected") {
  const RateSource bad{[](double, double) { return CoincidenceRates{0.9, 0.5, 0.5, 0.5}; }, 0.0};
  CHECK_THROWS_AS(ch_functional(bad, reference_angles), Error);
  const RateSource out_of_range{[](double, double) { return CoincidenceRates{0.1, 0.2, 0.2, 1.5}; }, 0.0};
  CHECK_THROWS_AS(ch_functional(out_of_range, reference_angles), Error);
}

TEST_CASE("truncation error widens the verdict band") {
  const auto s = two_photon();
  const OccupationState tagged(s.basis_ptr(), std::vector<cplx>(s.amplitudes().begin(), s.amplitudes().end()), 0.2);
  const auto rep = ch_functional(tagged, reference_angles);
  CHECK(rep.error_bar == doctest::Approx(0.2));
  CHECK(rep.verdict == Verdict::inconclusive);
}

}
