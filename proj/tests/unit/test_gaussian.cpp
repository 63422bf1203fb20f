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

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "bellsim/gaussian/gaussian.hpp"

using namespace bellsim;

namespace {

constexpr double pi = std::numbers::pi;

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_SUITE("gaussian") {

TEST_CASE("squeezed thermal construction") {
  CHECK(max_abs(build_squeezed_thermal({0, 0, 1}).g() - Eigen::MatrixXd::Identity(8, 8)) < 1e-15);
  const auto hot = build_squeezed_thermal({0, 0, 0.6});
  CHECK(max_abs(hot.g() - 0.6 * Eigen::MatrixXd::Identity(8, 8)) < 1e-15);
  CHECK(max_abs(hot.variance() - Eigen::MatrixXd::Identity(8, 8) / 1.2) < 1e-15);
  CHECK_THROWS_AS(build_squeezed_thermal({0, 0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_squeezed_thermal({0, 0, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS(build_squeezed_thermal({NAN, 0, 1.0}), std::invalid_argument);
}

TEST_CASE("variance spectrum") {
  const auto g = build_squeezed_thermal({0.3, 0.1, 0.8});
  std::vector<double> expected;
  for (double x : {0.6, -0.6, 0.2, -0.2}) {
    expected.push_back(std::exp(x) / 1.6);
    expected.push_back(std::exp(x) / 1.6);
  }
  std::sort(expected.begin(), expected.end());
  const auto got = sorted_eigenvalues(variance_matrix(g));
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-13));
  }
}

TEST_CASE("squeezing check") {
  const auto vac = is_squeezed(GaussianState::vacuum(4));
  CHECK_FALSE(vac.squeezed);
  CHECK(vac.min_eigenvalue == doctest::Approx(0.5).epsilon(1e-15));
  const auto sq = is_squeezed(build_squeezed_thermal({0.5, 0, 1}));
  CHECK(sq.squeezed);
  CHECK(sq.min_eigenvalue == doctest::Approx(std::exp(-1.0) / 2).epsilon(1e-12));
  const auto th = is_squeezed(build_squeezed_thermal({0, 0, 0.5}));
  CHECK_FALSE(th.squeezed);
  CHECK(th.min_eigenvalue == doctest::Approx(1.0));
}

TEST_CASE("state validation") {
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2, 2);
  g(0, 1) = 0.3;
  CHECK_THROWS_AS(GaussianState{g}, std::invalid_argument);
  CHECK_THROWS_AS(GaussianState{-Eigen::MatrixXd::Identity(2, 2)}, std::invalid_argument);
  // V = I/4 is below the vacuum noise
  CHECK_THROWS_AS(GaussianState{2.0 * Eigen::MatrixXd::Identity(2, 2)}, std::invalid_argument);
  CHECK_THROWS_AS(GaussianState{Eigen::MatrixXd::Identity(3, 3)}, DimensionError);
  CHECK(uncertainty_min_eigenvalue(GaussianState::vacuum(2)) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(GaussianState::thermal(1, 0.0), std::invalid_argument);
}

TEST_CASE("symplectic matrices") {
  CHECK_THROWS_AS(SymplecticMatrix{2.0 * Eigen::MatrixXd::Identity(4, 4)}, std::invalid_argument);
  const auto s = squeezing_symplectic(0.4, -0.2);
  CHECK(max_abs((s * s.inverse()).matrix() - Eigen::MatrixXd::Identity(8, 8)) < 1e-14);
  const auto u = entangling_symplectic();
  CHECK(max_abs(u.matrix() * u.matrix().transpose() - Eigen::MatrixXd::Identity(8, 8)) < 1e-15);
}

TEST_CASE("embedding passive unitaries") {
  CHECK(max_abs(embed_passive(PassiveUnitary::identity(4)).matrix() - Eigen::MatrixXd::Identity(8, 8)) == 0.0);
  const auto r = embed_passive(polarizer_rotation(0.3, 0, 1, 4)).matrix();
  CHECK(r(0, 0) == doctest::Approx(std::cos(0.3)));
  CHECK(r(0, 1) == doctest::Approx(-std::sin(0.3)));
  CHECK(r(4, 4) == doctest::Approx(std::cos(0.3)));
  CHECK(r(4, 5) == doctest::Approx(-std::sin(0.3)));
  CHECK(max_abs(r.topRightCorner(4, 4)) == 0.0);
  CHECK(max_abs(embed_passive(maximal_entangler()).matrix() - entangling_symplectic().matrix()) < 1e-15);

  std::mt19937_64 rng(2);
  const auto h = haar_unitary(4, rng);
  const auto m = embed_passive(h).matrix();
  CHECK(max_abs(m * m.transpose() - Eigen::MatrixXd::Identity(8, 8)) < 1e-12);
  CHECK((passive_from_symplectic(embed_passive(h)).matrix() - h.matrix()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(passive_from_symplectic(squeezing_symplectic(0.3, 0.0)), std::invalid_argument);
}

TEST_CASE("symplectic action") {
  const auto g = build_squeezed_thermal({0.4, 0.2, 0.9});
  CHECK(max_abs(apply_symplectic(g, SymplecticMatrix(Eigen::MatrixXd::Identity(8, 8))).g() - g.g()) < 1e-14);
  std::mt19937_64 rng(6);
  const auto th = GaussianState::thermal(4, 0.7);
  CHECK(max_abs(apply_symplectic(th, embed_passive(haar_unitary(4, rng))).g() - th.g()) < 1e-13);
  // thermal -> squeeze -> entangle, one step at a time
  const auto spec = SqueezedThermalSpec{0.4, -0.3, 0.85};
  const auto step = apply_symplectic(
      apply_symplectic(GaussianState::thermal(4, spec.kappa), squeezing_symplectic(spec.u, spec.v).inverse()),
      entangling_symplectic().inverse());
  CHECK(max_abs(step.g() - build_squeezed_thermal(spec).g()) <= 1e-12);
  CHECK_THROWS_AS(apply_symplectic(GaussianState::vacuum(2), squeezing_symplectic(0.1, 0.1)), DimensionError);
}

TEST_CASE("passive maps preserve uncertainty and squeezing") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> sq(-1.0, 1.0), kap(0.3, 1.0);
  for (int i = 0; i < 40; ++i) {
    const auto g = build_squeezed_thermal({sq(rng), sq(rng), kap(rng)});
    const auto t = apply_symplectic(g, embed_passive(haar_unitary(4, rng)));
    CHECK(uncertainty_min_eigenvalue(t) >= -1e-9);
    CHECK(std::abs(is_squeezed(t).min_eigenvalue - is_squeezed(g).min_eigenvalue) <= 1e-10);
  }
}

TEST_CASE("vacuum probabilities") {
  const std::array<int, 1> m0{0};
  const std::array<int, 3> m013{0, 1, 3};
  CHECK(vacuum_probability(GaussianState::vacuum(4), m013) == doctest::Approx(1.0).epsilon(1e-15));
  for (double u : {0.25, 0.5, 1.0}) {
    Eigen::MatrixXd v(2, 2);
    v << std::exp(-2 * u) / 2, 0, 0, std::exp(2 * u) / 2;
    CHECK(std::abs(vacuum_probability(GaussianState::from_variance(v), m0) - 1 / std::cosh(u)) <= 1e-12);
  }
  for (double k : {0.5, 0.8, 1.0}) {
    CHECK(std::abs(vacuum_probability(GaussianState::thermal(1, k), m0) - 2 * k / (1 + k)) <= 1e-12);
  }
  CHECK_THROWS_AS(vacuum_probability(GaussianState::vacuum(2), std::span<const int>{}), std::invalid_argument);
  const std::array<int, 1> bad{2};
  CHECK_THROWS_AS(vacuum_probability(GaussianState::vacuum(2), bad), std::out_of_range);
}

TEST_CASE("vacuum probability determinant forms agree") {
  const auto g = build_squeezed_thermal({0.7, -0.4, 0.75});
  const std::array<std::vector<int>, 3> subsets{{{1}, {0, 2}, {0, 1, 3}}};
  for (const auto& s : subsets) {
    const auto k = static_cast<Eigen::Index>(s.size());
    Eigen::MatrixXd vs(2 * k, 2 * k);
    for (Eigen::Index r = 0; r < 2 * k; ++r) {
      for (Eigen::Index c = 0; c < 2 * k; ++c) {
        const int rr = s[static_cast<std::size_t>(r % k)] + (r < k ? 0 : 4);
        const int cc = s[static_cast<std::size_t>(c % k)] + (c < k ? 0 : 4);
        vs(r, c) = g.variance()(rr, cc);
      }
    }
    const Eigen::MatrixXd gs = (2 * vs).inverse();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2 * k, 2 * k);
    const double alt = std::pow(2.0, static_cast<double>(k)) * std::sqrt(gs.determinant() / (gs + id).determinant());
    CHECK(std::abs(vacuum_probability(g, s) - alt) <= 1e-12);
  }
}

TEST_CASE("gaussian functional") {
  CHECK(gaussian_ch(GaussianState::vacuum(4), {pi / 8, pi / 4, 3 * pi / 8, 0}).f == doctest::Approx(0.0));
  const auto th = build_squeezed_thermal({0, 0, 0.7});
  for (double t1 : {0.0, 0.9}) {
    const auto r = gaussian_rates(th, t1, 2.0);
    CHECK(std::abs(r.both * r.none - r.first_only * r.second_only) <= 1e-12);
  }
  const auto rep = gaussian_ch(th, {0.1, 0.4, 1.3, 2.2});
  CHECK(rep.verdict == Verdict::not_violated);
  CHECK_THROWS_AS(gaussian_rates(GaussianState::vacuum(2), 0, 0), DimensionError);
}

TEST_CASE("gaussian and Fock engines agree") {
  const auto b = make_basis(4, 20);
  for (const auto& spec : {SqueezedThermalSpec{0.1, 0.3, 1.0}, SqueezedThermalSpec{0.3, 0.2, 1.0},
                           SqueezedThermalSpec{-0.2, 0.0, 1.0}}) {
    const auto g = build_squeezed_thermal(spec);
    const auto f = to_fock(spec, b);
    CHECK(f.norm_squared() + f.truncation_error() == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& [t1, t2] : {std::pair{0.0, 0.0}, std::pair{0.4, 1.9}, std::pair{2.5, 0.8}}) {
      const auto a = gaussian_rates(g, t1, t2);
      const auto c = coincidence_rates(f, t1, t2);
      CHECK(std::abs(a.both - c.both) < 1e-6);
      CHECK(std::abs(a.first_only - c.first_only) < 1e-6);
      CHECK(std::abs(a.second_only - c.second_only) < 1e-6);
      CHECK(std::abs(a.none - c.none) < 1e-6);
    }
  }
  CHECK_THROWS_AS(to_fock({0.1, 0.1, 0.9}, b), std::invalid_argument);
}

}
