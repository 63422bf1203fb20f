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

#include "bellsim/gaussian/gaussian.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <stdexcept>

namespace bellsim {

namespace {

void require_square_even(const Eigen::MatrixXd& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
    throw DimensionError(fmt::format("{}: expected a non-empty 2n x 2n matrix, got {} x {}", who, m.rows(), m.cols()));
  }
}

double min_eigenvalue_symmetric(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

Eigen::MatrixXd symplectic_form(int modes) {
  const Eigen::Index n = modes;
  Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  beta.topRightCorner(n, n).setIdentity();
  beta.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  return beta;
}

GaussianState::GaussianState(Eigen::MatrixXd g, const NumericalPolicy& policy) : g_(std::move(g)) {
  require_square_even(g_, "GaussianState");
  if (!g_.allFinite()) {
    throw std::invalid_argument("GaussianState: non-finite entries");
  }
  const double asym = (g_ - g_.transpose()).cwiseAbs().maxCoeff();
  if (asym > policy.hermitian_tol * std::max(1.0, g_.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument(fmt::format("GaussianState: G is not symmetric (max deviation {:.3e})", asym));
  }
  g_ = 0.5 * (g_ + g_.transpose()).eval();
  Eigen::LLT<Eigen::MatrixXd> llt(g_);
  if (llt.info() != Eigen::Success || !(min_eigenvalue_symmetric(g_) > 0.0)) {
    throw std::invalid_argument("GaussianState: G is not positive definite");
  }
  v_ = 0.5 * llt.solve(Eigen::MatrixXd::Identity(g_.rows(), g_.cols()));
  v_ = 0.5 * (v_ + v_.transpose()).eval();
  const double unc = uncertainty_min_eigenvalue(g_);
  if (unc < -policy.uncertainty_tol) {
    throw std::invalid_argument(
        fmt::format("GaussianState: uncertainty relation violated (min eigenvalue {:.3e})", unc));
  }
}

GaussianState GaussianState::vacuum(int modes) {
  if (modes < 1) {
    throw std::invalid_argument("GaussianState::vacuum: need at least one mode");
  }
  return GaussianState(Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

GaussianState GaussianState::thermal(int modes, double kappa) {
  if (modes < 1) {
    throw std::invalid_argument("GaussianState::thermal: need at least one mode");
  }
  if (!(kappa > 0.0 && kappa <= 1.0)) {
    throw std::invalid_argument(fmt::format("GaussianState::thermal: kappa {} outside (0, 1]", kappa));
  }
  return GaussianState(kappa * Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

GaussianState GaussianState::from_variance(const Eigen::MatrixXd& v, const NumericalPolicy& policy) {
  require_square_even(v, "GaussianState::from_variance");
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (v + v.transpose()));
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("GaussianState::from_variance: V is not positive definite");
  }
  return GaussianState(0.5 * llt.solve(Eigen::MatrixXd::Identity(v.rows(), v.cols())), policy);
}

SymplecticMatrix::SymplecticMatrix(Eigen::MatrixXd m, const NumericalPolicy& policy) : m_(std::move(m)) {
  require_square_even(m_, "SymplecticMatrix");
  const Eigen::MatrixXd beta = symplectic_form(static_cast<int>(m_.rows() / 2));
  const double dev = (m_ * beta * m_.transpose() - beta).cwiseAbs().maxCoeff();
  if (!(dev <= policy.symplectic_tol * std::max(1.0, m_.squaredNorm() / static_cast<double>(m_.rows())))) {
    throw std::invalid_argument(fmt::format("SymplecticMatrix: M beta M^T deviates from beta by {:.3e}", dev));
  }
}

SymplecticMatrix SymplecticMatrix::inverse() const {
  // M^{-1} = -beta M^T beta for symplectic M
  const Eigen::MatrixXd beta = symplectic_form(mode_count());
  return SymplecticMatrix(-beta * m_.transpose() * beta);
}

SymplecticMatrix SymplecticMatrix::operator*(const SymplecticMatrix& rhs) const {
  if (rhs.m_.rows() != m_.rows()) {
    throw DimensionError("SymplecticMatrix: mode count mismatch");
  }
  return SymplecticMatrix(m_ * rhs.m_);
}

void SqueezedThermalSpec::validate() const {
  if (!std::isfinite(u) || !std::isfinite(v)) {
    throw std::invalid_argument("squeezed thermal spec: u and v must be finite");
  }
  if (!(kappa > 0.0 && kappa <= 1.0)) {
    throw std::invalid_argument(fmt::format("squeezed thermal spec: kappa {} outside (0, 1]", kappa));
  }
}

SymplecticMatrix squeezing_symplectic(double u, double v) {
  Eigen::VectorXd d(8);
  d << std::exp(-u), std::exp(v), std::exp(-v), std::exp(u), std::exp(u), std::exp(-v), std::exp(v), std::exp(-u);
  return SymplecticMatrix(d.asDiagonal().toDenseMatrix());
}

SymplecticMatrix entangling_symplectic() {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(8, 8);
  m.topLeftCorner(4, 4) = maximal_entangler().matrix().real();
  m.bottomRightCorner(4, 4) = maximal_entangler().matrix().real();
  return SymplecticMatrix(std::move(m));
}

GaussianState build_squeezed_thermal(const SqueezedThermalSpec& spec, const NumericalPolicy& policy) {
  spec.validate();
  const Eigen::MatrixXd s = squeezing_symplectic(spec.u, spec.v).matrix();
  const Eigen::MatrixXd u = entangling_symplectic().matrix();
  const Eigen::MatrixXd g = u.transpose() * s.transpose() * (spec.kappa * s) * u;
  try {
    return GaussianState(g, policy);
  } catch (const std::invalid_argument& e) {
    throw Error(fmt::format("build_squeezed_thermal: internal error, {}", e.what()));
  }
}

Eigen::MatrixXd variance_matrix(const GaussianState& g) { return g.variance(); }

SqueezingCheck is_squeezed(const GaussianState& g, const NumericalPolicy& policy) {
  const double lo = min_eigenvalue_symmetric(g.variance());
  return {lo < 0.5 - policy.squeeze_margin, lo};
}

double uncertainty_min_eigenvalue(const Eigen::MatrixXd& g) {
  require_square_even(g, "uncertainty_min_eigenvalue");
  const Eigen::MatrixXd ginv = g.inverse();
  Eigen::MatrixXcd h = ginv.cast<cplx>();
  h += cplx(0.0, 1.0) * symplectic_form(static_cast<int>(g.rows() / 2)).cast<cplx>();
  h = (0.5 * (h + h.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double uncertainty_min_eigenvalue(const GaussianState& g) { return uncertainty_min_eigenvalue(g.g()); }

GaussianState apply_symplectic(const GaussianState& g, const SymplecticMatrix& m, const NumericalPolicy& policy) {
  if (m.mode_count() != g.mode_count()) {
    throw DimensionError(fmt::format("apply_symplectic: {}-mode matrix on a {}-mode state", m.mode_count(),
                                     g.mode_count()));
  }
  return GaussianState::from_variance(m.matrix() * g.variance() * m.matrix().transpose(), policy);
}

SymplecticMatrix embed_passive(const PassiveUnitary& u, const NumericalPolicy& policy) {
  const Eigen::Index n = u.mode_count();
  const Eigen::MatrixXd re = u.matrix().real();
  const Eigen::MatrixXd im = u.matrix().imag();
  Eigen::MatrixXd m(2 * n, 2 * n);
  m << re, -im, im, re;
  return SymplecticMatrix(std::move(m), policy);
}

PassiveUnitary passive_from_symplectic(const SymplecticMatrix& m, const NumericalPolicy& policy) {
  const Eigen::Index n = m.mode_count();
  const Eigen::MatrixXd& x = m.matrix();
  const Eigen::MatrixXd a = x.topLeftCorner(n, n);
  const Eigen::MatrixXd b = x.bottomLeftCorner(n, n);
  const double dev = std::max((x.bottomRightCorner(n, n) - a).cwiseAbs().maxCoeff(),
                              (x.topRightCorner(n, n) + b).cwiseAbs().maxCoeff());
  if (dev > policy.unitary_tol) {
    throw std::invalid_argument("passive_from_symplectic: matrix is not of passive block form");
  }
  Eigen::MatrixXcd w(n, n);
  w.real() = a;
  w.imag() = b;
  return PassiveUnitary(std::move(w), policy);
}

double vacuum_probability(const Eigen::MatrixXd& variance, std::span<const int> modes) {
  require_square_even(variance, "vacuum_probability");
  const int n = static_cast<int>(variance.rows() / 2);
  if (modes.empty()) {
    throw std::invalid_argument("vacuum_probability: empty mode subset");
  }
  const auto k = static_cast<Eigen::Index>(modes.size());
  std::vector<Eigen::Index> rows;
  rows.reserve(2 * modes.size());
  for (int j : modes) {
    if (j < 0 || j >= n) {
      throw std::out_of_range(fmt::format("vacuum_probability: mode {} outside [0, {})", j, n));
    }
    rows.push_back(j);
  }
  for (int j : modes) {
    rows.push_back(j + n);
  }
  Eigen::MatrixXd vs(2 * k, 2 * k);
  for (Eigen::Index r = 0; r < 2 * k; ++r) {
    for (Eigen::Index c = 0; c < 2 * k; ++c) {
      vs(r, c) = variance(rows[static_cast<std::size_t>(r)], rows[static_cast<std::size_t>(c)]);
    }
  }
  vs.diagonal().array() += 0.5;
  const double det = vs.determinant();
  if (!(det > 0.0)) {
    throw Error(fmt::format("vacuum_probability: non-positive determinant {:.3e}", det));
  }
  return 1.0 / std::sqrt(det);
}

double vacuum_probability(const GaussianState& g, std::span<const int> modes) {
  return vacuum_probability(g.variance(), modes);
}

CoincidenceRates gaussian_rates(const GaussianState& g, double theta1, double theta2, Geometry geometry) {
  if (g.mode_count() != 4) {
    throw DimensionError(fmt::format("gaussian_rates: expects 4 modes, got {}", g.mode_count()));
  }
  const Eigen::MatrixXd m = embed_passive(beam_rotation(theta1, theta2, geometry)).matrix();
  const Eigen::MatrixXd v = m * g.variance() * m.transpose();
  const auto q = [&](std::initializer_list<int> modes) {
    return vacuum_probability(v, std::span<const int>(modes.begin(), modes.size()));
  };
  const double q0 = q({0});
  const double q2 = q({2});
  const double q01 = q({0, 1});
  const double q23 = q({2, 3});
  CoincidenceRates r;
  r.both = 1.0 - q0 - q2 + q({0, 2});
  r.first_only = 1.0 - q0 - q23 + q({0, 2, 3});
  r.second_only = 1.0 - q01 - q2 + q({0, 1, 2});
  r.none = 1.0 - q01 - q23 + q({0, 1, 2, 3});
  return r;
}

RateSource make_rate_source(const GaussianState& g, Geometry geometry) {
  return {[g, geometry](double t1, double t2) { return gaussian_rates(g, t1, t2, geometry); }, 0.0};
}

CoincidenceReport gaussian_ch(const GaussianState& g, const AngleSettings& angles, Geometry geometry,
                              const NumericalPolicy& policy) {
  return ch_functional(make_rate_source(g, geometry), angles, policy);
}

OccupationState to_fock(const SqueezedThermalSpec& spec, const BasisPtr& basis, const NumericalPolicy& policy) {
  spec.validate();
  if (spec.kappa != 1.0) {
    throw std::invalid_argument("to_fock: only zero-temperature (kappa = 1) states are pure");
  }
  if (basis->mode_count() != 4) {
    throw DimensionError("to_fock: expects a 4-mode basis");
  }
  // mode j is squeezed so that its q is scaled by the j-th q entry of S^{-1}
  const std::array<double, 4> r{-spec.u, spec.v, -spec.v, spec.u};
  OccupationState state = OccupationState::vacuum(basis);
  for (int j = 0; j < 4; ++j) {
    if (r[static_cast<std::size_t>(j)] != 0.0) {
      state = apply_single_mode_squeeze(state, j, r[static_cast<std::size_t>(j)], policy.tail_tol);
    }
  }
  return apply_passive(state, passive_from_symplectic(entangling_symplectic().inverse(), policy));
}

}  // namespace bellsim
