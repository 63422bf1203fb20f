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

#pragma once

#include <Eigen/Dense>
#include <span>

#include "bellsim/common.hpp"
#include "bellsim/detection/detection.hpp"
#include "bellsim/fock/state.hpp"
#include "bellsim/optics/linear_optics.hpp"

namespace bellsim {

// Phase-space vectors are ordered (q1..qn, p1..pn) with q = (a + a^+)/sqrt2,
// so the vacuum has variance matrix V = I/2 and G = I.

/// [[0, I], [-I, 0]] on n modes.
Eigen::MatrixXd symplectic_form(int modes);

/// Centered Gaussian state given by the matrix G of its Wigner function
/// exp(-xi^T G xi); the variance matrix is V = G^{-1} / 2.
class GaussianState {
 public:
  /// Checks symmetry, positive definiteness and G^{-1} + i beta >= 0.
  explicit GaussianState(Eigen::MatrixXd g, const NumericalPolicy& policy = {});
  static GaussianState vacuum(int modes);
  /// G = kappa I, kappa in (0, 1].
  static GaussianState thermal(int modes, double kappa);
  static GaussianState from_variance(const Eigen::MatrixXd& v, const NumericalPolicy& policy = {});

  int mode_count() const noexcept { return static_cast<int>(g_.rows() / 2); }
  const Eigen::MatrixXd& g() const noexcept { return g_; }
  const Eigen::MatrixXd& variance() const noexcept { return v_; }

 private:
  Eigen::MatrixXd g_;
  Eigen::MatrixXd v_;
};

/// Real 2n x 2n matrix with M beta M^T = beta.
class SymplecticMatrix {
 public:
  explicit SymplecticMatrix(Eigen::MatrixXd m, const NumericalPolicy& policy = {});
  int mode_count() const noexcept { return static_cast<int>(m_.rows() / 2); }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  SymplecticMatrix inverse() const;
  SymplecticMatrix operator*(const SymplecticMatrix& rhs) const;

 private:
  Eigen::MatrixXd m_;
};

/// Two beams squeezed by equal and opposite amounts: modes 1 and 4 by u,
/// modes 2 and 3 by v, then entangled and heated to kappa.
struct SqueezedThermalSpec {
  double u = 0.0;
  double v = 0.0;
  double kappa = 1.0;

  void validate() const;
};

/// Diag(e^{-u}, e^{v}, e^{-v}, e^{u}, e^{u}, e^{-v}, e^{v}, e^{-u}).
SymplecticMatrix squeezing_symplectic(double u, double v);
/// 1/2 [[X, 0], [0, X]] with X = [[Y, Y], [-Y, Y]], Y = [[1, 1], [-1, 1]].
SymplecticMatrix entangling_symplectic();

/// G = U^{-1} S^T (kappa I) S U.
GaussianState build_squeezed_thermal(const SqueezedThermalSpec& spec, const NumericalPolicy& policy = {});

Eigen::MatrixXd variance_matrix(const GaussianState& g);

struct SqueezingCheck {
  bool squeezed = false;
  double min_eigenvalue = 0.0;
};
/// Squeezed when the smallest eigenvalue of V is below 1/2 - squeeze_margin.
SqueezingCheck is_squeezed(const GaussianState& g, const NumericalPolicy& policy = {});

/// Smallest eigenvalue of the hermitian matrix G^{-1} + i beta.
double uncertainty_min_eigenvalue(const GaussianState& g);
double uncertainty_min_eigenvalue(const Eigen::MatrixXd& g);

/// V -> M V M^T.
GaussianState apply_symplectic(const GaussianState& g, const SymplecticMatrix& m,
                               const NumericalPolicy& policy = {});

/// [[Re U, -Im U], [Im U, Re U]].
SymplecticMatrix embed_passive(const PassiveUnitary& u, const NumericalPolicy& policy = {});
/// Inverse of embed_passive. Throws if M is not of the passive block form.
PassiveUnitary passive_from_symplectic(const SymplecticMatrix& m, const NumericalPolicy& policy = {});

/// 1 / sqrt(det(V_s + I/2)) with V_s the rows and columns of the q and p of
/// every mode in `modes`.
double vacuum_probability(const GaussianState& g, std::span<const int> modes);
double vacuum_probability(const Eigen::MatrixXd& variance, std::span<const int> modes);

/// Coincidence rates of a 4-mode Gaussian state; the polarizer rotation is
/// applied to V before reducing onto the detected modes.
CoincidenceRates gaussian_rates(const GaussianState& g, double theta1, double theta2, Geometry geometry = {});
RateSource make_rate_source(const GaussianState& g, Geometry geometry = {});
CoincidenceReport gaussian_ch(const GaussianState& g, const AngleSettings& angles, Geometry geometry = {},
                              const NumericalPolicy& policy = {});

/// Fock-space version of a zero-temperature spec (kappa must be 1): single
/// mode squeezed vacua followed by the passive entangler.
OccupationState to_fock(const SqueezedThermalSpec& spec, const BasisPtr& basis, const NumericalPolicy& policy = {});

}  // namespace bellsim
