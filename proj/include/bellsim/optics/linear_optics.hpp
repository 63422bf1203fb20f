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

#include <random>
#include <vector>

#include "bellsim/common.hpp"
#include "bellsim/fock/state.hpp"

namespace bellsim {

/// n x n unitary acting on mode amplitudes: a coherent state |z> is mapped
/// to |U z>, equivalently a_k^+ -> sum_j U_jk a_j^+.
class PassiveUnitary {
 public:
  explicit PassiveUnitary(Eigen::MatrixXcd matrix, const NumericalPolicy& policy = {});

  static PassiveUnitary identity(int modes);

  int mode_count() const noexcept { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }

  PassiveUnitary adjoint() const;
  PassiveUnitary operator*(const PassiveUnitary& rhs) const;

 private:
  Eigen::MatrixXcd matrix_;
};

/// Two-mode mixer on (mode_a, mode_b) with block
///   [ cos(theta)              -e^{i phi} sin(theta) ]
///   [ e^{-i phi} sin(theta)    cos(theta)           ]
/// For phi = 0 this is the polarizer rotation by theta.
struct Mixer {
  int mode_a;
  int mode_b;
  double theta;
  double phi;

  Eigen::Matrix2cd block() const;
};

/// U = mixers[0] * mixers[1] * ... * mixers[k-1] * diag(e^{i phases}).
struct PassiveDecomposition {
  int mode_count = 0;
  std::vector<Mixer> mixers;
  std::vector<double> phases;

  Eigen::MatrixXcd recompose() const;
};

/// Triangular nulling of U by nearest-neighbour mixers. Mixers with
/// theta == 0 are omitted, so the identity decomposes into an empty list.
PassiveDecomposition decompose_passive(const PassiveUnitary& u);

/// Exact action of U on a truncated state. Passive maps conserve the total
/// photon number, so each shell is transformed without truncation loss.
OccupationState apply_passive(const OccupationState& state, const PassiveUnitary& u);
DensityOperator apply_passive(const DensityOperator& rho, const PassiveUnitary& u,
                              const NumericalPolicy& policy = {});
PureEnsemble apply_passive(const PureEnsemble& ensemble, const PassiveUnitary& u);

/// Applies a 2x2 unitary block to modes (mode_a, mode_b) only. Cheaper than
/// apply_passive when the transformation is already a single mixer.
OccupationState apply_mode_pair(const OccupationState& state, int mode_a, int mode_b, const Eigen::Matrix2cd& block);

/// Real rotation embedded on modes (i, j) of n modes:
/// z_i' = cos(theta) z_i - sin(theta) z_j,  z_j' = sin(theta) z_i + cos(theta) z_j.
PassiveUnitary polarizer_rotation(double theta, int i, int j, int n);

/// exp(i h) for a hermitian generator h; the mode transformation generated by
/// the Hamiltonian sum_jk h_jk a_j^+ a_k.
PassiveUnitary passive_from_generator(const Eigen::MatrixXcd& h, const NumericalPolicy& policy = {});

/// The real orthogonal 4-mode entangler 1/2 [[Y, Y], [-Y, Y]] with
/// Y = [[1, 1], [-1, 1]], which acts identically on q's and p's.
PassiveUnitary maximal_entangler();

/// Haar-distributed unitary (QR of a complex Ginibre matrix, phase-fixed).
PassiveUnitary haar_unitary(int modes, std::mt19937_64& rng);

/// Squeezes `mode`, which must be in vacuum, with q -> e^{-u} q and
/// p -> e^{u} p, so Var(q) = e^{-2u}/2 for u > 0. Components pushed past the
/// cutoff are dropped; a dropped weight above `max_tail` throws
/// TruncationError.
OccupationState apply_single_mode_squeeze(const OccupationState& state, int mode, double u,
                                          double max_tail = NumericalPolicy{}.tail_tol);

/// Squeezed-vacuum amplitude of |2m>: (-tanh u)^m sqrt((2m)!) / (2^m m! sqrt(cosh u)).
double squeezed_vacuum_amplitude(double u, int m);

}  // namespace bellsim
