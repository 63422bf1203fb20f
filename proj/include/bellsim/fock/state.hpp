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
#include <vector>

#include "bellsim/common.hpp"
#include "bellsim/fock/basis.hpp"

namespace bellsim {

/// Pure state on a truncated Fock basis.
///
/// Amplitudes are stored exactly as produced; truncating operations do not
/// renormalize but accumulate the discarded squared weight in
/// truncation_error(), which downstream probabilities carry as an error bar.
class OccupationState {
 public:
  OccupationState(BasisPtr basis, std::vector<cplx> amplitudes, double truncation_error = 0.0);

  static OccupationState vacuum(BasisPtr basis);
  static OccupationState number_state(BasisPtr basis, std::span<const int> occupation);

  const FockBasis& basis() const noexcept { return *basis_; }
  const BasisPtr& basis_ptr() const noexcept { return basis_; }
  int mode_count() const noexcept { return basis_->mode_count(); }

  std::span<const cplx> amplitudes() const noexcept { return amplitudes_; }
  cplx amplitude(std::span<const int> occupation) const;

  double norm_squared() const;
  double truncation_error() const noexcept { return truncation_error_; }
  /// Squared weight on the highest photon-number shell. Large values mean the
  /// cutoff is too tight even if nothing was dropped yet.
  double top_shell_weight() const;

  OccupationState normalized() const;

  OccupationState operator+(const OccupationState& other) const;
  OccupationState operator-(const OccupationState& other) const;
  OccupationState operator*(cplx factor) const;

 private:
  BasisPtr basis_;
  std::vector<cplx> amplitudes_;
  double truncation_error_;
};

/// <a|b>
cplx inner_product(const OccupationState& a, const OccupationState& b);
/// |<a|b>|^2 / (<a|a><b|b>); one means equal up to a global phase.
double fidelity(const OccupationState& a, const OccupationState& b);

/// Dense hermitian density matrix on a truncated basis.
class DensityOperator {
 public:
  /// Checks hermiticity and unit trace (trace tolerance widened by the
  /// truncation error). Positivity is checked on request by check_positive().
  DensityOperator(BasisPtr basis, Eigen::MatrixXcd matrix, double truncation_error = 0.0,
                  const NumericalPolicy& policy = {});

  static DensityOperator from_pure(const OccupationState& state, const NumericalPolicy& policy = {});

  const FockBasis& basis() const noexcept { return *basis_; }
  const BasisPtr& basis_ptr() const noexcept { return basis_; }
  int mode_count() const noexcept { return basis_->mode_count(); }
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  double truncation_error() const noexcept { return truncation_error_; }

  double trace() const;
  double purity() const;
  double min_eigenvalue() const;
  /// Throws if the smallest eigenvalue is below -psd_tol.
  void check_positive(const NumericalPolicy& policy = {}) const;

 private:
  BasisPtr basis_;
  Eigen::MatrixXcd matrix_;
  double truncation_error_;
};

/// Mixed state held as a convex combination of pure states. Lets detection
/// work on mixtures without materializing D x D matrices.
struct WeightedState {
  double weight;
  OccupationState state;
};

class PureEnsemble {
 public:
  explicit PureEnsemble(std::vector<WeightedState> members, const NumericalPolicy& policy = {});

  std::span<const WeightedState> members() const noexcept { return members_; }
  const BasisPtr& basis_ptr() const noexcept { return members_.front().state.basis_ptr(); }
  int mode_count() const noexcept { return members_.front().state.mode_count(); }
  /// Weighted truncation error of the members.
  double truncation_error() const;

  DensityOperator to_density(const NumericalPolicy& policy = {}) const;

 private:
  std::vector<WeightedState> members_;
};

/// Operator diagonal in the occupation basis, e.g. a number operator.
struct DiagonalOperator {
  std::vector<double> diagonal;
};

DiagonalOperator number_operator(const FockBasis& basis, int mode);
/// Dense form of a diagonal operator, for the general expectation() overload.
Eigen::MatrixXcd to_dense(const DiagonalOperator& op);

OccupationState apply_creation(const OccupationState& state, int mode);
OccupationState apply_annihilation(const OccupationState& state, int mode);

/// Tr(rho op). Throws if the imaginary part exceeds policy.imag_tol.
double expectation(const DensityOperator& rho, const Eigen::MatrixXcd& op, const NumericalPolicy& policy = {});
double expectation(const OccupationState& state, const Eigen::MatrixXcd& op, const NumericalPolicy& policy = {});
double expectation(const DensityOperator& rho, const DiagonalOperator& op);
double expectation(const OccupationState& state, const DiagonalOperator& op);

/// Reduced state on `keep_modes`, listed in increasing mode order. Throws on
/// an empty or out-of-range set.
DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep_modes,
                              const NumericalPolicy& policy = {});
DensityOperator partial_trace(const OccupationState& state, std::span<const int> keep_modes,
                              const NumericalPolicy& policy = {});

/// Truncated multimode coherent state e^{-|z|^2/2} prod z_j^{m_j}/sqrt(m_j!).
/// Throws TruncationError (with the smallest adequate cutoff) when the
/// discarded Poisson tail exceeds policy.tail_tol.
OccupationState synthesize_coherent(std::span<const cplx> z, const BasisPtr& basis, const NumericalPolicy& policy = {});

/// Probability that a Poisson variable with the given mean exceeds `cutoff`.
double poisson_tail(double mean, int cutoff);

/// 1/2 (a1+ - a3+)(a4+ - a2+)|0> on four modes.
OccupationState two_photon_state(const BasisPtr& basis);

}  // namespace bellsim
