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

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bellsim/fock/state.hpp"

namespace bellsim {
namespace {

void require_dense_size(std::size_t d, const NumericalPolicy& policy) {
  if (d > policy.max_dense_dimension) {
    throw DimensionError(fmt::format("dense density matrix of dimension {} exceeds the limit {}", d,
                                     policy.max_dense_dimension));
  }
}

// Splits the modes into kept and traced lists, validating the keep set.
struct ModeSplit {
  std::vector<int> kept;
  std::vector<int> traced;
};

ModeSplit split_modes(int mode_count, std::span<const int> keep_modes) {
  if (keep_modes.empty()) {
    throw std::invalid_argument("partial_trace: keep set must not be empty");
  }
  std::vector<bool> keep(static_cast<std::size_t>(mode_count), false);
  for (int m : keep_modes) {
    if (m < 0 || m >= mode_count) {
      throw std::out_of_range(fmt::format("partial_trace: mode {} out of range", m));
    }
    keep[static_cast<std::size_t>(m)] = true;
  }
  ModeSplit split;
  for (int m = 0; m < mode_count; ++m) {
    (keep[static_cast<std::size_t>(m)] ? split.kept : split.traced).push_back(m);
  }
  return split;
}

// For every full-basis index: its index in the kept basis and a group id
// (index of the traced occupation in the traced basis).
struct TraceMap {
  BasisPtr kept_basis;
  std::vector<std::size_t> kept_index;
  std::vector<std::size_t> group;
  std::size_t group_count = 1;
};

TraceMap build_trace_map(const FockBasis& full, const ModeSplit& split, const NumericalPolicy& policy) {
  TraceMap map;
  map.kept_basis = make_basis(static_cast<int>(split.kept.size()), full.cutoff(), policy);
  BasisPtr traced_basis;
  if (!split.traced.empty()) {
    traced_basis = make_basis(static_cast<int>(split.traced.size()), full.cutoff(), policy);
    map.group_count = traced_basis->size();
  }
  map.kept_index.resize(full.size());
  map.group.resize(full.size(), 0);
  std::vector<int> kept_occ(split.kept.size());
  std::vector<int> traced_occ(split.traced.size());
  for (std::size_t i = 0; i < full.size(); ++i) {
    const auto occ = full.occupation(i);
    for (std::size_t k = 0; k < split.kept.size(); ++k) {
      kept_occ[k] = occ[static_cast<std::size_t>(split.kept[k])];
    }
    map.kept_index[i] = map.kept_basis->index_of(kept_occ);
    if (traced_basis) {
      for (std::size_t k = 0; k < split.traced.size(); ++k) {
        traced_occ[k] = occ[static_cast<std::size_t>(split.traced[k])];
      }
      map.group[i] = traced_basis->index_of(traced_occ);
    }
  }
  return map;
}

std::vector<std::vector<std::size_t>> group_members(const TraceMap& map) {
  std::vector<std::vector<std::size_t>> members(map.group_count);
  for (std::size_t i = 0; i < map.group.size(); ++i) {
    members[map.group[i]].push_back(i);
  }
  return members;
}

}  // namespace

DensityOperator::DensityOperator(BasisPtr basis, Eigen::MatrixXcd matrix, double truncation_error,
                                 const NumericalPolicy& policy)
    : basis_(std::move(basis)), matrix_(std::move(matrix)), truncation_error_(truncation_error) {
  if (!basis_) {
    throw std::invalid_argument("DensityOperator: null basis");
  }
  const auto d = static_cast<Eigen::Index>(basis_->size());
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw std::invalid_argument(fmt::format("DensityOperator: {}x{} matrix for a basis of size {}", matrix_.rows(),
                                            matrix_.cols(), d));
  }
  require_dense_size(basis_->size(), policy);
  const double asym = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > policy.hermitian_tol) {
    throw std::invalid_argument(fmt::format("DensityOperator: not hermitian (max |M - M^+| = {:.3g})", asym));
  }
  const double tr = trace();
  if (std::abs(tr - 1.0) > policy.trace_tol + truncation_error_) {
    throw std::invalid_argument(fmt::format("DensityOperator: trace {:.12g} differs from 1", tr));
  }
}

DensityOperator DensityOperator::from_pure(const OccupationState& state, const NumericalPolicy& policy) {
  require_dense_size(state.basis().size(), policy);
  const Eigen::Map<const Eigen::VectorXcd> psi(state.amplitudes().data(),
                                               static_cast<Eigen::Index>(state.amplitudes().size()));
  return {state.basis_ptr(), psi * psi.adjoint(), state.truncation_error(), policy};
}

double DensityOperator::trace() const { return matrix_.trace().real(); }

double DensityOperator::purity() const { return matrix_.cwiseAbs2().sum(); }

double DensityOperator::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void DensityOperator::check_positive(const NumericalPolicy& policy) const {
  const double lo = min_eigenvalue();
  if (lo < -policy.psd_tol) {
    throw Error(fmt::format("DensityOperator: not positive semidefinite (min eigenvalue {:.3g})", lo));
  }
}

PureEnsemble::PureEnsemble(std::vector<WeightedState> members, const NumericalPolicy& policy)
    : members_(std::move(members)) {
  if (members_.empty()) {
    throw std::invalid_argument("PureEnsemble: no members");
  }
  double total = 0.0;
  for (const auto& m : members_) {
    if (!(m.weight > 0.0)) {
      throw std::invalid_argument("PureEnsemble: weights must be positive");
    }
    if (!(m.state.basis() == members_.front().state.basis())) {
      throw std::invalid_argument("PureEnsemble: members live on different bases");
    }
    total += m.weight;
  }
  if (std::abs(total - 1.0) > policy.norm_tol) {
    throw std::invalid_argument(fmt::format("PureEnsemble: weights sum to {:.15g}", total));
  }
}

double PureEnsemble::truncation_error() const {
  double err = 0.0;
  for (const auto& m : members_) {
    err += m.weight * m.state.truncation_error();
  }
  return err;
}

DensityOperator PureEnsemble::to_density(const NumericalPolicy& policy) const {
  const std::size_t d = members_.front().state.basis().size();
  require_dense_size(d, policy);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (const auto& m : members_) {
    const Eigen::Map<const Eigen::VectorXcd> psi(m.state.amplitudes().data(), static_cast<Eigen::Index>(d));
    rho.noalias() += m.weight * (psi * psi.adjoint());
  }
  return {basis_ptr(), std::move(rho), truncation_error(), policy};
}

double expectation(const DensityOperator& rho, const Eigen::MatrixXcd& op, const NumericalPolicy& policy) {
  if (op.rows() != rho.matrix().rows() || op.cols() != rho.matrix().cols()) {
    throw std::invalid_argument("expectation: operator dimension does not match the state");
  }
  // Tr(rho op) = sum_ij rho_ij op_ji
  const cplx value = rho.matrix().cwiseProduct(op.transpose()).sum();
  if (std::abs(value.imag()) > policy.imag_tol) {
    throw Error(fmt::format("expectation: imaginary part {} exceeds tolerance; operator not hermitian?",
                            value.imag()));
  }
  return value.real();
}

double expectation(const DensityOperator& rho, const DiagonalOperator& op) {
  if (op.diagonal.size() != rho.basis().size()) {
    throw std::invalid_argument("expectation: operator dimension does not match the state");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < op.diagonal.size(); ++i) {
    acc += op.diagonal[i] * rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  }
  return acc;
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep_modes,
                              const NumericalPolicy& policy) {
  const ModeSplit split = split_modes(rho.mode_count(), keep_modes);
  if (split.traced.empty()) {
    return rho;
  }
  const TraceMap map = build_trace_map(rho.basis(), split, policy);
  const auto d = static_cast<Eigen::Index>(map.kept_basis->size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& members : group_members(map)) {
    for (std::size_t a : members) {
      for (std::size_t b : members) {
        out(static_cast<Eigen::Index>(map.kept_index[a]), static_cast<Eigen::Index>(map.kept_index[b])) +=
            rho.matrix()(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      }
    }
  }
  return {map.kept_basis, std::move(out), rho.truncation_error(), policy};
}

DensityOperator partial_trace(const OccupationState& state, std::span<const int> keep_modes,
                              const NumericalPolicy& policy) {
  const ModeSplit split = split_modes(state.mode_count(), keep_modes);
  if (split.traced.empty()) {
    return DensityOperator::from_pure(state, policy);
  }
  const TraceMap map = build_trace_map(state.basis(), split, policy);
  require_dense_size(map.kept_basis->size(), policy);
  const auto d = static_cast<Eigen::Index>(map.kept_basis->size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  const auto amps = state.amplitudes();
  for (const auto& members : group_members(map)) {
    for (std::size_t a : members) {
      if (amps[a] == cplx{}) {
        continue;
      }
      for (std::size_t b : members) {
        out(static_cast<Eigen::Index>(map.kept_index[a]), static_cast<Eigen::Index>(map.kept_index[b])) +=
            amps[a] * std::conj(amps[b]);
      }
    }
  }
  return {map.kept_basis, std::move(out), state.truncation_error(), policy};
}

}  // namespace bellsim
