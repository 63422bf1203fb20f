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

#include <cmath>
#include <stdexcept>

#include "bellsim/fock/state.hpp"
#include "bellsim/simd/kernels.hpp"

namespace bellsim {
namespace {

void require_same_basis(const OccupationState& a, const OccupationState& b) {
  if (!(a.basis() == b.basis())) {
    throw std::invalid_argument("states live on different bases");
  }
}

void require_mode(const FockBasis& basis, int mode) {
  if (mode < 0 || mode >= basis.mode_count()) {
    throw std::out_of_range(fmt::format("mode {} out of range for {} modes", mode, basis.mode_count()));
  }
}

}  // namespace

OccupationState::OccupationState(BasisPtr basis, std::vector<cplx> amplitudes, double truncation_error)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)), truncation_error_(truncation_error) {
  if (!basis_) {
    throw std::invalid_argument("OccupationState: null basis");
  }
  if (amplitudes_.size() != basis_->size()) {
    throw std::invalid_argument(fmt::format("OccupationState: {} amplitudes for a basis of size {}",
                                            amplitudes_.size(), basis_->size()));
  }
  if (!(truncation_error_ >= 0.0)) {
    throw std::invalid_argument("OccupationState: truncation error must be non-negative");
  }
}

OccupationState OccupationState::vacuum(BasisPtr basis) {
  std::vector<cplx> amps(basis->size(), cplx{});
  amps[0] = 1.0;
  return {std::move(basis), std::move(amps)};
}

OccupationState OccupationState::number_state(BasisPtr basis, std::span<const int> occupation) {
  std::vector<cplx> amps(basis->size(), cplx{});
  amps[basis->index_of(occupation)] = 1.0;
  return {std::move(basis), std::move(amps)};
}

cplx OccupationState::amplitude(std::span<const int> occupation) const {
  if (auto idx = basis_->find(occupation)) {
    return amplitudes_[*idx];
  }
  return {};
}

double OccupationState::norm_squared() const {
  return simd::kernels().sum_norm_sq(amplitudes_.data(), amplitudes_.size());
}

double OccupationState::top_shell_weight() const {
  const int top = basis_->cutoff();
  const std::size_t begin = basis_->shell_begin(top);
  return simd::kernels().sum_norm_sq(amplitudes_.data() + begin, basis_->shell_end(top) - begin);
}

OccupationState OccupationState::normalized() const {
  const double n2 = norm_squared();
  if (!(n2 > 0.0)) {
    throw std::domain_error("cannot normalize a zero state");
  }
  return *this * cplx(1.0 / std::sqrt(n2));
}

OccupationState OccupationState::operator+(const OccupationState& other) const {
  require_same_basis(*this, other);
  std::vector<cplx> out(amplitudes_);
  simd::kernels().caxpy(1.0, other.amplitudes_.data(), out.data(), out.size());
  return {basis_, std::move(out), truncation_error_ + other.truncation_error_};
}

OccupationState OccupationState::operator-(const OccupationState& other) const {
  require_same_basis(*this, other);
  std::vector<cplx> out(amplitudes_);
  simd::kernels().caxpy(-1.0, other.amplitudes_.data(), out.data(), out.size());
  return {basis_, std::move(out), truncation_error_ + other.truncation_error_};
}

OccupationState OccupationState::operator*(cplx factor) const {
  std::vector<cplx> out(amplitudes_.size(), cplx{});
  simd::kernels().caxpy(factor, amplitudes_.data(), out.data(), out.size());
  return {basis_, std::move(out), truncation_error_ * std::norm(factor)};
}

cplx inner_product(const OccupationState& a, const OccupationState& b) {
  require_same_basis(a, b);
  return simd::kernels().cdotc(a.amplitudes().data(), b.amplitudes().data(), a.amplitudes().size());
}

double fidelity(const OccupationState& a, const OccupationState& b) {
  const double na = a.norm_squared();
  const double nb = b.norm_squared();
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw std::domain_error("fidelity of a zero state");
  }
  return std::norm(inner_product(a, b)) / (na * nb);
}

DiagonalOperator number_operator(const FockBasis& basis, int mode) {
  require_mode(basis, mode);
  DiagonalOperator op;
  op.diagonal.resize(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    op.diagonal[i] = basis.occupation(i)[static_cast<std::size_t>(mode)];
  }
  return op;
}

Eigen::MatrixXcd to_dense(const DiagonalOperator& op) {
  Eigen::VectorXcd d(static_cast<Eigen::Index>(op.diagonal.size()));
  for (std::size_t i = 0; i < op.diagonal.size(); ++i) {
    d[static_cast<Eigen::Index>(i)] = op.diagonal[i];
  }
  return d.asDiagonal();
}

OccupationState apply_creation(const OccupationState& state, int mode) {
  const FockBasis& basis = state.basis();
  require_mode(basis, mode);
  const auto amps = state.amplitudes();
  std::vector<cplx> out(basis.size(), cplx{});
  std::vector<int> occ(static_cast<std::size_t>(basis.mode_count()));
  double dropped = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (amps[i] == cplx{}) {
      continue;
    }
    const auto src = basis.occupation(i);
    std::copy(src.begin(), src.end(), occ.begin());
    const int n = occ[static_cast<std::size_t>(mode)];
    const cplx value = amps[i] * std::sqrt(static_cast<double>(n + 1));
    occ[static_cast<std::size_t>(mode)] = n + 1;
    if (auto j = basis.find(occ)) {
      out[*j] += value;
    } else {
      dropped += std::norm(value);
    }
  }
  return {state.basis_ptr(), std::move(out), state.truncation_error() + dropped};
}

OccupationState apply_annihilation(const OccupationState& state, int mode) {
  const FockBasis& basis = state.basis();
  require_mode(basis, mode);
  const auto amps = state.amplitudes();
  std::vector<cplx> out(basis.size(), cplx{});
  std::vector<int> occ(static_cast<std::size_t>(basis.mode_count()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto src = basis.occupation(i);
    const int n = src[static_cast<std::size_t>(mode)];
    if (n == 0 || amps[i] == cplx{}) {
      continue;
    }
    std::copy(src.begin(), src.end(), occ.begin());
    occ[static_cast<std::size_t>(mode)] = n - 1;
    out[basis.index_of(occ)] += amps[i] * std::sqrt(static_cast<double>(n));
  }
  return {state.basis_ptr(), std::move(out), state.truncation_error()};
}

double expectation(const OccupationState& state, const Eigen::MatrixXcd& op, const NumericalPolicy& policy) {
  const auto n = static_cast<Eigen::Index>(state.basis().size());
  if (op.rows() != n || op.cols() != n) {
    throw std::invalid_argument("expectation: operator dimension does not match the state");
  }
  const Eigen::Map<const Eigen::VectorXcd> psi(state.amplitudes().data(), n);
  const cplx value = psi.dot(op * psi);  // dot() conjugates the left operand
  if (std::abs(value.imag()) > policy.imag_tol) {
    throw Error(fmt::format("expectation: imaginary part {} exceeds tolerance; operator not hermitian?",
                            value.imag()));
  }
  return value.real();
}

double expectation(const OccupationState& state, const DiagonalOperator& op) {
  if (op.diagonal.size() != state.basis().size()) {
    throw std::invalid_argument("expectation: operator dimension does not match the state");
  }
  const auto amps = state.amplitudes();
  double acc = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    acc += op.diagonal[i] * std::norm(amps[i]);
  }
  return acc;
}

double poisson_tail(double mean, int cutoff) {
  if (mean < 0.0 || !std::isfinite(mean)) {
    throw std::invalid_argument("poisson_tail: mean must be finite and non-negative");
  }
  if (mean == 0.0) {
    return 0.0;
  }
  if (cutoff < 0) {
    return 1.0;
  }
  // Sum from N = cutoff + 1 upward; terms are computed in log space first to
  // avoid overflow of mean^N / N!.
  int n = cutoff + 1;
  double term = std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
  double sum = 0.0;
  for (int iter = 0; iter < 1'000'000; ++iter) {
    sum += term;
    ++n;
    term *= mean / n;
    if (n > mean + 1.0 && (term < 1e-18 * sum || term < 1e-300)) {
      break;
    }
  }
  return std::min(sum, 1.0);
}

OccupationState synthesize_coherent(std::span<const cplx> z, const BasisPtr& basis, const NumericalPolicy& policy) {
  if (z.size() != static_cast<std::size_t>(basis->mode_count())) {
    throw std::invalid_argument(fmt::format("synthesize_coherent: {} amplitudes for {} modes", z.size(),
                                            basis->mode_count()));
  }
  double mean = 0.0;
  for (const cplx& zj : z) {
    if (!std::isfinite(zj.real()) || !std::isfinite(zj.imag())) {
      throw std::invalid_argument("synthesize_coherent: non-finite amplitude");
    }
    mean += std::norm(zj);
  }
  const double tail = poisson_tail(mean, basis->cutoff());
  if (tail > policy.tail_tol) {
    int needed = basis->cutoff();
    while (poisson_tail(mean, needed) > policy.tail_tol) {
      ++needed;
    }
    throw TruncationError(fmt::format("synthesize_coherent: |z|^2 = {:.6g} leaves tail {:.3g} at cutoff {}; "
                                      "cutoff {} is required",
                                      mean, tail, basis->cutoff(), needed),
                          tail, needed);
  }

  const int modes = basis->mode_count();
  const int cutoff = basis->cutoff();
  // powers[j][m] = z_j^m / sqrt(m!)
  std::vector<std::vector<cplx>> powers(static_cast<std::size_t>(modes),
                                        std::vector<cplx>(static_cast<std::size_t>(cutoff) + 1));
  for (int j = 0; j < modes; ++j) {
    auto& p = powers[static_cast<std::size_t>(j)];
    p[0] = 1.0;
    for (int m = 1; m <= cutoff; ++m) {
      p[static_cast<std::size_t>(m)] = p[static_cast<std::size_t>(m - 1)] * z[static_cast<std::size_t>(j)] /
                                       std::sqrt(static_cast<double>(m));
    }
  }
  const double prefactor = std::exp(-0.5 * mean);
  std::vector<cplx> amps(basis->size());
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const auto occ = basis->occupation(i);
    cplx a = prefactor;
    for (int j = 0; j < modes; ++j) {
      a *= powers[static_cast<std::size_t>(j)][static_cast<std::size_t>(occ[static_cast<std::size_t>(j)])];
    }
    amps[i] = a;
  }
  return {basis, std::move(amps), tail};
}

OccupationState two_photon_state(const BasisPtr& basis) {
  if (basis->mode_count() != 4 || basis->cutoff() < 2) {
    throw std::invalid_argument("two_photon_state: needs 4 modes and cutoff >= 2");
  }
  const auto vac = OccupationState::vacuum(basis);
  const auto second = apply_creation(vac, 3) - apply_creation(vac, 1);
  return (apply_creation(second, 0) - apply_creation(second, 2)) * cplx(0.5);
}

}  // namespace bellsim
