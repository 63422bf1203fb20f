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

#include "bellsim/optics/linear_optics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bellsim/simd/kernels.hpp"

namespace bellsim {
namespace {

double unitarity_defect(const Eigen::MatrixXcd& m) {
  const auto n = m.rows();
  return (m.adjoint() * m - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

// Column-major (N+1) x (N+1) shell matrices T^(N) for N = 0..cutoff: entry
// (m, k) is the amplitude of |n_a = m, n_b = N - m> produced from
// |n_a = k, n_b = N - k>. Built by the creation-operator recursion, which
// stays well conditioned at large N where the closed binomial sum cancels.
std::vector<std::vector<cplx>> shell_matrices(const Eigen::Matrix2cd& b, int cutoff) {
  std::vector<std::vector<cplx>> shells(static_cast<std::size_t>(cutoff) + 1);
  shells[0] = {cplx(1.0)};
  for (int n = 1; n <= cutoff; ++n) {
    const auto dim = static_cast<std::size_t>(n) + 1;
    const auto prev_dim = static_cast<std::size_t>(n);
    const auto& prev = shells[static_cast<std::size_t>(n) - 1];
    auto& cur = shells[static_cast<std::size_t>(n)];
    cur.assign(dim * dim, cplx{});
    for (std::size_t k = 0; k < dim; ++k) {
      // New column k comes from previous column k-1 by a transformed a_a^+,
      // except column 0 which comes from previous column 0 by a transformed a_b^+.
      const std::size_t src_col = (k == 0) ? 0 : k - 1;
      const cplx ca = (k == 0) ? b(0, 1) : b(0, 0);
      const cplx cb = (k == 0) ? b(1, 1) : b(1, 0);
      const double norm = 1.0 / std::sqrt(static_cast<double>(k == 0 ? n : static_cast<int>(k)));
      cplx* out = cur.data() + k * dim;
      const cplx* in = prev.data() + src_col * prev_dim;
      for (std::size_t m = 0; m < prev_dim; ++m) {
        if (in[m] == cplx{}) {
          continue;
        }
        // a_a^+ : m -> m + 1 with sqrt(m + 1); a_b^+ : n_b = n-1-m -> n-m with sqrt(n - m)
        out[m + 1] += ca * in[m] * (std::sqrt(static_cast<double>(m + 1)) * norm);
        out[m] += cb * in[m] * (std::sqrt(static_cast<double>(static_cast<std::size_t>(n) - m)) * norm);
      }
    }
  }
  return shells;
}

void transform_pair(const FockBasis& basis, int mode_a, int mode_b, const Eigen::Matrix2cd& block,
                    std::vector<cplx>& amps) {
  const auto shells = shell_matrices(block, basis.cutoff());
  const auto& k = simd::kernels();
  std::vector<int> occ(static_cast<std::size_t>(basis.mode_count()));
  std::vector<std::size_t> members;
  std::vector<cplx> in;
  std::vector<cplx> out;
  const auto a = static_cast<std::size_t>(mode_a);
  const auto b = static_cast<std::size_t>(mode_b);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto src = basis.occupation(i);
    if (src[a] != 0) {
      continue;  // each group is visited once, from its n_a = 0 member
    }
    const int total = src[b];
    if (total == 0) {
      continue;  // the vacuum of the pair is invariant
    }
    const auto dim = static_cast<std::size_t>(total) + 1;
    std::copy(src.begin(), src.end(), occ.begin());
    members.resize(dim);
    in.resize(dim);
    bool any = false;
    for (std::size_t m = 0; m < dim; ++m) {
      occ[a] = static_cast<int>(m);
      occ[b] = total - static_cast<int>(m);
      members[m] = basis.index_of(occ);
      in[m] = amps[members[m]];
      any = any || in[m] != cplx{};
    }
    if (!any) {
      continue;
    }
    out.assign(dim, cplx{});
    const auto& t = shells[static_cast<std::size_t>(total)];
    for (std::size_t col = 0; col < dim; ++col) {
      if (in[col] != cplx{}) {
        k.caxpy(in[col], t.data() + col * dim, out.data(), dim);
      }
    }
    for (std::size_t m = 0; m < dim; ++m) {
      amps[members[m]] = out[m];
    }
  }
}

void apply_phases(const FockBasis& basis, const std::vector<double>& phases, std::vector<cplx>& amps) {
  bool trivial = true;
  for (double p : phases) {
    trivial = trivial && p == 0.0;
  }
  if (trivial) {
    return;
  }
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto occ = basis.occupation(i);
    double angle = 0.0;
    for (std::size_t j = 0; j < phases.size(); ++j) {
      angle += phases[j] * occ[j];
    }
    if (angle != 0.0) {
      amps[i] *= std::polar(1.0, angle);
    }
  }
}

void transform(const FockBasis& basis, const PassiveDecomposition& dec, std::vector<cplx>& amps) {
  apply_phases(basis, dec.phases, amps);
  for (auto it = dec.mixers.rbegin(); it != dec.mixers.rend(); ++it) {
    transform_pair(basis, it->mode_a, it->mode_b, it->block(), amps);
  }
}

bool is_exact_identity(const Eigen::MatrixXcd& m) {
  return m == Eigen::MatrixXcd::Identity(m.rows(), m.cols());
}

}  // namespace

PassiveUnitary::PassiveUnitary(Eigen::MatrixXcd matrix, const NumericalPolicy& policy) : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw std::invalid_argument("PassiveUnitary: matrix must be square and non-empty");
  }
  if (!matrix_.allFinite()) {
    throw std::invalid_argument("PassiveUnitary: non-finite entries");
  }
  const double defect = unitarity_defect(matrix_);
  if (defect > policy.unitary_tol) {
    throw std::invalid_argument(fmt::format("PassiveUnitary: not unitary (max |U^+U - I| = {:.3g})", defect));
  }
}

PassiveUnitary PassiveUnitary::identity(int modes) { return PassiveUnitary(Eigen::MatrixXcd::Identity(modes, modes)); }

PassiveUnitary PassiveUnitary::adjoint() const { return PassiveUnitary(matrix_.adjoint()); }

PassiveUnitary PassiveUnitary::operator*(const PassiveUnitary& rhs) const {
  if (rhs.mode_count() != mode_count()) {
    throw std::invalid_argument("PassiveUnitary: mode count mismatch in composition");
  }
  return PassiveUnitary(matrix_ * rhs.matrix_);
}

Eigen::Matrix2cd Mixer::block() const {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2cd m;
  m << c, -std::polar(s, phi), std::polar(s, -phi), c;
  return m;
}

Eigen::MatrixXcd PassiveDecomposition::recompose() const {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(mode_count, mode_count);
  for (const auto& mixer : mixers) {
    const Eigen::Matrix2cd b = mixer.block();
    // right-multiply by the embedded block: mixes columns a and b
    const Eigen::VectorXcd col_a = u.col(mixer.mode_a);
    const Eigen::VectorXcd col_b = u.col(mixer.mode_b);
    u.col(mixer.mode_a) = col_a * b(0, 0) + col_b * b(1, 0);
    u.col(mixer.mode_b) = col_a * b(0, 1) + col_b * b(1, 1);
  }
  for (int j = 0; j < mode_count; ++j) {
    u.col(j) *= std::polar(1.0, phases[static_cast<std::size_t>(j)]);
  }
  return u;
}

PassiveDecomposition decompose_passive(const PassiveUnitary& u) {
  const int n = u.mode_count();
  PassiveDecomposition dec;
  dec.mode_count = n;
  Eigen::MatrixXcd w = u.matrix();
  for (int c = 0; c + 1 < n; ++c) {
    for (int r = n - 1; r > c; --r) {
      const cplx a = w(r - 1, c);
      const cplx b = w(r, c);
      if (b == cplx{}) {
        continue;
      }
      Mixer mixer{r - 1, r, std::atan2(std::abs(b), std::abs(a)), std::arg(a) - std::arg(b)};
      // w <- M^+ w on rows (r-1, r), which zeroes w(r, c)
      const Eigen::Matrix2cd inv = mixer.block().adjoint();
      const Eigen::RowVectorXcd row_a = w.row(r - 1);
      const Eigen::RowVectorXcd row_b = w.row(r);
      w.row(r - 1) = inv(0, 0) * row_a + inv(0, 1) * row_b;
      w.row(r) = inv(1, 0) * row_a + inv(1, 1) * row_b;
      w(r, c) = 0.0;
      if (mixer.theta != 0.0) {
        dec.mixers.push_back(mixer);
      }
    }
  }
  dec.phases.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    dec.phases[static_cast<std::size_t>(j)] = std::arg(w(j, j));
  }
  return dec;
}

OccupationState apply_passive(const OccupationState& state, const PassiveUnitary& u) {
  if (u.mode_count() != state.mode_count()) {
    throw std::invalid_argument(fmt::format("apply_passive: {}-mode unitary on a {}-mode state", u.mode_count(),
                                            state.mode_count()));
  }
  std::vector<cplx> amps(state.amplitudes().begin(), state.amplitudes().end());
  if (!is_exact_identity(u.matrix())) {
    transform(state.basis(), decompose_passive(u), amps);
  }
  return {state.basis_ptr(), std::move(amps), state.truncation_error()};
}

OccupationState apply_mode_pair(const OccupationState& state, int mode_a, int mode_b, const Eigen::Matrix2cd& block) {
  const int n = state.mode_count();
  if (mode_a == mode_b || mode_a < 0 || mode_b < 0 || mode_a >= n || mode_b >= n) {
    throw std::invalid_argument("apply_mode_pair: need two distinct modes in range");
  }
  if ((block.adjoint() * block - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > NumericalPolicy{}.unitary_tol) {
    throw std::invalid_argument("apply_mode_pair: block is not unitary");
  }
  std::vector<cplx> amps(state.amplitudes().begin(), state.amplitudes().end());
  transform_pair(state.basis(), mode_a, mode_b, block, amps);
  return {state.basis_ptr(), std::move(amps), state.truncation_error()};
}

DensityOperator apply_passive(const DensityOperator& rho, const PassiveUnitary& u, const NumericalPolicy& policy) {
  if (u.mode_count() != rho.mode_count()) {
    throw std::invalid_argument(fmt::format("apply_passive: {}-mode unitary on a {}-mode state", u.mode_count(),
                                            rho.mode_count()));
  }
  if (is_exact_identity(u.matrix())) {
    return rho;
  }
  const auto dec = decompose_passive(u);
  const auto d = rho.matrix().rows();
  // W rho W^+ = (W (W rho)^+)^+ with W acting on columns.
  auto transform_columns = [&](Eigen::MatrixXcd m) {
    std::vector<cplx> col(static_cast<std::size_t>(d));
    for (Eigen::Index c = 0; c < d; ++c) {
      Eigen::Map<Eigen::VectorXcd>(col.data(), d) = m.col(c);
      transform(rho.basis(), dec, col);
      m.col(c) = Eigen::Map<const Eigen::VectorXcd>(col.data(), d);
    }
    return m;
  };
  Eigen::MatrixXcd half = transform_columns(rho.matrix());
  Eigen::MatrixXcd full = transform_columns(half.adjoint()).adjoint();
  // Remove rounding asymmetry so the hermiticity check measures the state,
  // not the arithmetic.
  Eigen::MatrixXcd sym = 0.5 * (full + full.adjoint());
  return {rho.basis_ptr(), std::move(sym), rho.truncation_error(), policy};
}

PureEnsemble apply_passive(const PureEnsemble& ensemble, const PassiveUnitary& u) {
  std::vector<WeightedState> members;
  members.reserve(ensemble.members().size());
  for (const auto& m : ensemble.members()) {
    members.push_back({m.weight, apply_passive(m.state, u)});
  }
  return PureEnsemble(std::move(members));
}

PassiveUnitary polarizer_rotation(double theta, int i, int j, int n) {
  if (i == j || i < 0 || j < 0 || i >= n || j >= n) {
    throw std::invalid_argument("polarizer_rotation: need two distinct modes in range");
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  m(i, i) = c;
  m(i, j) = -s;
  m(j, i) = s;
  m(j, j) = c;
  return PassiveUnitary(std::move(m));
}

PassiveUnitary passive_from_generator(const Eigen::MatrixXcd& h, const NumericalPolicy& policy) {
  if (h.rows() != h.cols() || (h - h.adjoint()).cwiseAbs().maxCoeff() > policy.hermitian_tol) {
    throw std::invalid_argument("passive_from_generator: generator must be hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  const Eigen::VectorXcd phases =
      solver.eigenvalues().unaryExpr([](double lambda) { return std::polar(1.0, lambda); });
  return PassiveUnitary(solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint(), policy);
}

PassiveUnitary maximal_entangler() {
  Eigen::Matrix2d y;
  y << 1, 1, -1, 1;
  Eigen::Matrix4d x;
  x << y, y, -y, y;
  return PassiveUnitary((0.5 * x).cast<cplx>());
}

PassiveUnitary haar_unitary(int modes, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd z(modes, modes);
  for (int r = 0; r < modes; ++r) {
    for (int c = 0; c < modes; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(r, c) = cplx(re, im);
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(modes, modes);
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (int j = 0; j < modes; ++j) {
    const cplx d = r(j, j);
    q.col(j) *= (std::abs(d) > 0.0) ? d / std::abs(d) : cplx(1.0);
  }
  return PassiveUnitary(std::move(q));
}

double squeezed_vacuum_amplitude(double u, int m) {
  if (m < 0) {
    throw std::invalid_argument("squeezed_vacuum_amplitude: m must be >= 0");
  }
  double a = 1.0 / std::sqrt(std::cosh(u));
  const double t = -std::tanh(u);
  for (int k = 1; k <= m; ++k) {
    a *= t * std::sqrt((2.0 * k - 1.0) / (2.0 * k));
  }
  return a;
}

OccupationState apply_single_mode_squeeze(const OccupationState& state, int mode, double u, double max_tail) {
  const FockBasis& basis = state.basis();
  if (mode < 0 || mode >= basis.mode_count()) {
    throw std::out_of_range("apply_single_mode_squeeze: mode out of range");
  }
  if (!std::isfinite(u) || std::abs(u) > 5.0) {
    throw std::invalid_argument("apply_single_mode_squeeze: |u| must be finite and <= 5");
  }
  const auto mode_idx = static_cast<std::size_t>(mode);
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis.occupation(i)[mode_idx] != 0 && amps[i] != cplx{}) {
      throw std::invalid_argument("apply_single_mode_squeeze: the squeezed mode must be in vacuum");
    }
  }
  if (u == 0.0) {
    return state;
  }

  const int cutoff = basis.cutoff();
  const int max_pairs = cutoff / 2;
  std::vector<double> coeff(static_cast<std::size_t>(max_pairs) + 1);
  for (int m = 0; m <= max_pairs; ++m) {
    coeff[static_cast<std::size_t>(m)] = squeezed_vacuum_amplitude(u, m);
  }
  // suffix[k] = sum_{m >= k} |c_m|^2, summed from far beyond the cutoff down.
  const double t2 = std::tanh(u) * std::tanh(u);
  std::vector<double> suffix(static_cast<std::size_t>(max_pairs) + 2, 0.0);
  {
    double w = coeff[static_cast<std::size_t>(max_pairs)] * coeff[static_cast<std::size_t>(max_pairs)];
    std::vector<double> beyond;
    int m = max_pairs;
    while (true) {
      ++m;
      w *= t2 * (2.0 * m - 1.0) / (2.0 * m);
      beyond.push_back(w);
      if (w < 1e-30 || w / (1.0 - t2) < 1e-25 || m > 10'000'000) {
        break;
      }
    }
    double acc = 0.0;
    for (auto it = beyond.rbegin(); it != beyond.rend(); ++it) {
      acc += *it;
    }
    suffix[static_cast<std::size_t>(max_pairs) + 1] = acc;
    for (int k = max_pairs; k >= 0; --k) {
      acc += coeff[static_cast<std::size_t>(k)] * coeff[static_cast<std::size_t>(k)];
      suffix[static_cast<std::size_t>(k)] = acc;
    }
  }

  std::vector<cplx> out(basis.size(), cplx{});
  std::vector<int> occ(static_cast<std::size_t>(basis.mode_count()));
  double dropped = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (amps[i] == cplx{}) {
      continue;
    }
    const auto src = basis.occupation(i);
    std::copy(src.begin(), src.end(), occ.begin());
    const int room = (cutoff - basis.total(i)) / 2;
    for (int m = 0; m <= room; ++m) {
      occ[mode_idx] = 2 * m;
      out[basis.index_of(occ)] += amps[i] * coeff[static_cast<std::size_t>(m)];
    }
    dropped += std::norm(amps[i]) * suffix[static_cast<std::size_t>(room) + 1];
  }
  if (dropped > max_tail) {
    // Hint: enough room for the squeezed pairs on top of the most occupied
    // input component.
    int occupied = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (amps[i] != cplx{}) {
        occupied = std::max(occupied, basis.total(i));
      }
    }
    int pairs = 0;
    double tail = 1.0;
    double w = 1.0 / std::cosh(u);
    tail -= w;
    while (tail > max_tail && pairs < 1'000'000) {
      ++pairs;
      w *= t2 * (2.0 * pairs - 1.0) / (2.0 * pairs);
      tail -= w;
    }
    throw TruncationError(fmt::format("apply_single_mode_squeeze: u = {:.6g} drops weight {:.3g} at cutoff {}; "
                                      "cutoff {} is required",
                                      u, dropped, cutoff, occupied + 2 * pairs),
                          dropped, occupied + 2 * pairs);
  }
  return {state.basis_ptr(), std::move(out), state.truncation_error() + dropped};
}

}  // namespace bellsim
