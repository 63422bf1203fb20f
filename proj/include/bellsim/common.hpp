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

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace bellsim {

using cplx = std::complex<double>;

/// Tolerances and size limits shared by every engine. One record so a run
/// can be reproduced from its configuration alone.
struct NumericalPolicy {
  double norm_tol = 1e-10;
  double hermitian_tol = 1e-10;
  double trace_tol = 1e-10;
  double psd_tol = 1e-9;
  double unitary_tol = 1e-10;
  double symplectic_tol = 1e-10;
  double imag_tol = 1e-10;
  /// Largest discarded squared weight a truncating operation may drop.
  double tail_tol = 1e-8;
  /// Base tolerance of the violation verdict (truncation tail is added).
  double verdict_tol = 1e-9;
  double uncertainty_tol = 1e-9;
  double squeeze_margin = 1e-12;
  std::size_t max_dimension = 2'000'000;
  /// Dense D x D matrices above this size are refused.
  std::size_t max_dense_dimension = 6'000;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A truncating operation would discard more weight than the policy allows.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double tail, int required_cutoff)
      : Error(what), tail_(tail), required_cutoff_(required_cutoff) {}

  double tail() const noexcept { return tail_; }
  /// Smallest cutoff that would satisfy the bound, or -1 if unknown.
  int required_cutoff() const noexcept { return required_cutoff_; }

 private:
  double tail_;
  int required_cutoff_;
};

}  // namespace bellsim
