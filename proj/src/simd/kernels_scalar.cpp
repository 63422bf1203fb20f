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

#include "bellsim/simd/kernels.hpp"

namespace bellsim::simd {
namespace {

double sum_norm_sq(const cplx* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return acc;
}

double sum_norm_sq_indexed(const cplx* x, const std::uint32_t* idx, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx& v = x[idx[i]];
    acc += v.real() * v.real() + v.imag() * v.imag();
  }
  return acc;
}

void caxpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double ar = a.real();
  const double ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    y[i] = cplx(y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr));
  }
}

cplx cdotc(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Backend::scalar, &sum_norm_sq, &sum_norm_sq_indexed, &caxpy, &cdotc};
  return table;
}

}  // namespace bellsim::simd
