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

// Compiled with -mavx2 -mfma. Only reached after a CPUID check.

#include <immintrin.h>

#include "bellsim/simd/kernels.hpp"

namespace bellsim::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// A complex<double> array viewed as doubles: [re0, im0, re1, im1, ...].
inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

double sum_norm_sq(const cplx* x, std::size_t n) {
  const double* d = as_doubles(x);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(d + 2 * i);
    const __m256d b = _mm256_loadu_pd(d + 2 * i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return acc;
}

double sum_norm_sq_indexed(const cplx* x, const std::uint32_t* idx, std::size_t n) {
  const double* d = as_doubles(x);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu2_m128d(d + 2 * std::size_t{idx[i + 1]}, d + 2 * std::size_t{idx[i]});
    const __m256d b = _mm256_loadu2_m128d(d + 2 * std::size_t{idx[i + 3]}, d + 2 * std::size_t{idx[i + 2]});
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const cplx& v = x[idx[i]];
    acc += v.real() * v.real() + v.imag() * v.imag();
  }
  return acc;
}

void caxpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d xs = _mm256_permute_pd(xv, 0b0101);
    // even lanes: ar*xr - ai*xi, odd lanes: ar*xi + ai*xr
    const __m256d prod = _mm256_fmaddsub_pd(ar, xv, _mm256_mul_pd(ai, xs));
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * i), prod));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    y[i] = cplx(y[i].real() + (a.real() * xr - a.imag() * xi),
                y[i].imag() + (a.real() * xi + a.imag() * xr));
  }
}

cplx cdotc(const cplx* x, const cplx* y, std::size_t n) {
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  __m256d re = _mm256_setzero_pd();
  __m256d im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    re = _mm256_fmadd_pd(xv, yv, re);
    im = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), im);
  }
  // im holds [xr*yi, xi*yr, ...]; the imaginary part is even minus odd lanes.
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, im);
  double out_re = hsum(re);
  double out_im = (lanes[0] - lanes[1]) + (lanes[2] - lanes[3]);
  for (; i < n; ++i) {
    out_re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    out_im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {out_re, out_im};
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{Backend::avx2, &sum_norm_sq, &sum_norm_sq_indexed, &caxpy, &cdotc};
  return table;
}

}  // namespace bellsim::simd
