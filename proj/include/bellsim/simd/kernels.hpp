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

// Data-parallel inner loops of the Fock engine. Every kernel has a scalar
// reference version and, on x86-64, an AVX2/FMA version. The variant is picked
// once at runtime from CPUID; BELLSIM_SIMD=scalar forces the reference path.

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "bellsim/common.hpp"

namespace bellsim::simd {

enum class Backend { scalar, avx2 };

struct KernelTable {
  Backend backend;
  /// sum_i |x_i|^2
  double (*sum_norm_sq)(const cplx* x, std::size_t n);
  /// sum_i |x[idx_i]|^2
  double (*sum_norm_sq_indexed)(const cplx* x, const std::uint32_t* idx, std::size_t n);
  /// y_i += a * x_i
  void (*caxpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  /// sum_i conj(x_i) * y_i
  cplx (*cdotc)(const cplx* x, const cplx* y, std::size_t n);
};

const KernelTable& scalar_kernels();
#if defined(BELLSIM_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif

bool backend_available(Backend backend);
const KernelTable& kernels_for(Backend backend);

/// The table selected for this process.
const KernelTable& kernels();

std::string_view backend_name(Backend backend);

}  // namespace bellsim::simd
