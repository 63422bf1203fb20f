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

#include <cstdlib>
#include <string>

#include "bellsim/simd/kernels.hpp"

namespace bellsim::simd {
namespace {

bool cpu_has_avx2() {
#if defined(BELLSIM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select() {
  if (const char* forced = std::getenv("BELLSIM_SIMD")) {
    if (std::string(forced) == "scalar") {
      return scalar_kernels();
    }
  }
  return backend_available(Backend::avx2) ? kernels_for(Backend::avx2) : scalar_kernels();
}

}  // namespace

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return true;
    case Backend::avx2: {
      static const bool available = cpu_has_avx2();
      return available;
    }
  }
  return false;
}

const KernelTable& kernels_for(Backend backend) {
  if (!backend_available(backend)) {
    throw Error("SIMD backend not available on this CPU: " + std::string(backend_name(backend)));
  }
#if defined(BELLSIM_HAVE_AVX2)
  if (backend == Backend::avx2) {
    return avx2_kernels();
  }
#endif
  return scalar_kernels();
}

const KernelTable& kernels() {
  static const KernelTable& table = select();
  return table;
}

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace bellsim::simd
