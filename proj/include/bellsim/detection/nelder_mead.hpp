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

#include <functional>
#include <span>
#include <vector>

namespace bellsim {

struct NelderMeadOptions {
  double initial_step = 0.1;
  int max_evaluations = 4000;
  /// Stop when the simplex diameter falls below this.
  double x_tolerance = 1e-10;
  /// ... or the spread of vertex values falls below this.
  double f_tolerance = 1e-15;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Derivative-free downhill simplex minimization (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2). Deterministic for a given start point.
NelderMeadResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& objective,
                                      std::vector<double> start, const NelderMeadOptions& options = {});

}  // namespace bellsim
