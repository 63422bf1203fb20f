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

#include <cstddef>
#include <string_view>

#include "bellsim/detection/detection.hpp"
#include "bellsim/detection/nelder_mead.hpp"

namespace bellsim {

/// What the scan maximizes: f (upper bound side), -(f + P(.,.)) (lower bound
/// side), or the larger of the two.
enum class ScanObjective { upper, lower, either };

ScanObjective parse_scan_objective(std::string_view name);
std::string_view scan_objective_name(ScanObjective objective);

struct ScanOptions {
  /// Angles k * pi / grid for k = 0 .. grid-1 on each of the four axes.
  int grid = 16;
  bool refine = true;
  ScanObjective objective = ScanObjective::upper;
  NelderMeadOptions simplex{};
};

struct ScanResult {
  CoincidenceReport report;
  double objective = 0.0;
  /// Best value on the grid alone, before refinement.
  double grid_objective = 0.0;
  std::size_t rate_evaluations = 0;
  int refine_evaluations = 0;
};

/// Objective value of a report under the chosen side.
double scan_value(const CoincidenceReport& report, ScanObjective objective);

/// Exhaustive grid over [0, pi)^4 followed by optional simplex refinement from
/// the best grid point. Only grid^2 rate evaluations are needed: f at every
/// grid point is assembled from a table of P(a, b). Ties are broken towards
/// the lexicographically smallest angle tuple (values within 1e-12 tie).
ScanResult angle_scan(const RateSource& source, const ScanOptions& options = {}, const NumericalPolicy& policy = {});

}  // namespace bellsim
