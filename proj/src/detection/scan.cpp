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

#include "bellsim/detection/scan.hpp"

#include <fmt/format.h>

#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellsim/util/parallel.hpp"

namespace bellsim {

ScanObjective parse_scan_objective(std::string_view name) {
  if (name == "upper") {
    return ScanObjective::upper;
  }
  if (name == "lower") {
    return ScanObjective::lower;
  }
  if (name == "either") {
    return ScanObjective::either;
  }
  throw std::invalid_argument(fmt::format("unknown scan objective '{}' (upper|lower|either)", name));
}

std::string_view scan_objective_name(ScanObjective objective) {
  switch (objective) {
    case ScanObjective::upper:
      return "upper";
    case ScanObjective::lower:
      return "lower";
    case ScanObjective::either:
      return "either";
  }
  return "unknown";
}

double scan_value(const CoincidenceReport& report, ScanObjective objective) {
  switch (objective) {
    case ScanObjective::upper:
      return report.f;
    case ScanObjective::lower:
      return -report.lower_margin;
    case ScanObjective::either:
      return report.excess();
  }
  return report.f;
}

ScanResult angle_scan(const RateSource& source, const ScanOptions& options, const NumericalPolicy& policy) {
  if (options.grid < 2) {
    throw std::invalid_argument("angle_scan: grid density must be >= 2");
  }
  const auto g = static_cast<std::size_t>(options.grid);
  std::vector<double> axis(g);
  for (std::size_t k = 0; k < g; ++k) {
    axis[k] = static_cast<double>(k) * std::numbers::pi / static_cast<double>(g);
  }

  std::vector<CoincidenceRates> table(g * g);
  parallel_for(g * g, [&](std::size_t idx) { table[idx] = source.rates(axis[idx / g], axis[idx % g]); });
  const auto at = [&](std::size_t a, std::size_t b) -> const CoincidenceRates& { return table[a * g + b]; };

  // Same assembly as ch_functional so a grid point reproduces its report.
  // Values within tie_tolerance count as equal so rounding cannot reorder
  // symmetric optima.
  constexpr double tie_tolerance = 1e-12;
  double best_value = 0.0;
  bool have_best = false;
  std::size_t bi = 0, bj = 0, bk = 0, bl = 0;
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      const CoincidenceRates& r11 = at(i, j);
      for (std::size_t k = 0; k < g; ++k) {
        const CoincidenceRates& r21 = at(k, j);
        for (std::size_t l = 0; l < g; ++l) {
          const double f = r11.both - at(i, l).both + r21.both + at(k, l).both - r21.first_only - r11.second_only;
          double value = f;
          switch (options.objective) {
            case ScanObjective::upper:
              break;
            case ScanObjective::lower:
              value = -(f + r11.none);
              break;
            case ScanObjective::either:
              value = std::max(f, -(f + r11.none));
              break;
          }
          if (!have_best || value > best_value + tie_tolerance) {
            have_best = true;
            best_value = value;
            bi = i;
            bj = j;
            bk = k;
            bl = l;
          }
        }
      }
    }
  }

  ScanResult result;
  result.rate_evaluations = g * g;
  result.report = ch_functional(source, {axis[bi], axis[bj], axis[bk], axis[bl]}, policy);
  result.grid_objective = scan_value(result.report, options.objective);
  result.objective = result.grid_objective;

  if (options.refine) {
    NelderMeadOptions simplex = options.simplex;
    simplex.initial_step = std::numbers::pi / (2.0 * static_cast<double>(g));
    const auto objective = [&](std::span<const double> x) {
      return -scan_value(ch_functional(source, {x[0], x[1], x[2], x[3]}, policy), options.objective);
    };
    const NelderMeadResult nm =
        nelder_mead_minimize(objective, {axis[bi], axis[bj], axis[bk], axis[bl]}, simplex);
    result.refine_evaluations = nm.evaluations;
    result.rate_evaluations += static_cast<std::size_t>(nm.evaluations) * 4;
    if (-nm.value > result.objective) {
      result.report = ch_functional(source, {nm.x[0], nm.x[1], nm.x[2], nm.x[3]}, policy);
      result.objective = scan_value(result.report, options.objective);
    }
  }
  return result;
}

}  // namespace bellsim
