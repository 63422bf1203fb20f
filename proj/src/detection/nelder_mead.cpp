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

#include "bellsim/detection/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bellsim {

NelderMeadResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& objective,
                                      std::vector<double> start, const NelderMeadOptions& options) {
  const std::size_t n = start.size();
  if (n == 0) {
    throw std::invalid_argument("nelder_mead_minimize: empty start point");
  }
  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    return objective(x);
  };

  std::vector<std::vector<double>> simplex(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) {
    simplex[i + 1][i] += options.initial_step;
  }
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    values[i] = eval(simplex[i]);
  }

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n);
  std::vector<double> trial(n);
  std::vector<double> trial2(n);
  auto along = [&](double t, std::vector<double>& out, const std::vector<double>& worst) {
    for (std::size_t k = 0; k < n; ++k) {
      out[k] = centroid[k] + t * (worst[k] - centroid[k]);
    }
  };

  while (result.evaluations < options.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    // stable: equal values keep vertex order, so runs are reproducible
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[n - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      double d = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        d = std::max(d, std::abs(simplex[i][k] - simplex[best][k]));
      }
      diameter = std::max(diameter, d);
    }
    if (diameter < options.x_tolerance || values[worst] - values[best] < options.f_tolerance) {
      result.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) {
        continue;
      }
      for (std::size_t k = 0; k < n; ++k) {
        centroid[k] += simplex[i][k] / static_cast<double>(n);
      }
    }

    along(-1.0, trial, simplex[worst]);
    const double reflected = eval(trial);
    if (reflected < values[best]) {
      along(-2.0, trial2, simplex[worst]);
      const double expanded = eval(trial2);
      if (expanded < reflected) {
        simplex[worst] = trial2;
        values[worst] = expanded;
      } else {
        simplex[worst] = trial;
        values[worst] = reflected;
      }
      continue;
    }
    if (reflected < values[second_worst]) {
      simplex[worst] = trial;
      values[worst] = reflected;
      continue;
    }
    // contraction: outside if the reflection helped at all, inside otherwise
    const bool outside = reflected < values[worst];
    along(outside ? -0.5 : 0.5, trial2, simplex[worst]);
    const double contracted = eval(trial2);
    if (contracted < (outside ? reflected : values[worst])) {
      simplex[worst] = trial2;
      values[worst] = contracted;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) {
        continue;
      }
      for (std::size_t k = 0; k < n; ++k) {
        simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
      }
      values[i] = eval(simplex[i]);
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  const auto best = static_cast<std::size_t>(best_it - values.begin());
  result.x = simplex[best];
  result.value = values[best];
  return result;
}

}  // namespace bellsim
