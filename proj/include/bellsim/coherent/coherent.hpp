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

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "bellsim/common.hpp"
#include "bellsim/detection/detection.hpp"
#include "bellsim/fock/state.hpp"
#include "bellsim/optics/linear_optics.hpp"

namespace bellsim {

/// Amplitudes (z1, z2, z3, z4) of a four-mode coherent state.
using CoherentAmplitudes = std::array<cplx, 4>;

/// Closed-form rates of a coherent state. With z' the polarizer-rotated
/// amplitudes, P(t1, t2) = (1 - e^{-|z'1|^2})(1 - e^{-|z'3|^2}); a removed
/// polarizer replaces |z'1|^2 by |z1|^2 + |z2|^2 (or |z'3|^2 by |z3|^2 + |z4|^2).
CoincidenceRates coherent_rates(const CoherentAmplitudes& z, double theta1, double theta2, Geometry geometry = {});

struct MixtureComponent {
  double weight;
  CoherentAmplitudes z;
};

/// Finite positive mixture of coherent states.
class ClassicalMixture {
 public:
  /// Requires at least one component, every weight > 0, finite amplitudes and
  /// weights summing to 1 within 1e-12.
  explicit ClassicalMixture(std::vector<MixtureComponent> components);
  static ClassicalMixture vacuum();
  static ClassicalMixture single(const CoherentAmplitudes& z);

  std::span<const MixtureComponent> components() const noexcept { return components_; }
  std::size_t size() const noexcept { return components_.size(); }

  /// Every component mapped z -> U z; weights are unchanged.
  ClassicalMixture transformed(const PassiveUnitary& u) const;

 private:
  std::vector<MixtureComponent> components_;
};

CoincidenceRates mixture_rates(const ClassicalMixture& mixture, double theta1, double theta2, Geometry geometry = {});

RateSource make_rate_source(const CoherentAmplitudes& z, Geometry geometry = {});
RateSource make_rate_source(const ClassicalMixture& mixture, Geometry geometry = {});

CoincidenceReport coherent_ch(const ClassicalMixture& mixture, const AngleSettings& angles, Geometry geometry = {},
                              const NumericalPolicy& policy = {});

/// 1..5 components, Re and Im of every amplitude uniform in [-bound, bound],
/// weights uniform on the simplex.
ClassicalMixture random_mixture(std::mt19937_64& rng, double bound = 2.0, int max_components = 5);

/// The same mixture as a Fock-space ensemble of truncated coherent states.
/// Throws TruncationError when a component does not fit the basis.
PureEnsemble to_fock(const ClassicalMixture& mixture, const BasisPtr& basis, const NumericalPolicy& policy = {});

/// splitmix64 step; used to derive independent per-trial seeds.
std::uint64_t splitmix64(std::uint64_t x);

struct ClassicalTrial {
  std::uint64_t seed = 0;
  /// Mixture after the random passive transformation.
  ClassicalMixture mixture = ClassicalMixture::vacuum();
  AngleSettings angles;
};

/// Trial `index` of a suite started from `seed`: random mixture, Haar U(4)
/// applied to it, four angles uniform in [0, pi).
ClassicalTrial make_classical_trial(std::uint64_t seed, int index, double bound = 2.0);

struct NonviolationOptions {
  double amplitude_bound = 2.0;
  Geometry geometry{};
  /// Allowed excess over either bound. Negative values make the suite fail
  /// on purpose (negative control).
  double tolerance = 1e-9;
};

struct NonviolationReport {
  int trials = 0;
  int failures = 0;
  int violated_verdicts = 0;
  /// Largest f seen (upper bound side).
  double worst_f = 0.0;
  /// Smallest f + P(., .) seen (lower bound side).
  double worst_lower_margin = 0.0;
  /// Seed and index of the first failing trial, for reproduction.
  std::uint64_t failing_seed = 0;
  int failing_index = -1;

  bool passed() const { return failures == 0 && violated_verdicts == 0; }
};

/// Checks -P(., .) - tol <= f <= tol on random classical mixtures.
NonviolationReport classical_nonviolation_suite(std::uint64_t seed, int trials, const NonviolationOptions& options = {},
                                                const NumericalPolicy& policy = {});

}  // namespace bellsim
