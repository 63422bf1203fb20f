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
#include <string_view>

#include "bellsim/common.hpp"
#include "bellsim/fock/state.hpp"
#include "bellsim/optics/linear_optics.hpp"

namespace bellsim {

// Mode layout used throughout: beam k carries modes 0 and 1 (x, y), beam k'
// carries modes 2 and 3 (x', y'). Detector D1 watches beam k, D2 beam k'.

/// Polarizer angles (theta1, theta2, theta1', theta2') in radians.
struct AngleSettings {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta1p = 0.0;
  double theta2p = 0.0;

  /// Same settings with every angle mapped onto [0, pi).
  AngleSettings canonical() const;
};

/// Orientation convention of the second polarizer. By default both polarizer
/// angles rotate in the same sense, (z3, z4) -> R(theta2) (z3, z4). With
/// mirror_second_beam the angle of the k' polarizer is measured the other way
/// round, i.e. R(-theta2) is used.
struct Geometry {
  bool mirror_second_beam = false;
};

/// Which polarizers are in place; a removed polarizer lets the whole beam
/// reach its detector.
struct Polarizers {
  bool first = true;
  bool second = true;
};

/// P(theta1, theta2), P(theta1, .), P(., theta2), P(., .).
struct CoincidenceRates {
  double both = 0.0;
  double first_only = 0.0;
  double second_only = 0.0;
  double none = 0.0;

  double select(Polarizers p) const;
};

enum class Verdict { not_violated, violated, inconclusive };
std::string_view verdict_name(Verdict v);

struct CoincidenceReport {
  AngleSettings angles;
  double p_t1_t2 = 0.0;     // P(theta1, theta2)
  double p_t1_t2p = 0.0;    // P(theta1, theta2')
  double p_t1p_t2 = 0.0;    // P(theta1', theta2)
  double p_t1p_t2p = 0.0;   // P(theta1', theta2')
  double p_t1_none = 0.0;   // P(theta1, .)
  double p_t1p_none = 0.0;  // P(theta1', .)
  double p_none_t2 = 0.0;   // P(., theta2)
  double p_none_none = 0.0; // P(., .)
  double f = 0.0;
  /// f + P(., .); negative means the lower bound is violated.
  double lower_margin = 0.0;
  /// -f; negative means the upper bound is violated.
  double upper_margin = 0.0;
  /// Truncation error carried by every probability.
  double error_bar = 0.0;
  Verdict verdict = Verdict::not_violated;

  /// Amount by which the worse of the two bounds is exceeded (<= 0 if both hold).
  double excess() const { return std::max(-lower_margin, -upper_margin); }
};

/// Coincidence rates as a function of the two polarizer angles, plus the
/// error bar of every rate. All engines funnel through this so the scan,
/// verdict and report code is shared. The callable must be thread-safe.
struct RateSource {
  std::function<CoincidenceRates(double theta1, double theta2)> rates;
  double error_bar = 0.0;
};

/// Block-diagonal rotation R(theta1) on modes (0, 1) and R(+-theta2) on (2, 3).
PassiveUnitary beam_rotation(double theta1, double theta2, Geometry geometry = {});

/// Output state of a polarizer at theta: rotate the two-mode input so mode 0
/// is the transmitted polarization, then trace out the orthogonal mode.
DensityOperator polarizer_apply(const DensityOperator& rho, double theta, const NumericalPolicy& policy = {});

/// 1 - <vacuum projector on `modes`>, the probability of at least one photon
/// in the given modes.
double prob_at_least_one(const DensityOperator& rho, std::span<const int> modes);
double prob_at_least_one(const OccupationState& state, std::span<const int> modes);
double prob_at_least_one(const PureEnsemble& ensemble, std::span<const int> modes);

/// All four coincidence rates of a 4-mode state. Each product <A1 A2> is
/// evaluated as norm - q1 - q2 + q12 from vacuum probabilities of the
/// rotated detected modes, so detection operators are never materialized.
CoincidenceRates coincidence_rates(const OccupationState& state, double theta1, double theta2,
                                   Geometry geometry = {});
CoincidenceRates coincidence_rates(const PureEnsemble& ensemble, double theta1, double theta2,
                                   Geometry geometry = {});
CoincidenceRates coincidence_rates(const DensityOperator& rho, double theta1, double theta2,
                                   Geometry geometry = {});

double coincidence_rate(const OccupationState& state, double theta1, double theta2, Polarizers polarizers,
                        Geometry geometry = {});

RateSource make_rate_source(const OccupationState& state, Geometry geometry = {});
RateSource make_rate_source(const PureEnsemble& ensemble, Geometry geometry = {});
RateSource make_rate_source(const DensityOperator& rho, Geometry geometry = {});

/// f = P(t1,t2) - P(t1,t2') + P(t1',t2) + P(t1',t2') - P(t1',.) - P(.,t2)
/// with both Clauser-Horne margins and a verdict.
CoincidenceReport ch_functional(const RateSource& source, const AngleSettings& angles,
                                const NumericalPolicy& policy = {});
CoincidenceReport ch_functional(const OccupationState& state, const AngleSettings& angles, Geometry geometry = {},
                                const NumericalPolicy& policy = {});
CoincidenceReport ch_functional(const PureEnsemble& ensemble, const AngleSettings& angles, Geometry geometry = {},
                                const NumericalPolicy& policy = {});
CoincidenceReport ch_functional(const DensityOperator& rho, const AngleSettings& angles, Geometry geometry = {},
                                const NumericalPolicy& policy = {});

/// Verdict for a functional value: violated when a bound is exceeded by more
/// than verdict_tol + error_bar, inconclusive when the excess is above
/// verdict_tol but within the truncation error bar.
Verdict classify(double f, double p_none_none, double error_bar, const NumericalPolicy& policy = {});

}  // namespace bellsim
