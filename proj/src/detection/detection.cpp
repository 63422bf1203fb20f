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

#include "bellsim/detection/detection.hpp"

#include <fmt/format.h>

#include <array>
#include <memory>
#include <stdexcept>

#include "bellsim/simd/kernels.hpp"
#include "bellsim/util/angles.hpp"

namespace bellsim {
namespace {

Eigen::Matrix2cd rotation_block(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2cd m;
  m << c, -s, s, c;
  return m;
}

double second_angle(double theta2, Geometry geometry) { return geometry.mirror_second_beam ? -theta2 : theta2; }

void require_four_modes(int modes) {
  if (modes != 4) {
    throw std::invalid_argument(fmt::format("coincidence rates need a 4-mode state, got {} modes", modes));
  }
}

// Basis indices with vacuum on each detector-relevant mode subset.
struct BeamIndexSets {
  std::vector<std::uint32_t> m0, m2, m02, m01, m23, m023, m012, m0123;

  explicit BeamIndexSets(const FockBasis& basis) {
    const auto list = [&](std::initializer_list<int> modes) {
      return basis.vacuum_indices(std::span<const int>(modes.begin(), modes.size()));
    };
    m0 = list({0});
    m2 = list({2});
    m02 = list({0, 2});
    m01 = list({0, 1});
    m23 = list({2, 3});
    m023 = list({0, 2, 3});
    m012 = list({0, 1, 2});
    m0123 = list({0, 1, 2, 3});
  }
};

template <class VacuumSum>
CoincidenceRates rates_from_vacuum(double norm, const BeamIndexSets& sets, VacuumSum&& q) {
  CoincidenceRates r;
  const double q0 = q(sets.m0);
  const double q2 = q(sets.m2);
  const double q01 = q(sets.m01);
  const double q23 = q(sets.m23);
  r.both = norm - q0 - q2 + q(sets.m02);
  r.first_only = norm - q0 - q23 + q(sets.m023);
  r.second_only = norm - q01 - q2 + q(sets.m012);
  r.none = norm - q01 - q23 + q(sets.m0123);
  return r;
}

CoincidenceRates pure_rates(const OccupationState& state, const BeamIndexSets& sets, double theta1, double theta2,
                            Geometry geometry) {
  const OccupationState rotated =
      apply_mode_pair(apply_mode_pair(state, 0, 1, rotation_block(theta1)), 2, 3,
                      rotation_block(second_angle(theta2, geometry)));
  const auto amps = rotated.amplitudes();
  const auto& k = simd::kernels();
  return rates_from_vacuum(k.sum_norm_sq(amps.data(), amps.size()), sets, [&](const std::vector<std::uint32_t>& idx) {
    return k.sum_norm_sq_indexed(amps.data(), idx.data(), idx.size());
  });
}

CoincidenceRates ensemble_rates(const PureEnsemble& ensemble, const BeamIndexSets& sets, double theta1,
                                double theta2, Geometry geometry) {
  CoincidenceRates total;
  for (const auto& m : ensemble.members()) {
    const CoincidenceRates r = pure_rates(m.state, sets, theta1, theta2, geometry);
    total.both += m.weight * r.both;
    total.first_only += m.weight * r.first_only;
    total.second_only += m.weight * r.second_only;
    total.none += m.weight * r.none;
  }
  return total;
}

CoincidenceRates density_rates(const DensityOperator& rho, const BeamIndexSets& sets, double theta1, double theta2,
                               Geometry geometry) {
  const DensityOperator rotated = apply_passive(rho, beam_rotation(theta1, theta2, geometry));
  const Eigen::VectorXd diag = rotated.matrix().diagonal().real();
  return rates_from_vacuum(diag.sum(), sets, [&](const std::vector<std::uint32_t>& idx) {
    double acc = 0.0;
    for (std::uint32_t i : idx) {
      acc += diag[static_cast<Eigen::Index>(i)];
    }
    return acc;
  });
}

double vacuum_weight(std::span<const cplx> amps, const std::vector<std::uint32_t>& idx) {
  return simd::kernels().sum_norm_sq_indexed(amps.data(), idx.data(), idx.size());
}

}  // namespace

AngleSettings AngleSettings::canonical() const {
  return {canonical_angle(theta1), canonical_angle(theta2), canonical_angle(theta1p), canonical_angle(theta2p)};
}

double CoincidenceRates::select(Polarizers p) const {
  if (p.first && p.second) {
    return both;
  }
  if (p.first) {
    return first_only;
  }
  if (p.second) {
    return second_only;
  }
  return none;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::not_violated:
      return "not violated";
    case Verdict::violated:
      return "violated";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

PassiveUnitary beam_rotation(double theta1, double theta2, Geometry geometry) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m.block<2, 2>(0, 0) = rotation_block(theta1);
  m.block<2, 2>(2, 2) = rotation_block(second_angle(theta2, geometry));
  return PassiveUnitary(std::move(m));
}

DensityOperator polarizer_apply(const DensityOperator& rho, double theta, const NumericalPolicy& policy) {
  if (rho.mode_count() != 2) {
    throw std::invalid_argument(fmt::format("polarizer_apply: expects a 2-mode state, got {} modes", rho.mode_count()));
  }
  const DensityOperator rotated = apply_passive(rho, polarizer_rotation(theta, 0, 1, 2), policy);
  const std::array<int, 1> keep{0};
  return partial_trace(rotated, keep, policy);
}

double prob_at_least_one(const DensityOperator& rho, std::span<const int> modes) {
  if (modes.empty()) {
    throw std::invalid_argument("prob_at_least_one: empty mode subset");
  }
  double q = 0.0;
  for (std::uint32_t i : rho.basis().vacuum_indices(modes)) {
    q += rho.matrix()(i, i).real();
  }
  return rho.trace() - q;
}

double prob_at_least_one(const OccupationState& state, std::span<const int> modes) {
  if (modes.empty()) {
    throw std::invalid_argument("prob_at_least_one: empty mode subset");
  }
  return state.norm_squared() - vacuum_weight(state.amplitudes(), state.basis().vacuum_indices(modes));
}

double prob_at_least_one(const PureEnsemble& ensemble, std::span<const int> modes) {
  double p = 0.0;
  for (const auto& m : ensemble.members()) {
    p += m.weight * prob_at_least_one(m.state, modes);
  }
  return p;
}

CoincidenceRates coincidence_rates(const OccupationState& state, double theta1, double theta2, Geometry geometry) {
  require_four_modes(state.mode_count());
  return pure_rates(state, BeamIndexSets(state.basis()), theta1, theta2, geometry);
}

CoincidenceRates coincidence_rates(const PureEnsemble& ensemble, double theta1, double theta2, Geometry geometry) {
  require_four_modes(ensemble.mode_count());
  return ensemble_rates(ensemble, BeamIndexSets(*ensemble.basis_ptr()), theta1, theta2, geometry);
}

CoincidenceRates coincidence_rates(const DensityOperator& rho, double theta1, double theta2, Geometry geometry) {
  require_four_modes(rho.mode_count());
  return density_rates(rho, BeamIndexSets(rho.basis()), theta1, theta2, geometry);
}

double coincidence_rate(const OccupationState& state, double theta1, double theta2, Polarizers polarizers,
                        Geometry geometry) {
  return coincidence_rates(state, theta1, theta2, geometry).select(polarizers);
}

RateSource make_rate_source(const OccupationState& state, Geometry geometry) {
  require_four_modes(state.mode_count());
  auto sets = std::make_shared<const BeamIndexSets>(state.basis());
  return {[state, sets, geometry](double t1, double t2) { return pure_rates(state, *sets, t1, t2, geometry); },
          state.truncation_error()};
}

RateSource make_rate_source(const PureEnsemble& ensemble, Geometry geometry) {
  require_four_modes(ensemble.mode_count());
  auto sets = std::make_shared<const BeamIndexSets>(*ensemble.basis_ptr());
  return {[ensemble, sets, geometry](double t1, double t2) { return ensemble_rates(ensemble, *sets, t1, t2, geometry); },
          ensemble.truncation_error()};
}

RateSource make_rate_source(const DensityOperator& rho, Geometry geometry) {
  require_four_modes(rho.mode_count());
  auto sets = std::make_shared<const BeamIndexSets>(rho.basis());
  return {[rho, sets, geometry](double t1, double t2) { return density_rates(rho, *sets, t1, t2, geometry); },
          rho.truncation_error()};
}

Verdict classify(double f, double p_none_none, double error_bar, const NumericalPolicy& policy) {
  const double excess = std::max(f, -p_none_none - f);
  if (excess > policy.verdict_tol + error_bar) {
    return Verdict::violated;
  }
  if (excess > policy.verdict_tol) {
    return Verdict::inconclusive;
  }
  return Verdict::not_violated;
}

CoincidenceReport ch_functional(const RateSource& source, const AngleSettings& angles, const NumericalPolicy& policy) {
  CoincidenceReport rep;
  rep.angles = angles.canonical();
  const auto& a = rep.angles;
  const CoincidenceRates r11 = source.rates(a.theta1, a.theta2);
  const CoincidenceRates r12 = source.rates(a.theta1, a.theta2p);
  const CoincidenceRates r21 = source.rates(a.theta1p, a.theta2);
  const CoincidenceRates r22 = source.rates(a.theta1p, a.theta2p);

  rep.p_t1_t2 = r11.both;
  rep.p_t1_t2p = r12.both;
  rep.p_t1p_t2 = r21.both;
  rep.p_t1p_t2p = r22.both;
  rep.p_t1_none = r11.first_only;
  rep.p_t1p_none = r21.first_only;
  rep.p_none_t2 = r11.second_only;
  rep.p_none_none = r11.none;
  rep.error_bar = source.error_bar;

  const double slack = 1e-9 + source.error_bar;
  for (const CoincidenceRates* r : {&r11, &r12, &r21, &r22}) {
    for (double p : {r->both, r->first_only, r->second_only, r->none}) {
      if (p < -slack || p > 1.0 + slack) {
        throw Error(fmt::format("ch_functional: rate {:.17g} outside [0, 1]", p));
      }
    }
    if (r->both > std::min(r->first_only, r->second_only) + slack) {
      throw Error("ch_functional: P(t1,t2) exceeds a single-polarizer rate");
    }
  }

  rep.f = rep.p_t1_t2 - rep.p_t1_t2p + rep.p_t1p_t2 + rep.p_t1p_t2p - rep.p_t1p_none - rep.p_none_t2;
  rep.lower_margin = rep.f + rep.p_none_none;
  rep.upper_margin = -rep.f;
  rep.verdict = classify(rep.f, rep.p_none_none, rep.error_bar, policy);
  return rep;
}

CoincidenceReport ch_functional(const OccupationState& state, const AngleSettings& angles, Geometry geometry,
                                const NumericalPolicy& policy) {
  return ch_functional(make_rate_source(state, geometry), angles, policy);
}

CoincidenceReport ch_functional(const PureEnsemble& ensemble, const AngleSettings& angles, Geometry geometry,
                                const NumericalPolicy& policy) {
  return ch_functional(make_rate_source(ensemble, geometry), angles, policy);
}

CoincidenceReport ch_functional(const DensityOperator& rho, const AngleSettings& angles, Geometry geometry,
                                const NumericalPolicy& policy) {
  return ch_functional(make_rate_source(rho, geometry), angles, policy);
}

}  // namespace bellsim
