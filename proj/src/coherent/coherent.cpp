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

#include "bellsim/coherent/coherent.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bellsim/util/parallel.hpp"

namespace bellsim {

namespace {

// 1 - e^{-x} without cancellation for small x.
double click(double x) { return -std::expm1(-x); }

}  // namespace

CoincidenceRates coherent_rates(const CoherentAmplitudes& z, double theta1, double theta2, Geometry geometry) {
  const double t2 = geometry.mirror_second_beam ? -theta2 : theta2;
  const cplx z1 = std::cos(theta1) * z[0] - std::sin(theta1) * z[1];
  const cplx z3 = std::cos(t2) * z[2] - std::sin(t2) * z[3];
  const double a = click(std::norm(z1));
  const double b = click(std::norm(z3));
  const double a_all = click(std::norm(z[0]) + std::norm(z[1]));
  const double b_all = click(std::norm(z[2]) + std::norm(z[3]));
  return {a * b, a * b_all, a_all * b, a_all * b_all};
}

ClassicalMixture::ClassicalMixture(std::vector<MixtureComponent> components) : components_(std::move(components)) {
  if (components_.empty()) {
    throw std::invalid_argument("ClassicalMixture: no components");
  }
  double total = 0.0;
  for (const MixtureComponent& c : components_) {
    if (!(c.weight > 0.0) || !std::isfinite(c.weight)) {
      throw std::invalid_argument(fmt::format("ClassicalMixture: weight {} is not positive", c.weight));
    }
    for (const cplx& zj : c.z) {
      if (!std::isfinite(zj.real()) || !std::isfinite(zj.imag())) {
        throw std::invalid_argument("ClassicalMixture: non-finite amplitude");
      }
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument(fmt::format("ClassicalMixture: weights sum to {:.17g}", total));
  }
}

ClassicalMixture ClassicalMixture::vacuum() { return single({}); }

ClassicalMixture ClassicalMixture::single(const CoherentAmplitudes& z) { return ClassicalMixture({{1.0, z}}); }

ClassicalMixture ClassicalMixture::transformed(const PassiveUnitary& u) const {
  if (u.mode_count() != 4) {
    throw std::invalid_argument("ClassicalMixture::transformed: expects a 4-mode unitary");
  }
  std::vector<MixtureComponent> out = components_;
  for (MixtureComponent& c : out) {
    const Eigen::Vector4cd z(c.z[0], c.z[1], c.z[2], c.z[3]);
    const Eigen::Vector4cd w = u.matrix() * z;
    c.z = {w[0], w[1], w[2], w[3]};
  }
  return ClassicalMixture(std::move(out));
}

CoincidenceRates mixture_rates(const ClassicalMixture& mixture, double theta1, double theta2, Geometry geometry) {
  CoincidenceRates acc;
  for (const MixtureComponent& c : mixture.components()) {
    const CoincidenceRates r = coherent_rates(c.z, theta1, theta2, geometry);
    acc.both += c.weight * r.both;
    acc.first_only += c.weight * r.first_only;
    acc.second_only += c.weight * r.second_only;
    acc.none += c.weight * r.none;
  }
  return acc;
}

RateSource make_rate_source(const CoherentAmplitudes& z, Geometry geometry) {
  return {[z, geometry](double t1, double t2) { return coherent_rates(z, t1, t2, geometry); }, 0.0};
}

RateSource make_rate_source(const ClassicalMixture& mixture, Geometry geometry) {
  return {[mixture, geometry](double t1, double t2) { return mixture_rates(mixture, t1, t2, geometry); }, 0.0};
}

CoincidenceReport coherent_ch(const ClassicalMixture& mixture, const AngleSettings& angles, Geometry geometry,
                              const NumericalPolicy& policy) {
  return ch_functional(make_rate_source(mixture, geometry), angles, policy);
}

ClassicalMixture random_mixture(std::mt19937_64& rng, double bound, int max_components) {
  if (max_components < 1 || !(bound >= 0.0)) {
    throw std::invalid_argument("random_mixture: need max_components >= 1 and bound >= 0");
  }
  std::uniform_int_distribution<int> count(1, max_components);
  std::uniform_real_distribution<double> coord(-bound, bound);
  std::exponential_distribution<double> expo(1.0);
  const int k = count(rng);
  std::vector<MixtureComponent> comps(static_cast<std::size_t>(k));
  double total = 0.0;
  for (MixtureComponent& c : comps) {
    c.weight = expo(rng);
    // exponential draws can be exactly zero in principle
    if (c.weight <= 0.0) {
      c.weight = std::numeric_limits<double>::min();
    }
    total += c.weight;
    for (cplx& zj : c.z) {
      const double re = coord(rng);
      zj = {re, coord(rng)};
    }
  }
  for (MixtureComponent& c : comps) {
    c.weight /= total;
  }
  return ClassicalMixture(std::move(comps));
}

PureEnsemble to_fock(const ClassicalMixture& mixture, const BasisPtr& basis, const NumericalPolicy& policy) {
  std::vector<WeightedState> members;
  members.reserve(mixture.size());
  for (const MixtureComponent& c : mixture.components()) {
    members.push_back({c.weight, synthesize_coherent(c.z, basis, policy)});
  }
  return PureEnsemble(std::move(members), policy);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ClassicalTrial make_classical_trial(std::uint64_t seed, int index, double bound) {
  ClassicalTrial trial;
  trial.seed = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index)));
  std::mt19937_64 rng(trial.seed);
  const ClassicalMixture mixture = random_mixture(rng, bound);
  trial.mixture = mixture.transformed(haar_unitary(4, rng));
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  trial.angles.theta1 = angle(rng);
  trial.angles.theta2 = angle(rng);
  trial.angles.theta1p = angle(rng);
  trial.angles.theta2p = angle(rng);
  return trial;
}

NonviolationReport classical_nonviolation_suite(std::uint64_t seed, int trials, const NonviolationOptions& options,
                                                const NumericalPolicy& policy) {
  if (trials < 0) {
    throw std::invalid_argument("classical_nonviolation_suite: negative trial count");
  }
  std::vector<CoincidenceReport> reports(static_cast<std::size_t>(trials));
  std::vector<std::uint64_t> seeds(reports.size());
  parallel_for(reports.size(), [&](std::size_t i) {
    const ClassicalTrial trial = make_classical_trial(seed, static_cast<int>(i), options.amplitude_bound);
    seeds[i] = trial.seed;
    reports[i] = coherent_ch(trial.mixture, trial.angles, options.geometry, policy);
  });

  NonviolationReport out;
  out.trials = trials;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const CoincidenceReport& r = reports[i];
    if (i == 0 || r.f > out.worst_f) {
      out.worst_f = r.f;
    }
    if (i == 0 || r.lower_margin < out.worst_lower_margin) {
      out.worst_lower_margin = r.lower_margin;
    }
    if (r.verdict == Verdict::violated) {
      ++out.violated_verdicts;
    }
    const bool bad = r.f > options.tolerance || r.lower_margin < -options.tolerance;
    if (bad || r.verdict == Verdict::violated) {
      if (bad) {
        ++out.failures;
      }
      if (out.failing_index < 0) {
        out.failing_index = static_cast<int>(i);
        out.failing_seed = seeds[i];
      }
    }
  }
  return out;
}

}  // namespace bellsim
