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

#include "bellsim/cli/commands.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "bellsim/simd/kernels.hpp"
#include "bellsim/util/parallel.hpp"

namespace bellsim::cli {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double cross_engine_tol = 1e-6;

// Builds a Fock state, growing an automatic cutoff until the tail fits.
template <class Build>
auto with_cutoff(std::optional<int> requested, int initial, Build build) {
  int cutoff = requested.value_or(initial);
  for (int attempt = 0;; ++attempt) {
    try {
      return std::pair{build(cutoff), cutoff};
    } catch (const TruncationError& e) {
      if (requested || e.required_cutoff() <= cutoff || attempt >= 8) {
        throw;
      }
      cutoff = e.required_cutoff();
    }
  }
}

PreparedSource fock_source(const ExperimentConfig& c) {
  const NumericalPolicy& p = c.policy;
  switch (c.state.kind) {
    case StateKind::two_photon: {
      const int n = c.cutoff.value_or(2);
      return {"fock", make_rate_source(two_photon_state(make_basis(4, n, p)), c.geometry), n};
    }
    case StateKind::vacuum: {
      const int n = c.cutoff.value_or(0);
      return {"fock", make_rate_source(OccupationState::vacuum(make_basis(4, n, p)), c.geometry), n};
    }
    case StateKind::coherent:
    case StateKind::mixture: {
      const ClassicalMixture m = c.state.kind == StateKind::coherent ? ClassicalMixture::single(c.state.z)
                                                                     : ClassicalMixture(c.state.components);
      auto [ens, n] = with_cutoff(c.cutoff, 16, [&](int k) { return to_fock(m, make_basis(4, k, p), p); });
      return {"fock", make_rate_source(ens, c.geometry), n};
    }
    case StateKind::squeezed_thermal: {
      if (c.state.squeezed.kappa != 1.0) {
        throw std::invalid_argument("the fock engine handles squeezed_thermal only at kappa = 1 (pure states)");
      }
      auto [s, n] = with_cutoff(c.cutoff, 20, [&](int k) { return to_fock(c.state.squeezed, make_basis(4, k, p), p); });
      return {"fock", make_rate_source(s, c.geometry), n};
    }
    case StateKind::file: {
      FileState f = load_state_file(c.state.path, c.cutoff, p);
      if (!f.fock) {
        throw std::invalid_argument("state file holds a Gaussian state; use the gaussian engine");
      }
      const int n = f.fock->basis().cutoff();
      return {"fock", make_rate_source(*f.fock, c.geometry), n};
    }
  }
  throw std::logic_error("unhandled state kind");
}

PreparedSource gaussian_source(const ExperimentConfig& c) {
  switch (c.state.kind) {
    case StateKind::vacuum:
      return {"gaussian", make_rate_source(GaussianState::vacuum(4), c.geometry)};
    case StateKind::squeezed_thermal:
      return {"gaussian", make_rate_source(build_squeezed_thermal(c.state.squeezed, c.policy), c.geometry)};
    case StateKind::file: {
      FileState f = load_state_file(c.state.path, c.cutoff, c.policy);
      if (!f.gaussian) {
        throw std::invalid_argument("state file holds a Fock state; use the fock engine");
      }
      return {"gaussian", make_rate_source(*f.gaussian, c.geometry)};
    }
    default:
      throw std::invalid_argument(
          fmt::format("the gaussian engine cannot represent state '{}'", state_kind_name(c.state.kind)));
  }
}

PreparedSource analytic_source(const ExperimentConfig& c) {
  const ClassicalMixture m =
      c.state.kind == StateKind::coherent ? ClassicalMixture::single(c.state.z) : ClassicalMixture(c.state.components);
  return {"analytic", make_rate_source(m, c.geometry)};
}

bool is_classical(StateKind k) { return k == StateKind::coherent || k == StateKind::mixture; }

void open_output(const std::filesystem::path& path, std::ofstream& file) {
  file.open(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  }
}

// Negative zero is printed as 0.
std::string g17(double x) { return fmt::format("{:.17g}", x == 0.0 ? 0.0 : x); }

int exit_for(Verdict v) { return v == Verdict::inconclusive ? exit_inconclusive : exit_ok; }

// Evaluates the secondary sources against the reference at `angles`.
bool cross_check(const std::vector<PreparedSource>& sources, const AngleSettings& angles, std::ostream& out) {
  bool ok = true;
  for (std::size_t i = 1; i < sources.size(); ++i) {
    const double diff = max_rate_difference(sources[0].source, sources[i].source, angles);
    const double allowed = cross_engine_tol + sources[0].source.error_bar + sources[i].source.error_bar;
    fmt::print(out, "cross-check {} vs {}: max rate difference {:.3e} (allowed {:.3e}) {}\n", sources[i].engine,
               sources[0].engine, diff, allowed, diff <= allowed ? "ok" : "MISMATCH");
    ok = ok && diff <= allowed;
  }
  return ok;
}

struct Section {
  std::string name;
  bool passed;
  std::string detail;
};

}  // namespace

std::vector<PreparedSource> prepare_sources(const ExperimentConfig& c) {
  const StateKind kind = c.state.kind;
  std::vector<PreparedSource> out;
  if (!c.engine) {
    if (is_classical(kind)) {
      out.push_back(analytic_source(c));
    } else if (kind == StateKind::squeezed_thermal) {
      out.push_back(gaussian_source(c));
    } else if (kind == StateKind::file) {
      FileState f = load_state_file(c.state.path, c.cutoff, c.policy);
      out.push_back(f.gaussian ? gaussian_source(c) : fock_source(c));
    } else {
      out.push_back(fock_source(c));
    }
    return out;
  }
  switch (*c.engine) {
    case Engine::fock:
      out.push_back(fock_source(c));
      break;
    case Engine::gaussian:
      if (is_classical(kind)) {
        throw std::invalid_argument("coherent states use the closed form (no engine) or the fock engine");
      }
      out.push_back(gaussian_source(c));
      break;
    case Engine::both:
      if (is_classical(kind)) {
        out.push_back(analytic_source(c));
      } else if (kind == StateKind::two_photon) {
        throw std::invalid_argument("the two-photon state has no Gaussian form; use the fock engine");
      } else {
        out.push_back(gaussian_source(c));
      }
      out.push_back(fock_source(c));
      break;
  }
  return out;
}

double max_rate_difference(const RateSource& a, const RateSource& b, const AngleSettings& angles) {
  double diff = 0.0;
  for (double t1 : {angles.theta1, angles.theta1p}) {
    for (double t2 : {angles.theta2, angles.theta2p}) {
      const CoincidenceRates x = a.rates(t1, t2);
      const CoincidenceRates y = b.rates(t1, t2);
      diff = std::max({diff, std::abs(x.both - y.both), std::abs(x.first_only - y.first_only),
                       std::abs(x.second_only - y.second_only), std::abs(x.none - y.none)});
    }
  }
  return diff;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& c) {
  if (c.engine && *c.engine != Engine::gaussian) {
    throw std::invalid_argument("sweep runs on the gaussian engine");
  }
  const std::vector<double> us = c.sweep.u_values();
  std::vector<SweepRow> rows;
  for (double kappa : c.sweep.kappas) {
    for (const std::string& scenario : c.sweep.scenarios) {
      for (double u : us) {
        rows.push_back({u, scenario_v(scenario, u), kappa, {}});
      }
    }
  }
  parallel_for(rows.size(), [&](std::size_t i) {
    SweepRow& r = rows[i];
    const GaussianState g = build_squeezed_thermal({r.u, r.v, r.kappa}, c.policy);
    r.report = gaussian_ch(g, c.angles, c.geometry, c.policy);
  });
  return rows;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << "u,v,kappa,f,neg_p_both,violated\n";
  for (const SweepRow& r : rows) {
    os << fmt::format("{},{},{},{},{},{}\n", g17(r.u), g17(r.v), g17(r.kappa), g17(r.report.f),
                      g17(-r.report.p_none_none), r.report.verdict == Verdict::violated ? 1 : 0);
  }
}

bool sweep_row_consistent(const SweepRow& row, double tol) {
  const bool inside = -row.report.p_none_none - tol <= row.report.f && row.report.f <= tol;
  const bool violated = row.report.verdict == Verdict::violated;
  return inside != violated;
}

void write_report(std::ostream& os, std::string_view engine, const CoincidenceReport& r) {
  const auto line = [&](std::string_view key, double value) { fmt::print(os, "{:<14}{}\n", key, g17(value)); };
  fmt::print(os, "{:<14}{}\n", "engine", engine);
  fmt::print(os, "{:<14}{} {} {} {}\n", "angles", g17(r.angles.theta1), g17(r.angles.theta2), g17(r.angles.theta1p),
             g17(r.angles.theta2p));
  line("P(t1,t2)", r.p_t1_t2);
  line("P(t1,t2')", r.p_t1_t2p);
  line("P(t1',t2)", r.p_t1p_t2);
  line("P(t1',t2')", r.p_t1p_t2p);
  line("P(t1,.)", r.p_t1_none);
  line("P(t1',.)", r.p_t1p_none);
  line("P(.,t2)", r.p_none_t2);
  line("P(.,.)", r.p_none_none);
  line("f", r.f);
  line("lower_margin", r.lower_margin);
  line("upper_margin", r.upper_margin);
  line("error_bar", r.error_bar);
  fmt::print(os, "{:<14}{}\n", "verdict", verdict_name(r.verdict));
}

void write_report_csv(std::ostream& os, std::span<const std::pair<std::string, CoincidenceReport>> rows) {
  os << "engine,theta1,theta2,theta1p,theta2p,p_t1_t2,p_t1_t2p,p_t1p_t2,p_t1p_t2p,p_t1_none,p_t1p_none,"
        "p_none_t2,p_none_none,f,lower_margin,upper_margin,error_bar,verdict\n";
  for (const auto& [engine, r] : rows) {
    os << engine;
    for (double x : {r.angles.theta1, r.angles.theta2, r.angles.theta1p, r.angles.theta2p, r.p_t1_t2, r.p_t1_t2p,
                     r.p_t1p_t2, r.p_t1p_t2p, r.p_t1_none, r.p_t1p_none, r.p_none_t2, r.p_none_none, r.f,
                     r.lower_margin, r.upper_margin, r.error_bar}) {
      os << ',' << g17(x);
    }
    os << ',' << verdict_name(r.verdict) << '\n';
  }
}

int cmd_run(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const std::vector<PreparedSource> sources = prepare_sources(c);
  std::vector<std::pair<std::string, CoincidenceReport>> rows;
  for (const PreparedSource& s : sources) {
    rows.emplace_back(s.engine, ch_functional(s.source, c.angles, c.policy));
    if (s.cutoff >= 0) {
      fmt::print(out, "{:<14}{}\n", "cutoff", s.cutoff);
    }
    write_report(out, s.engine, rows.back().second);
  }
  const bool agree = cross_check(sources, c.angles, out);
  if (c.out) {
    std::ofstream file;
    open_output(*c.out, file);
    write_report_csv(file, rows);
  }
  if (!agree) {
    fmt::print(err, "error: engines disagree\n");
    return exit_error;
  }
  return exit_for(rows.front().second.verdict);
}

int cmd_scan(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const std::vector<PreparedSource> sources = prepare_sources(c);
  const ScanResult best = angle_scan(sources.front().source, c.scan, c.policy);
  const AngleSettings& a = best.report.angles;
  fmt::print(out, "{:<14}{} (grid {}{})\n", "objective", scan_objective_name(c.scan.objective), c.scan.grid,
             c.scan.refine ? " + refine" : "");
  fmt::print(out, "{:<14}{}\n", "grid_value", g17(best.grid_objective));
  fmt::print(out, "{:<14}{}\n", "best_value", g17(best.objective));
  fmt::print(out, "{:<14}{}\n", "evaluations", best.rate_evaluations);
  fmt::print(out, "{:<14}{} {} {} {}\n", "best_angles", g17(a.theta1), g17(a.theta2), g17(a.theta1p), g17(a.theta2p));
  write_report(out, sources.front().engine, best.report);
  std::vector<std::pair<std::string, CoincidenceReport>> rows{{sources.front().engine, best.report}};
  for (std::size_t i = 1; i < sources.size(); ++i) {
    rows.emplace_back(sources[i].engine, ch_functional(sources[i].source, a, c.policy));
  }
  const bool agree = cross_check(sources, a, out);
  if (c.out) {
    std::ofstream file;
    open_output(*c.out, file);
    write_report_csv(file, rows);
  }
  if (!agree) {
    fmt::print(err, "error: engines disagree\n");
    return exit_error;
  }
  return exit_for(best.report.verdict);
}

int cmd_sweep(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const std::vector<SweepRow> rows = run_sweep(c);
  std::ostream* summary = &out;
  if (c.out) {
    std::ofstream file;
    open_output(*c.out, file);
    write_sweep_csv(file, rows);
    if (!file) {
      throw std::runtime_error(fmt::format("failed writing '{}'", c.out->string()));
    }
  } else {
    write_sweep_csv(out, rows);
    summary = &err;
  }
  bool consistent = true;
  for (double kappa : c.sweep.kappas) {
    std::size_t total = 0, violated = 0;
    double best_excess = -std::numeric_limits<double>::infinity();
    for (const SweepRow& r : rows) {
      if (r.kappa == kappa) {
        ++total;
        violated += r.report.verdict == Verdict::violated ? 1 : 0;
        best_excess = std::max(best_excess, r.report.excess());
      }
    }
    fmt::print(*summary, "kappa={}: {} of {} points violated (largest excess {})\n", kappa, violated, total,
               fmt::format("{:.6g}", best_excess == 0.0 ? 0.0 : best_excess));
  }
  for (const SweepRow& r : rows) {
    consistent = consistent && sweep_row_consistent(r, c.policy.verdict_tol);
  }
  if (!consistent) {
    fmt::print(err, "error: inconsistent sweep row\n");
    return exit_error;
  }
  return exit_ok;
}

int cmd_validate(const ExperimentConfig& c, const ValidateOptions& options, std::ostream& out, std::ostream& err) {
  if (c.trials == 0) {
    fmt::print(err, "warning: trials = 0, nothing validated\n");
    return exit_ok;
  }
  const NumericalPolicy& p = c.policy;
  std::vector<Section> sections;
  const auto started = std::chrono::steady_clock::now();

  {
    NonviolationOptions o;
    o.geometry = c.geometry;
    o.tolerance = options.corrupt_tolerance ? -1.0 : p.verdict_tol;
    const NonviolationReport r = classical_nonviolation_suite(c.seed, c.trials, o, p);
    std::string detail = fmt::format("{} trials, worst f {:.3e}, worst f + P(.,.) {:.3e}", r.trials, r.worst_f,
                                     r.worst_lower_margin);
    if (!r.passed()) {
      detail += fmt::format(", {} failures, first at trial {} (trial seed {:#018x}, suite seed {})", r.failures,
                            r.failing_index, r.failing_seed, c.seed);
    }
    sections.push_back({"classical nonviolation", r.passed(), detail});
  }

  {
    const int n = std::min(c.trials, 50);
    const BasisPtr basis = make_basis(4, 16, p);
    std::vector<double> diffs(static_cast<std::size_t>(n));
    parallel_for(diffs.size(), [&](std::size_t i) {
      const ClassicalTrial t = make_classical_trial(c.seed, static_cast<int>(i), 0.5);
      diffs[i] = max_rate_difference(make_rate_source(t.mixture, c.geometry),
                                     make_rate_source(to_fock(t.mixture, basis, p), c.geometry), t.angles);
    });
    const double worst = diffs.empty() ? 0.0 : *std::max_element(diffs.begin(), diffs.end());
    sections.push_back({"coherent closed form vs fock", worst <= cross_engine_tol,
                        fmt::format("{} trials at cutoff 16, max rate difference {:.3e}", n, worst)});
  }

  {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> angle(0.0, pi);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const ClassicalMixture m = random_mixture(rng, 2.0, 1);
      const CoincidenceRates r = coherent_rates(m.components()[0].z, angle(rng), angle(rng), c.geometry);
      worst = std::max(worst, std::abs(r.both * r.none - r.first_only * r.second_only));
    }
    sections.push_back({"coherent factorization", worst <= 1e-12, fmt::format("100 samples, max gap {:.3e}", worst)});
  }

  {
    const BasisPtr basis = make_basis(4, 20, p);
    std::mt19937_64 rng(c.seed ^ 0x5eed);
    std::uniform_real_distribution<double> angle(0.0, pi);
    std::vector<AngleSettings> settings(10);
    for (AngleSettings& a : settings) {
      a = {angle(rng), angle(rng), angle(rng), angle(rng)};
    }
    const std::array<double, 3> grid{0.1, 0.2, 0.3};
    std::vector<double> diffs(9);
    parallel_for(9, [&](std::size_t i) {
      const SqueezedThermalSpec spec{grid[i / 3], grid[i % 3], 1.0};
      const RateSource g = make_rate_source(build_squeezed_thermal(spec, p), c.geometry);
      const RateSource f = make_rate_source(to_fock(spec, basis, p), c.geometry);
      for (const AngleSettings& a : settings) {
        diffs[i] = std::max(diffs[i], max_rate_difference(g, f, a));
      }
    });
    const double worst = *std::max_element(diffs.begin(), diffs.end());
    sections.push_back({"gaussian vs fock", worst <= cross_engine_tol,
                        fmt::format("(u, v) in {{0.1, 0.2, 0.3}}^2, 10 angle settings, max rate difference {:.3e}",
                                    worst)});
  }

  {
    double worst = 0.0;
    const std::array<int, 1> m0{0};
    for (double u : {0.25, 0.5, 1.0}) {
      Eigen::MatrixXd v(2, 2);
      v << std::exp(-2 * u) / 2, 0, 0, std::exp(2 * u) / 2;
      worst = std::max(worst, std::abs(vacuum_probability(GaussianState::from_variance(v, p), m0) - 1 / std::cosh(u)));
      const double lo = is_squeezed(build_squeezed_thermal({u, 0.0, 1.0}, p), p).min_eigenvalue;
      worst = std::max(worst, std::abs(lo - std::exp(-2 * u) / 2));
    }
    for (double k : {0.5, 0.8, 1.0}) {
      worst = std::max(worst, std::abs(vacuum_probability(GaussianState::thermal(1, k), m0) - 2 * k / (1 + k)));
    }
    const CoincidenceReport tp = ch_functional(two_photon_state(make_basis(4, 2, p)),
                                               {pi / 8, pi / 4, 3 * pi / 8, 0.0}, Geometry{}, p);
    const double tp_gap = std::abs(tp.f - (std::sqrt(2.0) - 1) / 4);
    sections.push_back({"golden values", worst <= 1e-10 && tp_gap <= 1e-12,
                        fmt::format("max closed-form gap {:.3e}, two-photon f gap {:.3e}", worst, tp_gap)});
  }

  {
    std::mt19937_64 rng(c.seed + 10);
    std::uniform_real_distribution<double> sq(-1.0, 1.0), kap(0.2, 1.0);
    double unc = std::numeric_limits<double>::infinity();
    double shift = 0.0;
    for (int i = 0; i < 200; ++i) {
      const GaussianState g = build_squeezed_thermal({sq(rng), sq(rng), kap(rng)}, p);
      const GaussianState t = apply_symplectic(g, embed_passive(haar_unitary(4, rng), p), p);
      unc = std::min(unc, uncertainty_min_eigenvalue(t));
      shift = std::max(shift, std::abs(is_squeezed(t, p).min_eigenvalue - is_squeezed(g, p).min_eigenvalue));
    }
    sections.push_back({"passive invariance", unc >= -p.uncertainty_tol && shift <= 1e-10,
                        fmt::format("200 samples, min uncertainty eigenvalue {:.3e}, max squeezing shift {:.3e}", unc,
                                    shift)});
  }

  bool all = true;
  for (const Section& s : sections) {
    fmt::print(out, "{} {}: {}\n", s.passed ? "PASS" : "FAIL", s.name, s.detail);
    all = all && s.passed;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  fmt::print(out, "{} ({} threads, {} kernels, {:.2f} s)\n", all ? "all suites passed" : "VALIDATION FAILED",
             worker_count(), simd::backend_name(simd::kernels().backend), seconds);
  if (!all) {
    fmt::print(err, "error: validation failed\n");
  }
  return all ? exit_ok : exit_error;
}

}  // namespace bellsim::cli
