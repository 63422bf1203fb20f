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

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <exception>
#include <sstream>

#include "bellsim/cli/commands.hpp"
#include "bellsim/util/angles.hpp"

namespace bellsim::cli {

namespace {

struct Overrides {
  std::string config;
  std::string engine;
  std::string state;
  std::string z;
  std::string angles;
  std::string objective;
  std::string out;
  std::string u_range;
  std::string scenarios;
  std::string kappas;
  int cutoff = -1;
  int grid = -1;
  int trials = -1;
  std::int64_t seed = -1;
  double u = NAN;
  double v = NAN;
  double kappa = NAN;
  bool refine = false;
  bool no_refine = false;
  bool mirror = false;
  bool corrupt = false;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    parts.push_back(item);
  }
  return parts;
}

std::vector<double> numbers(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> out;
  for (const std::string& s : split(text, ',')) {
    out.push_back(std::stod(s));
  }
  if (expected != 0 && out.size() != expected) {
    throw std::invalid_argument(fmt::format("{}: expected {} comma-separated values", what, expected));
  }
  return out;
}

void add_common(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--config", o.config, "JSON experiment file")->check(CLI::ExistingFile);
  cmd.add_option("--engine", o.engine, "fock | gaussian | both");
  cmd.add_option("--cutoff", o.cutoff, "Fock total-photon cutoff");
  cmd.add_option("--seed", o.seed, "random seed");
  cmd.add_option("--out", o.out, "output CSV path");
  cmd.add_option("--state", o.state, "two_photon | vacuum | coherent | mixture | squeezed_thermal | file");
  cmd.add_option("--z", o.z, "coherent amplitudes, e.g. 1,0,1+0.5i,0");
  cmd.add_option("--u", o.u, "squeezing of modes 1 and 4");
  cmd.add_option("--v", o.v, "squeezing of modes 2 and 3");
  cmd.add_option("--kappa", o.kappa, "thermal parameter in (0, 1]");
  cmd.add_option("--angles", o.angles, "theta1,theta2,theta1',theta2', e.g. pi/8,pi/4,3pi/8,0");
  cmd.add_flag("--mirror-second-beam", o.mirror, "measure the second polarizer angle in the opposite sense");
}

ExperimentConfig build_config(const Overrides& o) {
  ExperimentConfig c = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (!o.engine.empty()) {
    c.engine = parse_engine(o.engine);
  }
  if (!o.state.empty()) {
    c.state = StateSpec{};
    c.state.kind = parse_state_kind(o.state);
    if (c.state.kind == StateKind::mixture || c.state.kind == StateKind::file) {
      throw std::invalid_argument(fmt::format("state '{}' must be given in a config file", o.state));
    }
  }
  if (!o.z.empty()) {
    const auto parts = split(o.z, ',');
    if (parts.size() != 4) {
      throw std::invalid_argument("--z: expected 4 comma-separated amplitudes");
    }
    c.state.kind = StateKind::coherent;
    for (std::size_t i = 0; i < 4; ++i) {
      c.state.z[i] = parse_complex(parts[i]);
    }
  }
  if (!std::isnan(o.u) || !std::isnan(o.v) || !std::isnan(o.kappa)) {
    c.state.kind = StateKind::squeezed_thermal;
    if (!std::isnan(o.u)) {
      c.state.squeezed.u = o.u;
    }
    if (!std::isnan(o.v)) {
      c.state.squeezed.v = o.v;
    }
    if (!std::isnan(o.kappa)) {
      c.state.squeezed.kappa = o.kappa;
    }
  }
  if (c.state.kind == StateKind::squeezed_thermal) {
    c.state.squeezed.validate();
  }
  if (c.state.kind == StateKind::coherent) {
    (void)ClassicalMixture::single(c.state.z);
  }
  if (!o.angles.empty()) {
    const auto parts = split(o.angles, ',');
    if (parts.size() != 4) {
      throw std::invalid_argument("--angles: expected 4 comma-separated angles");
    }
    c.angles = {parse_angle(parts[0]), parse_angle(parts[1]), parse_angle(parts[2]), parse_angle(parts[3])};
  }
  if (o.cutoff >= 0) {
    c.cutoff = o.cutoff;
  }
  if (o.seed >= 0) {
    c.seed = static_cast<std::uint64_t>(o.seed);
  }
  if (!o.out.empty()) {
    c.out = o.out;
  }
  if (o.grid >= 0) {
    if (o.grid < 2) {
      throw std::invalid_argument("--grid: must be >= 2");
    }
    c.scan.grid = o.grid;
  }
  if (o.refine) {
    c.scan.refine = true;
  }
  if (o.no_refine) {
    c.scan.refine = false;
  }
  if (!o.objective.empty()) {
    c.scan.objective = parse_scan_objective(o.objective);
  }
  if (o.trials >= 0) {
    c.trials = o.trials;
  }
  if (!o.u_range.empty()) {
    const auto r = numbers(o.u_range, 3, "--u-range");
    c.sweep.u_min = r[0];
    c.sweep.u_max = r[1];
    c.sweep.u_step = r[2];
    (void)c.sweep.u_values();
  }
  if (!o.scenarios.empty()) {
    c.sweep.scenarios = split(o.scenarios, ',');
    for (const auto& s : c.sweep.scenarios) {
      (void)scenario_v(s, 0.0);
    }
  }
  if (!o.kappas.empty()) {
    c.sweep.kappas = numbers(o.kappas, 0, "--kappas");
    for (double k : c.sweep.kappas) {
      SqueezedThermalSpec{0, 0, k}.validate();
    }
  }
  if (o.mirror) {
    c.geometry.mirror_second_beam = true;
  }
  return c;
}

}  // namespace

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Clauser-Horne inequality tests for Fock, coherent and Gaussian states", "bellsim"};
  app.require_subcommand(1);
  Overrides o;

  CLI::App* run = app.add_subcommand("run", "evaluate the functional at fixed angles");
  CLI::App* scan = app.add_subcommand("scan", "search the angles for the largest violation");
  CLI::App* sweep = app.add_subcommand("sweep", "squeezed thermal parameter sweep, CSV output");
  CLI::App* validate = app.add_subcommand("validate", "run the built-in validation suites");
  for (CLI::App* cmd : {run, scan, sweep, validate}) {
    add_common(*cmd, o);
  }
  for (CLI::App* cmd : {run, scan}) {
    cmd->add_option("--grid", o.grid, "angle grid density per axis");
    cmd->add_flag("--refine", o.refine, "refine the best grid point (default)");
    cmd->add_flag("--no-refine", o.no_refine, "grid search only");
    cmd->add_option("--objective", o.objective, "upper | lower | either");
  }
  sweep->add_option("--u-range", o.u_range, "min,max,step");
  sweep->add_option("--scenarios", o.scenarios, "comma-separated subset of v=u,v=0,v=-u");
  sweep->add_option("--kappas", o.kappas, "comma-separated kappa values");
  validate->add_option("--trials", o.trials, "random classical trials");
  validate->add_flag("--corrupt-tolerance", o.corrupt)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream cli_out, cli_err;
    const int code = app.exit(e, cli_out, cli_err);
    out << cli_out.str();
    err << cli_err.str();
    return code == 0 ? exit_ok : exit_error;
  }

  try {
    const ExperimentConfig config = build_config(o);
    if (run->parsed()) {
      return cmd_run(config, out, err);
    }
    if (scan->parsed()) {
      return cmd_scan(config, out, err);
    }
    if (sweep->parsed()) {
      return cmd_sweep(config, out, err);
    }
    return cmd_validate(config, {o.corrupt}, out, err);
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return exit_error;
  }
}

}  // namespace bellsim::cli
