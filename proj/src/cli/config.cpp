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

#include "bellsim/cli/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <stdexcept>

#include "bellsim/util/angles.hpp"

namespace bellsim::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!obj.is_object()) {
    throw std::invalid_argument(fmt::format("{}: expected an object", where));
  }
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw std::invalid_argument(fmt::format("{}: unknown field '{}'", where, item.key()));
    }
  }
}

double number(const json& j, std::string_view where) {
  if (!j.is_number()) {
    throw std::invalid_argument(fmt::format("{}: expected a number", where));
  }
  const double x = j.get<double>();
  if (!std::isfinite(x)) {
    throw std::invalid_argument(fmt::format("{}: not finite", where));
  }
  return x;
}

double angle(const json& j, std::string_view where) {
  if (j.is_string()) {
    return parse_angle(j.get<std::string>());
  }
  return number(j, where);
}

cplx complex_value(const json& j, std::string_view where) {
  if (j.is_string()) {
    return parse_complex(j.get<std::string>());
  }
  if (j.is_array()) {
    if (j.size() != 2) {
      throw std::invalid_argument(fmt::format("{}: complex pairs are [re, im]", where));
    }
    return {number(j[0], where), number(j[1], where)};
  }
  return {number(j, where), 0.0};
}

CoherentAmplitudes amplitudes(const json& j, std::string_view where) {
  if (!j.is_array() || j.size() != 4) {
    throw std::invalid_argument(fmt::format("{}: expected 4 amplitudes", where));
  }
  CoherentAmplitudes z{};
  for (std::size_t i = 0; i < 4; ++i) {
    z[i] = complex_value(j[i], where);
  }
  return z;
}

StateSpec parse_state(const json& j) {
  StateSpec s;
  if (j.is_string()) {
    s.kind = parse_state_kind(j.get<std::string>());
    if (s.kind != StateKind::two_photon && s.kind != StateKind::vacuum) {
      throw std::invalid_argument(fmt::format("state '{}' needs parameters", state_kind_name(s.kind)));
    }
    return s;
  }
  if (!j.is_object() || !j.contains("kind")) {
    throw std::invalid_argument("state: expected an object with a 'kind' field");
  }
  s.kind = parse_state_kind(j.at("kind").get<std::string>());
  switch (s.kind) {
    case StateKind::two_photon:
    case StateKind::vacuum:
      check_keys(j, {"kind"}, "state");
      break;
    case StateKind::coherent:
      check_keys(j, {"kind", "z"}, "state");
      s.z = amplitudes(j.at("z"), "state.z");
      break;
    case StateKind::mixture:
      check_keys(j, {"kind", "components"}, "state");
      if (!j.at("components").is_array()) {
        throw std::invalid_argument("state.components: expected an array");
      }
      for (const json& c : j.at("components")) {
        check_keys(c, {"weight", "z"}, "state.components[]");
        s.components.push_back({number(c.at("weight"), "state.components[].weight"),
                                amplitudes(c.at("z"), "state.components[].z")});
      }
      (void)ClassicalMixture(s.components);
      break;
    case StateKind::squeezed_thermal:
      check_keys(j, {"kind", "u", "v", "kappa"}, "state");
      s.squeezed.u = j.contains("u") ? number(j.at("u"), "state.u") : 0.0;
      s.squeezed.v = j.contains("v") ? number(j.at("v"), "state.v") : 0.0;
      s.squeezed.kappa = j.contains("kappa") ? number(j.at("kappa"), "state.kappa") : 1.0;
      s.squeezed.validate();
      break;
    case StateKind::file:
      check_keys(j, {"kind", "path"}, "state");
      s.path = j.at("path").get<std::string>();
      break;
  }
  return s;
}

void parse_policy(const json& j, NumericalPolicy& p) {
  check_keys(j,
             {"norm_tol", "hermitian_tol", "trace_tol", "psd_tol", "unitary_tol", "symplectic_tol", "imag_tol",
              "tail_tol", "verdict_tol", "uncertainty_tol", "squeeze_margin", "max_dimension",
              "max_dense_dimension"},
             "policy");
  const auto set = [&](const char* key, double& field) {
    if (j.contains(key)) {
      field = number(j.at(key), fmt::format("policy.{}", key));
      if (field < 0) {
        throw std::invalid_argument(fmt::format("policy.{}: must be non-negative", key));
      }
    }
  };
  set("norm_tol", p.norm_tol);
  set("hermitian_tol", p.hermitian_tol);
  set("trace_tol", p.trace_tol);
  set("psd_tol", p.psd_tol);
  set("unitary_tol", p.unitary_tol);
  set("symplectic_tol", p.symplectic_tol);
  set("imag_tol", p.imag_tol);
  set("tail_tol", p.tail_tol);
  set("verdict_tol", p.verdict_tol);
  set("uncertainty_tol", p.uncertainty_tol);
  set("squeeze_margin", p.squeeze_margin);
  if (j.contains("max_dimension")) {
    p.max_dimension = j.at("max_dimension").get<std::size_t>();
  }
  if (j.contains("max_dense_dimension")) {
    p.max_dense_dimension = j.at("max_dense_dimension").get<std::size_t>();
  }
}

void parse_sweep(const json& j, SweepSpec& s) {
  check_keys(j, {"u", "scenarios", "kappa"}, "sweep");
  if (j.contains("u")) {
    const json& u = j.at("u");
    if (!u.is_array() || u.size() != 3) {
      throw std::invalid_argument("sweep.u: expected [min, max, step]");
    }
    s.u_min = number(u[0], "sweep.u");
    s.u_max = number(u[1], "sweep.u");
    s.u_step = number(u[2], "sweep.u");
  }
  if (j.contains("scenarios")) {
    s.scenarios = j.at("scenarios").get<std::vector<std::string>>();
  }
  if (j.contains("kappa")) {
    s.kappas.clear();
    for (const json& k : j.at("kappa")) {
      s.kappas.push_back(number(k, "sweep.kappa"));
    }
  }
  (void)s.u_values();
  for (const auto& sc : s.scenarios) {
    (void)scenario_v(sc, 0.0);
  }
  for (double k : s.kappas) {
    SqueezedThermalSpec{0, 0, k}.validate();
  }
}

}  // namespace

Engine parse_engine(std::string_view name) {
  if (name == "fock") {
    return Engine::fock;
  }
  if (name == "gaussian") {
    return Engine::gaussian;
  }
  if (name == "both") {
    return Engine::both;
  }
  throw std::invalid_argument(fmt::format("unknown engine '{}' (fock|gaussian|both)", name));
}

std::string_view engine_name(Engine engine) {
  switch (engine) {
    case Engine::fock:
      return "fock";
    case Engine::gaussian:
      return "gaussian";
    case Engine::both:
      return "both";
  }
  return "unknown";
}

StateKind parse_state_kind(std::string_view name) {
  static constexpr std::pair<std::string_view, StateKind> names[] = {
      {"two_photon", StateKind::two_photon}, {"vacuum", StateKind::vacuum},
      {"coherent", StateKind::coherent},     {"mixture", StateKind::mixture},
      {"squeezed_thermal", StateKind::squeezed_thermal}, {"file", StateKind::file}};
  for (const auto& [n, k] : names) {
    if (n == name) {
      return k;
    }
  }
  throw std::invalid_argument(
      fmt::format("unknown state '{}' (two_photon|vacuum|coherent|mixture|squeezed_thermal|file)", name));
}

std::string_view state_kind_name(StateKind kind) {
  switch (kind) {
    case StateKind::two_photon:
      return "two_photon";
    case StateKind::vacuum:
      return "vacuum";
    case StateKind::coherent:
      return "coherent";
    case StateKind::mixture:
      return "mixture";
    case StateKind::squeezed_thermal:
      return "squeezed_thermal";
    case StateKind::file:
      return "file";
  }
  return "unknown";
}

std::vector<double> SweepSpec::u_values() const {
  if (u_max < u_min) {
    throw std::invalid_argument("sweep: u max is below u min");
  }
  if (u_max == u_min) {
    return {u_min};
  }
  if (!(u_step > 0)) {
    throw std::invalid_argument("sweep: u step must be positive");
  }
  const double span = (u_max - u_min) / u_step;
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  if (count > 1'000'000) {
    throw std::invalid_argument("sweep: too many points");
  }
  std::vector<double> us(count);
  for (std::size_t i = 0; i < count; ++i) {
    us[i] = u_min + static_cast<double>(i) * u_step;
  }
  return us;
}

double scenario_v(std::string_view scenario, double u) {
  if (scenario == "v=u") {
    return u;
  }
  if (scenario == "v=0") {
    return 0.0;
  }
  if (scenario == "v=-u") {
    return -u;
  }
  throw std::invalid_argument(fmt::format("unknown sweep scenario '{}' (v=u|v=0|v=-u)", scenario));
}

ExperimentConfig parse_config(const json& j) {
  check_keys(j,
             {"engine", "state", "angles", "scan", "cutoff", "seed", "out", "trials", "sweep", "policy",
              "mirror_second_beam"},
             "config");
  ExperimentConfig c;
  if (j.contains("engine")) {
    c.engine = parse_engine(j.at("engine").get<std::string>());
  }
  if (j.contains("state")) {
    c.state = parse_state(j.at("state"));
  }
  if (j.contains("angles")) {
    const json& a = j.at("angles");
    if (!a.is_array() || a.size() != 4) {
      throw std::invalid_argument("angles: expected [theta1, theta2, theta1', theta2']");
    }
    c.angles = {angle(a[0], "angles"), angle(a[1], "angles"), angle(a[2], "angles"), angle(a[3], "angles")};
  }
  if (j.contains("scan")) {
    const json& s = j.at("scan");
    check_keys(s, {"grid", "refine", "objective", "max_evaluations"}, "scan");
    if (s.contains("grid")) {
      c.scan.grid = s.at("grid").get<int>();
    }
    if (s.contains("refine")) {
      c.scan.refine = s.at("refine").get<bool>();
    }
    if (s.contains("objective")) {
      c.scan.objective = parse_scan_objective(s.at("objective").get<std::string>());
    }
    if (s.contains("max_evaluations")) {
      c.scan.simplex.max_evaluations = s.at("max_evaluations").get<int>();
    }
    if (c.scan.grid < 2) {
      throw std::invalid_argument("scan.grid: must be >= 2");
    }
  }
  if (j.contains("cutoff")) {
    c.cutoff = j.at("cutoff").get<int>();
    if (*c.cutoff < 0) {
      throw std::invalid_argument("cutoff: must be >= 0");
    }
  }
  if (j.contains("seed")) {
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("out")) {
    c.out = j.at("out").get<std::string>();
  }
  if (j.contains("trials")) {
    c.trials = j.at("trials").get<int>();
    if (c.trials < 0) {
      throw std::invalid_argument("trials: must be >= 0");
    }
  }
  if (j.contains("sweep")) {
    parse_sweep(j.at("sweep"), c.sweep);
  }
  if (j.contains("policy")) {
    parse_policy(j.at("policy"), c.policy);
  }
  if (j.contains("mirror_second_beam")) {
    c.geometry.mirror_second_beam = j.at("mirror_second_beam").get<bool>();
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument(fmt::format("cannot open config '{}'", path.string()));
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(fmt::format("{}: {}", path.string(), e.what()));
  }
  try {
    return parse_config(j);
  } catch (const json::exception& e) {
    throw std::invalid_argument(fmt::format("{}: {}", path.string(), e.what()));
  }
}

cplx parse_complex(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (ch != ' ') {
      s.push_back(ch);
    }
  }
  if (s.empty()) {
    throw std::invalid_argument("empty complex number");
  }
  const auto to_double = [&](std::string_view part) {
    if (part.empty() || part == "+") {
      return 1.0;
    }
    if (part == "-") {
      return -1.0;
    }
    double x = 0.0;
    const char* first = part.data() + (part.front() == '+' ? 1 : 0);
    const auto [ptr, ec] = std::from_chars(first, part.data() + part.size(), x);
    if (ec != std::errc() || ptr != part.data() + part.size() || !std::isfinite(x)) {
      throw std::invalid_argument(fmt::format("cannot parse complex number '{}'", text));
    }
    return x;
  };
  const char last = s.back();
  if (last != 'i' && last != 'j') {
    return {to_double(s), 0.0};
  }
  s.pop_back();
  // split at the last sign that is not part of an exponent
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) {
    return {0.0, to_double(s)};
  }
  return {to_double(std::string_view(s).substr(0, split)), to_double(std::string_view(s).substr(split))};
}

FileState load_state_file(const std::filesystem::path& path, std::optional<int> cutoff, const NumericalPolicy& policy) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument(fmt::format("cannot open state file '{}'", path.string()));
  }
  const json j = json::parse(in);
  FileState out;
  if (j.contains("G")) {
    check_keys(j, {"G"}, "state file");
    const auto rows = j.at("G").get<std::vector<std::vector<double>>>();
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)].size()) != n) {
        throw std::invalid_argument("state file: G must be square");
      }
      for (Eigen::Index c = 0; c < n; ++c) {
        g(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      }
    }
    out.gaussian.emplace(g, policy);
    if (out.gaussian->mode_count() != 4) {
      throw std::invalid_argument("state file: G must describe 4 modes (8 x 8)");
    }
    return out;
  }
  check_keys(j, {"cutoff", "amplitudes"}, "state file");
  int n = cutoff.value_or(j.contains("cutoff") ? j.at("cutoff").get<int>() : -1);
  std::vector<std::pair<std::vector<int>, cplx>> entries;
  for (const json& a : j.at("amplitudes")) {
    check_keys(a, {"occupation", "amplitude"}, "state file amplitudes[]");
    auto occ = a.at("occupation").get<std::vector<int>>();
    if (occ.size() != 4 || std::any_of(occ.begin(), occ.end(), [](int x) { return x < 0; })) {
      throw std::invalid_argument("state file: occupations must be 4 non-negative integers");
    }
    entries.emplace_back(std::move(occ), complex_value(a.at("amplitude"), "state file amplitude"));
  }
  if (n < 0) {
    // no cutoff given anywhere: smallest one holding every entry
    n = 0;
    for (const auto& [occ, amp] : entries) {
      n = std::max(n, occ[0] + occ[1] + occ[2] + occ[3]);
    }
  }
  const BasisPtr basis = make_basis(4, n, policy);
  std::vector<cplx> amps(basis->size());
  for (const auto& [occ, amp] : entries) {
    const auto idx = basis->find(occ);
    if (!idx) {
      throw std::invalid_argument(fmt::format("state file: occupation outside cutoff {}", n));
    }
    amps[*idx] += amp;
  }
  OccupationState state(basis, std::move(amps));
  if (std::abs(state.norm_squared() - 1.0) > policy.norm_tol) {
    throw std::invalid_argument(fmt::format("state file: state norm^2 is {:.12g}, expected 1", state.norm_squared()));
  }
  out.fock.emplace(std::move(state));
  return out;
}

}  // namespace bellsim::cli
