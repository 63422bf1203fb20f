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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "bellsim/cli/commands.hpp"

using namespace bellsim;
using namespace bellsim::cli;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"bellsim"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = run_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "bellsim_unit";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("complex numbers") {
  CHECK(parse_complex("1") == cplx(1, 0));
  CHECK(parse_complex("-0.5") == cplx(-0.5, 0));
  CHECK(parse_complex("0.3+0.2i") == cplx(0.3, 0.2));
  CHECK(parse_complex("1-1j") == cplx(1, -1));
  CHECK(parse_complex("2i") == cplx(0, 2));
  CHECK(parse_complex("-i") == cplx(0, -1));
  CHECK(parse_complex("1e-3+2e-1i") == cplx(1e-3, 0.2));
  CHECK_THROWS(parse_complex("abc"));
  CHECK_THROWS(parse_complex(""));
}

TEST_CASE("config parsing") {
  const auto c = parse_config(json::parse(R"({
    "engine": "both",
    "state": {"kind": "squeezed_thermal", "u": 0.2, "v": -0.1},
    "angles": ["pi/8", "pi/4", "3pi/8", 0],
    "scan": {"grid": 8, "refine": false, "objective": "lower"},
    "cutoff": 12, "seed": 5, "trials": 10,
    "sweep": {"u": [0, 0.5, 0.1], "scenarios": ["v=0"], "kappa": [0.9]},
    "policy": {"verdict_tol": 1e-8},
    "mirror_second_beam": true
  })"));
  CHECK(*c.engine == Engine::both);
  CHECK(c.state.kind == StateKind::squeezed_thermal);
  CHECK(c.state.squeezed.v == -0.1);
  CHECK(c.state.squeezed.kappa == 1.0);
  CHECK(c.angles.theta1 == doctest::Approx(std::numbers::pi / 8));
  CHECK(c.scan.grid == 8);
  CHECK_FALSE(c.scan.refine);
  CHECK(c.scan.objective == ScanObjective::lower);
  CHECK(*c.cutoff == 12);
  CHECK(c.seed == 5);
  CHECK(c.sweep.u_values().size() == 6);
  CHECK(c.policy.verdict_tol == 1e-8);
  CHECK(c.geometry.mirror_second_beam);

  const auto m = parse_config(json::parse(R"({"state": {"kind": "mixture", "components": [
      {"weight": 0.5, "z": [1, "0.5i", [0, 1], 0]}, {"weight": 0.5, "z": [0, 0, 0, 0]}]}})"));
  CHECK(m.state.components.size() == 2);
  CHECK(m.state.components[0].z[2] == cplx(0, 1));
  CHECK(parse_config(json::parse(R"({"state": "vacuum"})")).state.kind == StateKind::vacuum);
}

TEST_CASE("invalid configs") {
  CHECK_THROWS_AS(parse_config(json::parse(R"({"engin": "fock"})")), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"state": {"kind": "coherent", "z": [1, 0, 1, 0], "x": 1}})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"policy": {"tol": 1}})")), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"engine": "exact"})")), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"state": {"kind": "squeezed_thermal", "kappa": 0}})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"angles": [0, 0, 0]})")), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"sweep": {"scenarios": ["v=2u"]}})")), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"state": {"kind": "mixture", "components": [
      {"weight": 0.4, "z": [0, 0, 0, 0]}]}})")), std::invalid_argument);
  CHECK_THROWS(load_config(scratch("does_not_exist.json")));
}

TEST_CASE("sweep grid") {
  SweepSpec s;
  const auto us = s.u_values();
  CHECK(us.size() == 61);
  CHECK(us.back() == doctest::Approx(1.2));
  s.u_max = 0;
  CHECK(s.u_values() == std::vector<double>{0.0});
  s.u_max = -1;
  CHECK_THROWS(s.u_values());
  CHECK(scenario_v("v=-u", 0.3) == -0.3);
}

TEST_CASE("sweep csv") {
  ExperimentConfig c;
  c.sweep.u_max = 0.1;
  const auto rows = run_sweep(c);
  CHECK(rows.size() == 6 * 3 * 3);
  std::ostringstream a, b;
  write_sweep_csv(a, rows);
  write_sweep_csv(b, run_sweep(c));
  CHECK(a.str() == b.str());
  const std::string text = a.str();
  CHECK(text.rfind("u,v,kappa,f,neg_p_both,violated\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.find("\n0,0,1,0,0,0\n") != std::string::npos);
  CHECK(text.find("0.10000000000000001,-0.10000000000000001,0.80000000000000004,") != std::string::npos);
  for (const auto& r : rows) {
    CHECK(sweep_row_consistent(r, c.policy.verdict_tol));
  }
}

TEST_CASE("sweep row consistency") {
  SweepRow r;
  r.report.p_none_none = 0.5;
  r.report.f = -0.2;
  CHECK(sweep_row_consistent(r, 1e-9));
  r.report.verdict = Verdict::violated;
  CHECK_FALSE(sweep_row_consistent(r, 1e-9));
  r.report.f = 0.1;
  CHECK(sweep_row_consistent(r, 1e-9));
}

TEST_CASE("engine selection") {
  ExperimentConfig c;
  CHECK(prepare_sources(c).front().engine == "fock");
  c.state.kind = StateKind::coherent;
  c.state.z = {1.0, 0.0, 1.0, 0.0};
  CHECK(prepare_sources(c).front().engine == "analytic");
  c.engine = Engine::both;
  const auto both = prepare_sources(c);
  REQUIRE(both.size() == 2);
  CHECK(both[1].cutoff >= 16);
  c.engine = Engine::gaussian;
  CHECK_THROWS_AS(prepare_sources(c), std::invalid_argument);
  c.engine = Engine::fock;
  c.state.z = {2.0, 0.0, 2.0, 0.0};
  const auto grown = prepare_sources(c);
  CHECK(grown.front().cutoff > 16);
  CHECK(grown.front().source.error_bar <= 2 * c.policy.tail_tol);
  c.cutoff = 10;
  CHECK_THROWS_AS(prepare_sources(c), TruncationError);
  c = {};
  c.state.kind = StateKind::squeezed_thermal;
  c.state.squeezed = {0.2, 0.1, 0.9};
  CHECK(prepare_sources(c).front().engine == "gaussian");
  c.engine = Engine::fock;
  CHECK_THROWS_AS(prepare_sources(c), std::invalid_argument);
}

TEST_CASE("state files") {
  const auto g = scratch("thermal.json");
  json gj;
  gj["G"] = std::vector<std::vector<double>>(8, std::vector<double>(8, 0.0));
  for (int i = 0; i < 8; ++i) {
    gj["G"][static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 0.7;
  }
  write_file(g, gj.dump());
  const auto fs = load_state_file(g, std::nullopt, {});
  REQUIRE(fs.gaussian);
  CHECK(fs.gaussian->g()(3, 3) == 0.7);

  const auto f = scratch("photon.json");
  write_file(f, R"({"amplitudes": [{"occupation": [1, 0, 0, 1], "amplitude": 0.6},
                                   {"occupation": [0, 1, 1, 0], "amplitude": [0, 0.8]}]})");
  const auto ff = load_state_file(f, std::nullopt, {});
  REQUIRE(ff.fock);
  CHECK(ff.fock->basis().cutoff() == 2);
  CHECK(ff.fock->norm_squared() == doctest::Approx(1.0));

  write_file(f, R"({"amplitudes": [{"occupation": [1, 0, 0, 1], "amplitude": 0.6}]})");
  CHECK_THROWS_AS(load_state_file(f, std::nullopt, {}), std::invalid_argument);
}

TEST_CASE("run command") {
  const auto r = invoke({"run"});
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("verdict       violated") != std::string::npos);
  CHECK(r.out.find("f             0.1035533905932737") != std::string::npos);

  const auto coh = invoke({"run", "--z", "1,0,1,0", "--angles", "0.3,1.1,2.0,0.7"});
  CHECK(coh.code == exit_ok);
  CHECK(coh.out.find("not violated") != std::string::npos);

  const auto vac = invoke({"run", "--state", "vacuum"});
  CHECK(vac.out.find("f             0\n") != std::string::npos);

  const auto csv = scratch("run.csv");
  CHECK(invoke({"run", "--out", csv.string().c_str()}).code == exit_ok);
  const std::string text = slurp(csv);
  CHECK(text.rfind("engine,theta1,", 0) == 0);
  CHECK(text.find("\nfock,0.39269908169872414,") != std::string::npos);
}

TEST_CASE("config file and overrides") {
  const auto cfg = scratch("cfg.json");
  write_file(cfg, R"({"state": {"kind": "squeezed_thermal", "u": 0.3, "v": 0.3}, "engine": "both", "cutoff": 20})");
  const auto a = invoke({"run", "--config", cfg.string().c_str()});
  CHECK(a.code == exit_ok);
  CHECK(a.out.find("cross-check fock vs gaussian") != std::string::npos);
  const auto b = invoke({"run", "--config", cfg.string().c_str(), "--engine", "gaussian"});
  CHECK(b.out.find("cross-check") == std::string::npos);
  write_file(cfg, R"({"stat": "vacuum"})");
  const auto bad = invoke({"run", "--config", cfg.string().c_str()});
  CHECK(bad.code == exit_error);
  CHECK(bad.err.find("unknown field 'stat'") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(invoke({}).code == exit_error);
  CHECK(invoke({"run", "--bogus"}).code == exit_error);
  CHECK(invoke({"run", "--engine", "exact"}).code == exit_error);
  CHECK(invoke({"run", "--help"}).code == exit_ok);
  CHECK(invoke({"sweep", "--engine", "fock"}).code == exit_error);
  CHECK(invoke({"run", "--out", "/nonexistent_dir/x.csv"}).code == exit_error);

  const auto cfg = scratch("loose.json");
  write_file(cfg, R"({"policy": {"tail_tol": 1.0}})");
  const auto inc = invoke({"scan", "--config", cfg.string().c_str(), "--u", "0.5", "--v", "-0.5", "--engine", "fock",
                           "--cutoff", "2", "--no-refine"});
  CHECK(inc.out.find("inconclusive") != std::string::npos);
  CHECK(inc.code == exit_inconclusive);
}

TEST_CASE("scan command") {
  const auto vac = invoke({"scan", "--state", "vacuum", "--grid", "4"});
  CHECK(vac.code == exit_ok);
  CHECK(vac.out.find("best_value    0\n") != std::string::npos);
  const auto sq = invoke({"scan", "--u", "0.6", "--v", "0.6", "--grid", "8", "--no-refine"});
  CHECK(sq.code == exit_ok);
}

TEST_CASE("sweep command") {
  const auto csv = scratch("sweep.csv");
  const auto r = invoke({"sweep", "--u-range", "0,0.2,0.1", "--kappas", "1,0.8", "--out", csv.string().c_str()});
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("kappa=1:") != std::string::npos);
  const std::string first = slurp(csv);
  invoke({"sweep", "--u-range", "0,0.2,0.1", "--kappas", "1,0.8", "--out", csv.string().c_str()});
  CHECK(slurp(csv) == first);
  const auto stdout_csv = invoke({"sweep", "--u-range", "0,0,1", "--kappas", "1", "--scenarios", "v=u"});
  CHECK(stdout_csv.out == "u,v,kappa,f,neg_p_both,violated\n0,0,1,0,0,0\n");
}

TEST_CASE("validate command") {
  const auto ok = invoke({"validate", "--trials", "30", "--seed", "3"});
  CHECK(ok.code == exit_ok);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  const auto none = invoke({"validate", "--trials", "0"});
  CHECK(none.code == exit_ok);
  CHECK(none.err.find("warning") != std::string::npos);
  const auto bad = invoke({"validate", "--trials", "5", "--corrupt-tolerance"});
  CHECK(bad.code == exit_error);
  CHECK(bad.out.find("FAIL classical nonviolation") != std::string::npos);
  CHECK(bad.out.find("trial seed") != std::string::npos);
}

}
