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

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bellsim/coherent/coherent.hpp"
#include "bellsim/common.hpp"
#include "bellsim/detection/detection.hpp"
#include "bellsim/detection/scan.hpp"
#include "bellsim/gaussian/gaussian.hpp"

namespace bellsim::cli {

enum class Engine { fock, gaussian, both };
Engine parse_engine(std::string_view name);
std::string_view engine_name(Engine engine);

enum class StateKind { two_photon, vacuum, coherent, mixture, squeezed_thermal, file };
StateKind parse_state_kind(std::string_view name);
std::string_view state_kind_name(StateKind kind);

struct StateSpec {
  StateKind kind = StateKind::two_photon;
  CoherentAmplitudes z{};
  std::vector<MixtureComponent> components;
  SqueezedThermalSpec squeezed{};
  std::filesystem::path path;
};

/// Parameter grid of the sweep command. Each scenario fixes v as a function
/// of u: "v=u", "v=0" or "v=-u".
struct SweepSpec {
  double u_min = 0.0;
  double u_max = 1.2;
  double u_step = 0.02;
  std::vector<std::string> scenarios{"v=u", "v=0", "v=-u"};
  std::vector<double> kappas{1.0, 0.9, 0.8};

  std::vector<double> u_values() const;
};

double scenario_v(std::string_view scenario, double u);

struct ExperimentConfig {
  /// Unset: the exact engine for the state (closed form for coherent states,
  /// Gaussian for squeezed thermal states, Fock otherwise).
  std::optional<Engine> engine;
  StateSpec state;
  AngleSettings angles{std::numbers::pi / 8, std::numbers::pi / 4, 3 * std::numbers::pi / 8, 0.0};
  ScanOptions scan{};
  /// Unset: chosen from the state, grown until the truncation tail fits.
  std::optional<int> cutoff;
  std::uint64_t seed = 1;
  std::optional<std::filesystem::path> out;
  int trials = 1000;
  SweepSpec sweep{};
  Geometry geometry{};
  NumericalPolicy policy{};
};

/// Reads the JSON schema documented in README.md. Unknown keys are errors.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Parses "1", "-0.5", "0.3+0.2i", "2i", "1-1j".
cplx parse_complex(std::string_view text);

/// Reads a state file: either {"G": [[...]]} for a Gaussian state or
/// {"cutoff": N, "amplitudes": [{"occupation": [...], "amplitude": [re, im]}]}
/// for a 4-mode Fock state.
struct FileState {
  std::optional<GaussianState> gaussian;
  std::optional<OccupationState> fock;
};
FileState load_state_file(const std::filesystem::path& path, std::optional<int> cutoff, const NumericalPolicy& policy);

}  // namespace bellsim::cli
