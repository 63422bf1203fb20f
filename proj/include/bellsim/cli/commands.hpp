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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bellsim/cli/config.hpp"

namespace bellsim::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_inconclusive = 2;

/// One way of evaluating the configured state. The first prepared source is
/// the reference; any further one is cross-checked against it.
struct PreparedSource {
  std::string engine;
  RateSource source;
  /// Fock cutoff actually used, -1 for non-Fock engines.
  int cutoff = -1;
};
std::vector<PreparedSource> prepare_sources(const ExperimentConfig& config);

/// Largest difference between the rates of two sources at the angle pairs
/// entering the functional.
double max_rate_difference(const RateSource& a, const RateSource& b, const AngleSettings& angles);

struct SweepRow {
  double u = 0.0;
  double v = 0.0;
  double kappa = 1.0;
  CoincidenceReport report;
};
std::vector<SweepRow> run_sweep(const ExperimentConfig& config);
/// Header u,v,kappa,f,neg_p_both,violated; 17 significant digits; LF endings.
void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);
/// Exactly one of "-neg_p_both - tol <= f <= tol" and "violated" holds.
bool sweep_row_consistent(const SweepRow& row, double tol);

void write_report(std::ostream& os, std::string_view engine, const CoincidenceReport& report);
void write_report_csv(std::ostream& os, std::span<const std::pair<std::string, CoincidenceReport>> rows);

struct ValidateOptions {
  /// Negative control: makes the classical suite tolerance impossible to meet.
  bool corrupt_tolerance = false;
};

int cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_scan(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_validate(const ExperimentConfig& config, const ValidateOptions& options, std::ostream& out, std::ostream& err);

/// Parses the command line, dispatches and maps exceptions to exit codes.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bellsim::cli
