// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "liouspec/certify.hpp"
#include "liouspec/config.hpp"
#include "liouspec/spectra.hpp"

namespace liouspec {

inline constexpr int kSchemaVersion = 1;

/// Writes to a sibling temporary file and renames it over `path`.
void atomic_write(const std::string& path, const std::string& content);

struct CommandOutput {
  std::string report;    // report.json text
  std::string csv;       // empty when the command has no table
  std::string csv_name;  // spectrum.csv or sweep.csv
};

/// Wedge and numerical-range evidence for K_θ at the configured spectrum n_max.
struct WedgeRun {
  int dimension = 0;
  int blocks = 0;
  double c0 = 0.0;
  double sum_norm_half = 0.0;
  double a_required = 0.0;
  double a = 0.0;
  SpectrumReport spectrum;
  std::vector<cplx> rayleigh;
  int rayleigh_violations = 0;
  double rayleigh_min_margin = 0.0;
  RelativeBoundReport bounds;
};

WedgeRun run_wedge(const RunConfig& cfg, int rayleigh_samples = 1000);

CommandOutput run_levelshift(const RunConfig& cfg);
CommandOutput run_spectrum(const RunConfig& cfg);
CommandOutput run_resonance(const RunConfig& cfg);
CommandOutput run_thresholds(const RunConfig& cfg);
CommandOutput run_certify(const RunConfig& cfg);
CommandOutput run_sweep(const RunConfig& cfg);

/// Dispatch by subcommand name; throws PreconditionError for unknown names.
CommandOutput run_command(const std::string& name, const RunConfig& cfg);

/// report.json (and the table, if any) into `dir`, creating it when missing.
void write_outputs(const CommandOutput& out, const std::string& dir);

std::string sweep_csv(const SweepResult& s);

}  // namespace liouspec
