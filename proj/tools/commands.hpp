#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <string>

#include "dirion/error.hpp"
#include "json.hpp"
#include "run_config.hpp"

namespace dirion::cli {

enum ExitCode { kOk = 0, kConfigError = 2, kNumericalFailure = 3, kValidationFailure = 4 };

// Maps a library error to the process exit code.
int exit_code_for(const std::exception& e);

// Coupling set for a config, through the in-process and on-disk caches.
std::shared_ptr<const CouplingSet> coupling_for(const RunConfig& cfg, std::ostream& log);

// Writes <output>_spectrum.csv and <output>_eigen.json; returns the summary.
nlohmann::json cmd_eigen(const RunConfig& cfg, std::ostream& log);

struct PropagateOutcome {
  bool ok = false;
  nlohmann::json result;  // also written to <output>.json
  std::string error;
  ErrorKind error_kind = ErrorKind::internal;
};
// Writes <output>.json, <output>_populations.csv, <output>_checkpoints.csv.
// With write_files = false nothing touches the disk (sweep points).
PropagateOutcome cmd_propagate(const RunConfig& cfg, std::ostream& log, bool write_files = true);

struct SweepOutcome {
  int completed = 0;
  int skipped = 0;  // already present in the journal
  int failed = 0;
};
// Long-format CSV at <output>.csv in axis order, journal at
// <output>.journal.csv (resumable), manifest at <output>.manifest.json.
SweepOutcome cmd_sweep(const SweepSpec& spec, std::ostream& log);
int worker_count(const SweepSpec& spec);

struct ScaleArgs {
  double z = 0.0;
  std::optional<double> wavelength_nm;
  std::optional<double> photon_energy_au;
  std::optional<double> intensity_wcm2;
  std::optional<double> field_au;
  double cycles = 20.0;
  std::string rate_table;      // input (hydrogen, scaled units)
  std::string rate_table_out;  // transformed output
};
nlohmann::json cmd_scale(const ScaleArgs& args);

struct ValidateArgs {
  int basis_n = 200;
  bool mutate_velocity = false;
};
// Report with one entry per check; "pass" is the conjunction.
nlohmann::json cmd_validate(const ValidateArgs& args, std::ostream& log);

// Config text from a config file or from the manifest of a results JSON.
std::string config_text_from_file(const std::string& path);

nlohmann::json manifest(const RunConfig& cfg, double wall_seconds, const std::string& kernel);

}  // namespace dirion::cli
