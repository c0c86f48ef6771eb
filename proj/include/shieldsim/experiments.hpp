#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "shieldsim/bands.hpp"
#include "shieldsim/config.hpp"
#include "shieldsim/csv.hpp"

namespace shieldsim {

struct RunOptions {
  int threads = 1;
  std::optional<PropagatorChoice> propagator;  // overrides the config when set
};

struct ExperimentOutput {
  std::string name;
  /// (suffix, table); the main table has an empty suffix and is written to
  /// <name>.csv, the others to <name>_<suffix>.csv.
  std::vector<std::pair<std::string, Table>> tables;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<std::string> warnings;

  const Table& table(const std::string& suffix = "") const;
};

/// One parameter set of a scan, series variable outermost.
struct ScanPoint {
  ModelParams model;
  int band = 1;
  double value = 0.0;         // primary scan value
  double series_value = 0.0;  // series scan value
};

std::vector<ScanPoint> scan_points(const ExperimentConfig& cfg);

/// Initial state of realization `index` in the x basis.
StateVector initial_state(const ExperimentConfig& cfg, const ScanPoint& point, const BandTable& table,
                          std::size_t index);

/// Sum of the analytic leakage estimates that apply to the point; NaN when
/// none does.
double leakage_estimate(const ScanPoint& point);

ExperimentOutput run_lightcone(const ExperimentConfig& cfg, const RunOptions& opts);
ExperimentOutput run_band_dynamics(const ExperimentConfig& cfg, const RunOptions& opts);
ExperimentOutput run_leakage_scan(const ExperimentConfig& cfg, const RunOptions& opts);
ExperimentOutput run_fidelity_scan(const ExperimentConfig& cfg, const RunOptions& opts);
ExperimentOutput run_reversal_scan(const ExperimentConfig& cfg, const RunOptions& opts);
ExperimentOutput run_spectrum(const ExperimentConfig& cfg, const RunOptions& opts);
ExperimentOutput run_estimate(const ExperimentConfig& cfg, const RunOptions& opts);

ExperimentOutput run_experiment(const ExperimentConfig& cfg, const RunOptions& opts);

/// Everything needed to replay a run.
nlohmann::json make_manifest(const ExperimentConfig& cfg, const RunOptions& opts,
                             const ExperimentOutput& output, double wall_seconds);

/// Writes every table, <name>.fit.json (when the summary is nonempty) and
/// <name>.manifest.json into `dir`. Returns the written paths.
std::vector<std::string> write_outputs(const ExperimentConfig& cfg, const RunOptions& opts,
                                       const ExperimentOutput& output, const std::string& dir,
                                       double wall_seconds);

const char* version_string();

}  // namespace shieldsim
