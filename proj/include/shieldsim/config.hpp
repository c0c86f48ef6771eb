#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shieldsim/hamiltonian.hpp"
#include "shieldsim/propagation.hpp"

namespace shieldsim {

enum class ExperimentKind {
  Lightcone,
  BandDynamics,
  LeakageScan,
  FidelityScan,
  ReversalScan,
  Spectrum,
  Estimate,
};

const char* experiment_name(ExperimentKind kind);
/// Throws ConfigError for unknown names.
ExperimentKind parse_experiment(std::string_view name);

enum class InitialKind {
  XProduct,     // pattern in the x basis
  ZProduct,     // pattern in the z basis
  CentralFlip,  // x basis, all up except the central site
  RandomBand,   // Gaussian superposition over band b
};

struct InitialStateConfig {
  InitialKind kind = InitialKind::CentralFlip;
  std::string pattern;  // site 1 first
  int band = 1;
  bool include_mirror = true;
};

enum class GridSpacing { Linear, Geometric };

struct GridConfig {
  double t_max = 10.0;
  int n_steps = 100;
  GridSpacing spacing = GridSpacing::Linear;
  double t_first = 1e-2;  // geometric grids only
  /// When set, t_max and t_first are in units of 1/deltaE for each point.
  bool scale_by_estimate = false;

  TimeGrid build(double unit = 1.0) const;
};

enum class ScanVariable { None, W, Jz, L, Alpha, J, B, Band };

const char* scan_variable_name(ScanVariable v);

struct ScanConfig {
  ScanVariable variable = ScanVariable::None;
  std::vector<double> values;
  ScanVariable series = ScanVariable::None;
  std::vector<double> series_values;

  bool active() const { return variable != ScanVariable::None; }
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Spectrum;
  std::string name;  // output file stem
  ModelParams model;
  InitialStateConfig initial;
  GridConfig grid;
  std::size_t n_realizations = 50;
  std::uint64_t seed = 1;
  ScanConfig scan;
  PropagatorChoice propagator = PropagatorChoice::Auto;
  double tolerance = 1e-12;
  double c1 = 1.0;  // estimate experiment only
  int band2 = -1;   // estimate experiment only, second band of band_gap
  /// Every key as read, "section.key" = value, in file order.
  std::vector<std::pair<std::string, std::string>> echo;
};

/// Parses the sectioned key = value format. Unknown sections or keys,
/// malformed values and inconsistent settings raise ConfigError with the
/// offending line number.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Copy of `base` with one scanned variable set to `value`.
ModelParams with_value(const ModelParams& base, ScanVariable v, double value);

const char* propagator_choice_name(PropagatorChoice c);

}  // namespace shieldsim
