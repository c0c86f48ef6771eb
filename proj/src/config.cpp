#include "shieldsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "shieldsim/errors.hpp"

namespace shieldsim {

namespace {

struct NameEntry {
  ExperimentKind kind;
  const char* name;
};

constexpr NameEntry kExperiments[] = {
    {ExperimentKind::Lightcone, "lightcone"},         {ExperimentKind::BandDynamics, "band_dynamics"},
    {ExperimentKind::LeakageScan, "leakage_scan"},    {ExperimentKind::FidelityScan, "fidelity_scan"},
    {ExperimentKind::ReversalScan, "reversal_scan"},  {ExperimentKind::Spectrum, "spectrum"},
    {ExperimentKind::Estimate, "estimate"},
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view text, int line, std::string_view key) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError("'" + std::string(key) + "' expects a number, got '" + std::string(text) + "'", line);
  }
  return v;
}

long long to_integer(std::string_view text, int line, std::string_view key) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("'" + std::string(key) + "' expects an integer, got '" + std::string(text) + "'", line);
  }
  return v;
}

bool to_bool(std::string_view text, int line, std::string_view key) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw ConfigError("'" + std::string(key) + "' expects true or false", line);
}

std::vector<double> to_list(std::string_view text, int line, std::string_view key) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto next = text.find_first_of(", ", pos);
    if (next == std::string_view::npos) next = text.size();
    const auto item = trim(text.substr(pos, next - pos));
    if (!item.empty()) out.push_back(to_double(item, line, key));
    pos = next + 1;
  }
  if (out.empty()) throw ConfigError("'" + std::string(key) + "' needs at least one value", line);
  return out;
}

ScanVariable to_scan_variable(std::string_view text, int line) {
  if (text == "W") return ScanVariable::W;
  if (text == "Jz") return ScanVariable::Jz;
  if (text == "L") return ScanVariable::L;
  if (text == "alpha") return ScanVariable::Alpha;
  if (text == "J") return ScanVariable::J;
  if (text == "B") return ScanVariable::B;
  if (text == "b") return ScanVariable::Band;
  throw ConfigError("unknown scan variable '" + std::string(text) + "' (W, Jz, L, alpha, J, B, b)", line);
}

// Keys that name the same quantity as a scan variable.
std::string_view fixed_key(ScanVariable v) {
  switch (v) {
    case ScanVariable::W: return "model.W";
    case ScanVariable::Jz: return "model.Jz";
    case ScanVariable::L: return "model.L";
    case ScanVariable::Alpha: return "model.alpha";
    case ScanVariable::J: return "model.J";
    case ScanVariable::B: return "model.B";
    case ScanVariable::Band: return "initial_state.b";
    case ScanVariable::None: break;
  }
  return {};
}

const std::map<std::string, std::set<std::string>, std::less<>> kKeys = {
    {"", {"experiment", "name"}},
    {"model", {"L", "B", "W", "J", "Jz", "alpha"}},
    {"initial_state", {"kind", "pattern", "b", "include_mirror"}},
    {"grid", {"t_max", "n_steps", "spacing", "t_first", "scale_by_estimate"}},
    {"ensemble", {"n_realizations", "seed"}},
    {"scan", {"variable", "values", "series_variable", "series_values"}},
    {"numerics", {"propagator", "tol"}},
    {"output", {"name"}},
    {"estimate", {"b2", "c1"}},
};

}  // namespace

const char* experiment_name(ExperimentKind kind) {
  for (const auto& e : kExperiments) {
    if (e.kind == kind) return e.name;
  }
  return "?";
}

ExperimentKind parse_experiment(std::string_view name) {
  for (const auto& e : kExperiments) {
    if (name == e.name) return e.kind;
  }
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

const char* scan_variable_name(ScanVariable v) {
  switch (v) {
    case ScanVariable::W: return "W";
    case ScanVariable::Jz: return "Jz";
    case ScanVariable::L: return "L";
    case ScanVariable::Alpha: return "alpha";
    case ScanVariable::J: return "J";
    case ScanVariable::B: return "B";
    case ScanVariable::Band: return "b";
    case ScanVariable::None: break;
  }
  return "none";
}

const char* propagator_choice_name(PropagatorChoice c) {
  switch (c) {
    case PropagatorChoice::Dense: return "dense";
    case PropagatorChoice::Chebyshev: return "cheby";
    case PropagatorChoice::Auto: break;
  }
  return "auto";
}

TimeGrid GridConfig::build(double unit) const {
  if (spacing == GridSpacing::Geometric) return TimeGrid::geometric(t_first * unit, t_max * unit, n_steps);
  return TimeGrid::linear(t_max * unit, n_steps);
}

ModelParams with_value(const ModelParams& base, ScanVariable v, double value) {
  ModelParams p = base;
  switch (v) {
    case ScanVariable::W: p.disorder_width = value; break;
    case ScanVariable::Jz: p.zz_coupling = value; break;
    case ScanVariable::L: p.sites = static_cast<int>(std::lround(value)); break;
    case ScanVariable::Alpha: p.alpha = value; break;
    case ScanVariable::J: p.coupling = value; break;
    case ScanVariable::B: p.field = value; break;
    case ScanVariable::Band:
    case ScanVariable::None: break;
  }
  return p;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::map<std::string, int, std::less<>> lines;  // "section.key" -> line
  std::string section;
  std::string raw;
  int line_no = 0;
  bool have_experiment = false;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!kKeys.contains(section) || section.empty()) {
        throw ConfigError("unknown section [" + section + "]", line_no);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;
    if (!kKeys.at(section).contains(key)) {
      throw ConfigError("unknown key '" + key + "'" + (section.empty() ? "" : " in [" + section + "]"), line_no);
    }
    if (value.empty()) throw ConfigError("key '" + key + "' has no value", line_no);
    if (!lines.emplace(full, line_no).second) throw ConfigError("duplicate key '" + full + "'", line_no);
    cfg.echo.emplace_back(full, std::string(value));

    if (full == "experiment") {
      try {
        cfg.experiment = parse_experiment(value);
      } catch (const ConfigError& e) {
        throw ConfigError(e.what(), line_no);
      }
      have_experiment = true;
    } else if (full == "name" || full == "output.name") {
      cfg.name = std::string(value);
    } else if (full == "model.L") {
      cfg.model.sites = static_cast<int>(to_integer(value, line_no, key));
    } else if (full == "model.B") {
      cfg.model.field = to_double(value, line_no, key);
    } else if (full == "model.W") {
      cfg.model.disorder_width = to_double(value, line_no, key);
    } else if (full == "model.J") {
      cfg.model.coupling = to_double(value, line_no, key);
    } else if (full == "model.Jz") {
      cfg.model.zz_coupling = to_double(value, line_no, key);
    } else if (full == "model.alpha") {
      cfg.model.alpha = to_double(value, line_no, key);
    } else if (full == "initial_state.kind") {
      if (value == "x_product") cfg.initial.kind = InitialKind::XProduct;
      else if (value == "z_product") cfg.initial.kind = InitialKind::ZProduct;
      else if (value == "central_flip") cfg.initial.kind = InitialKind::CentralFlip;
      else if (value == "random_band") cfg.initial.kind = InitialKind::RandomBand;
      else throw ConfigError("initial_state kind must be x_product, z_product, central_flip or random_band", line_no);
    } else if (full == "initial_state.pattern") {
      cfg.initial.pattern = std::string(value);
    } else if (full == "initial_state.b") {
      cfg.initial.band = static_cast<int>(to_integer(value, line_no, key));
    } else if (full == "initial_state.include_mirror") {
      cfg.initial.include_mirror = to_bool(value, line_no, key);
    } else if (full == "grid.t_max") {
      cfg.grid.t_max = to_double(value, line_no, key);
    } else if (full == "grid.n_steps") {
      cfg.grid.n_steps = static_cast<int>(to_integer(value, line_no, key));
    } else if (full == "grid.spacing") {
      if (value == "linear") cfg.grid.spacing = GridSpacing::Linear;
      else if (value == "geometric") cfg.grid.spacing = GridSpacing::Geometric;
      else throw ConfigError("grid spacing must be linear or geometric", line_no);
    } else if (full == "grid.t_first") {
      cfg.grid.t_first = to_double(value, line_no, key);
    } else if (full == "grid.scale_by_estimate") {
      cfg.grid.scale_by_estimate = to_bool(value, line_no, key);
    } else if (full == "ensemble.n_realizations") {
      const auto n = to_integer(value, line_no, key);
      if (n < 1) throw ConfigError("n_realizations must be >= 1", line_no);
      cfg.n_realizations = static_cast<std::size_t>(n);
    } else if (full == "ensemble.seed") {
      const auto* end = value.data() + value.size();
      auto [ptr, ec] = std::from_chars(value.data(), end, cfg.seed);
      if (ec != std::errc() || ptr != end) throw ConfigError("seed must be an unsigned 64-bit integer", line_no);
    } else if (full == "scan.variable") {
      cfg.scan.variable = to_scan_variable(value, line_no);
    } else if (full == "scan.values") {
      cfg.scan.values = to_list(value, line_no, key);
    } else if (full == "scan.series_variable") {
      cfg.scan.series = to_scan_variable(value, line_no);
    } else if (full == "scan.series_values") {
      cfg.scan.series_values = to_list(value, line_no, key);
    } else if (full == "numerics.propagator") {
      if (value == "auto") cfg.propagator = PropagatorChoice::Auto;
      else if (value == "dense") cfg.propagator = PropagatorChoice::Dense;
      else if (value == "cheby") cfg.propagator = PropagatorChoice::Chebyshev;
      else throw ConfigError("propagator must be auto, dense or cheby", line_no);
    } else if (full == "numerics.tol") {
      cfg.tolerance = to_double(value, line_no, key);
      if (cfg.tolerance < 1e-12) throw ConfigError("tol must be >= 1e-12", line_no);
    } else if (full == "estimate.b2") {
      cfg.band2 = static_cast<int>(to_integer(value, line_no, key));
    } else if (full == "estimate.c1") {
      cfg.c1 = to_double(value, line_no, key);
    }
  }

  if (!have_experiment) throw ConfigError("missing 'experiment' key");
  auto line_of = [&](std::string_view k) {
    const auto it = lines.find(k);
    return it == lines.end() ? 0 : it->second;
  };
  if (cfg.name.empty()) cfg.name = experiment_name(cfg.experiment);

  // Scan consistency.
  const auto& scan = cfg.scan;
  if (scan.active() != !scan.values.empty()) {
    throw ConfigError("scan needs both 'variable' and 'values'", std::max(line_of("scan.variable"), line_of("scan.values")));
  }
  if ((scan.series != ScanVariable::None) != !scan.series_values.empty()) {
    throw ConfigError("scan needs both 'series_variable' and 'series_values'",
                      std::max(line_of("scan.series_variable"), line_of("scan.series_values")));
  }
  if (scan.series != ScanVariable::None && !scan.active()) {
    throw ConfigError("series_variable needs a primary scan variable", line_of("scan.series_variable"));
  }
  if (scan.series != ScanVariable::None && scan.series == scan.variable) {
    throw ConfigError("series_variable repeats the scan variable", line_of("scan.series_variable"));
  }
  for (ScanVariable v : {scan.variable, scan.series}) {
    if (v == ScanVariable::None) continue;
    if (const int l = line_of(fixed_key(v))) {
      throw ConfigError(std::string("'") + scan_variable_name(v) + "' is scanned and also fixed", l);
    }
  }
  auto check_integral = [&](const std::vector<double>& values, std::string_view k) {
    for (double v : values) {
      if (v != std::round(v)) throw ConfigError("values of L and b must be integers", line_of(k));
    }
  };
  if (scan.variable == ScanVariable::L || scan.variable == ScanVariable::Band) check_integral(scan.values, "scan.values");
  if (scan.series == ScanVariable::L || scan.series == ScanVariable::Band) {
    check_integral(scan.series_values, "scan.series_values");
  }

  // Model invariants, checked for every scan point.
  auto check_model = [&](const ModelParams& p, int l) {
    try {
      p.validate();
    } catch (const std::exception& e) {
      throw ConfigError(e.what(), l);
    }
  };
  const std::vector<double> none{0.0};
  const auto& primary = scan.active() ? scan.values : none;
  const auto& secondary = scan.series != ScanVariable::None ? scan.series_values : none;
  for (double v : primary) {
    for (double s : secondary) {
      ModelParams p = with_value(with_value(cfg.model, scan.variable, v), scan.series, s);
      check_model(p, scan.active() ? line_of("scan.values") : line_of("model.L"));
    }
  }

  // Grid.
  if (cfg.grid.n_steps < 2) throw ConfigError("n_steps must be >= 2", line_of("grid.n_steps"));
  if (!(cfg.grid.t_max > 0.0)) throw ConfigError("t_max must be > 0", line_of("grid.t_max"));
  if (cfg.grid.spacing == GridSpacing::Geometric && !(cfg.grid.t_first > 0.0 && cfg.grid.t_first < cfg.grid.t_max)) {
    throw ConfigError("geometric grids need 0 < t_first < t_max", line_of("grid.t_first"));
  }

  // Initial state against the experiment.
  const auto kind = cfg.experiment;
  const bool needs_band = kind == ExperimentKind::BandDynamics || kind == ExperimentKind::LeakageScan ||
                          kind == ExperimentKind::FidelityScan;
  if (!line_of("initial_state.kind") && needs_band) cfg.initial.kind = InitialKind::RandomBand;
  const int kind_line = line_of("initial_state.kind");
  if (needs_band && cfg.initial.kind != InitialKind::RandomBand) {
    throw ConfigError(std::string(experiment_name(kind)) + " needs initial_state kind = random_band", kind_line);
  }
  if ((kind == ExperimentKind::Lightcone || kind == ExperimentKind::ReversalScan) &&
      cfg.initial.kind == InitialKind::RandomBand) {
    throw ConfigError(std::string(experiment_name(kind)) + " needs a product initial state", kind_line);
  }
  if (kind == ExperimentKind::ReversalScan && cfg.initial.kind != InitialKind::CentralFlip) {
    throw ConfigError("reversal_scan uses initial_state kind = central_flip", kind_line);
  }
  const bool pattern_kind = cfg.initial.kind == InitialKind::XProduct || cfg.initial.kind == InitialKind::ZProduct;
  if (pattern_kind && (kind == ExperimentKind::Lightcone)) {
    if (cfg.initial.pattern.empty()) throw ConfigError("product initial states need a pattern", kind_line);
    if (scan.variable == ScanVariable::L || scan.series == ScanVariable::L) {
      throw ConfigError("a fixed pattern cannot be combined with an L scan", line_of("initial_state.pattern"));
    }
    if (static_cast<int>(cfg.initial.pattern.size()) != cfg.model.sites) {
      throw ConfigError("pattern length differs from L", line_of("initial_state.pattern"));
    }
  }
  if (kind == ExperimentKind::Lightcone && scan.active()) {
    throw ConfigError("lightcone does not take a scan", line_of("scan.variable"));
  }
  if (kind == ExperimentKind::ReversalScan && scan.variable != ScanVariable::L) {
    throw ConfigError("reversal_scan scans L", line_of("scan.variable"));
  }
  if (kind == ExperimentKind::ReversalScan) {
    for (double v : scan.values) {
      if (static_cast<long long>(v) % 2 == 0) throw ConfigError("reversal_scan needs odd L", line_of("scan.values"));
    }
    if (cfg.model.field == 0.0 && scan.variable != ScanVariable::B && scan.series != ScanVariable::B) {
      throw ConfigError("reversal_scan needs B != 0", line_of("model.B"));
    }
  }
  if (kind == ExperimentKind::LeakageScan && !scan.active()) {
    throw ConfigError("leakage_scan needs a [scan] over W, Jz or L", 0);
  }
  if (kind == ExperimentKind::FidelityScan && !scan.active()) {
    throw ConfigError("fidelity_scan needs a [scan]", 0);
  }
  if (needs_band) {
    auto check_band_for = [&](int sites, int b) {
      if (b < 0 || b > sites / 2) {
        throw ConfigError("band b = " + std::to_string(b) + " is outside [0, L/2] for L = " + std::to_string(sites),
                          std::max(line_of("initial_state.b"), line_of("scan.values")));
      }
    };
    for (double v : primary) {
      for (double s : secondary) {
        const ModelParams p = with_value(with_value(cfg.model, scan.variable, v), scan.series, s);
        int b = cfg.initial.band;
        if (scan.variable == ScanVariable::Band) b = static_cast<int>(v);
        if (scan.series == ScanVariable::Band) b = static_cast<int>(s);
        check_band_for(p.sites, b);
      }
    }
  }
  if (cfg.grid.scale_by_estimate && kind != ExperimentKind::FidelityScan) {
    throw ConfigError("scale_by_estimate applies to fidelity_scan only", line_of("grid.scale_by_estimate"));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace shieldsim
