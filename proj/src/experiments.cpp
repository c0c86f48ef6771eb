#include "shieldsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

#include "shieldsim/errors.hpp"
#include "shieldsim/fitting.hpp"
#include "shieldsim/observables.hpp"
#include "shieldsim/parallel.hpp"
#include "shieldsim/perturbation.hpp"
#include "shieldsim/zeno.hpp"

#ifndef SHIELDSIM_VERSION
#define SHIELDSIM_VERSION "dev"
#endif

namespace shieldsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using json = nlohmann::json;

PropagatorChoice choice_of(const ExperimentConfig& cfg, const RunOptions& opts) {
  return opts.propagator.value_or(cfg.propagator);
}

std::vector<std::string> point_columns(const ExperimentConfig& cfg) {
  std::vector<std::string> cols;
  if (cfg.scan.series != ScanVariable::None) cols.emplace_back(scan_variable_name(cfg.scan.series));
  if (cfg.scan.active()) cols.emplace_back(scan_variable_name(cfg.scan.variable));
  return cols;
}

std::vector<double> point_values(const ExperimentConfig& cfg, const ScanPoint& p) {
  std::vector<double> v;
  if (cfg.scan.series != ScanVariable::None) v.push_back(p.series_value);
  if (cfg.scan.active()) v.push_back(p.value);
  return v;
}

json point_json(const ExperimentConfig& cfg, const ScanPoint& p) {
  json j = json::object();
  if (cfg.scan.series != ScanVariable::None) j[scan_variable_name(cfg.scan.series)] = p.series_value;
  if (cfg.scan.active()) j[scan_variable_name(cfg.scan.variable)] = p.value;
  j["L"] = p.model.sites;
  j["b"] = p.band;
  return j;
}

std::vector<std::string> concat(std::vector<std::string> a, std::initializer_list<const char*> b) {
  for (const char* s : b) a.emplace_back(s);
  return a;
}

std::vector<double> concat(std::vector<double> a, std::initializer_list<double> b) {
  a.insert(a.end(), b);
  return a;
}

DisorderRealization realization_for(const ExperimentConfig& cfg, const ScanPoint& p, std::size_t index) {
  return sample_disorder(p.model, cfg.seed, index);
}

std::shared_ptr<const SparseOperator> x_operator(const ModelParams& model, const DisorderRealization& h) {
  return std::make_shared<const SparseOperator>(build_terms_x(model, h));
}

/// Group of points sharing a series value, in scan order.
std::vector<std::vector<std::size_t>> series_groups(const std::vector<ScanPoint>& points) {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<double> keys;
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto it = std::find(keys.begin(), keys.end(), points[i].series_value);
    if (it == keys.end()) {
      keys.push_back(points[i].series_value);
      groups.emplace_back();
      it = keys.end() - 1;
    }
    groups[it - keys.begin()].push_back(i);
  }
  return groups;
}

json fit_json(const LinearFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared}};
}

/// P_b(t) for every realization of one point.
EnsembleResult band_probability_ensemble(const ExperimentConfig& cfg, const RunOptions& opts,
                                         const ScanPoint& p, const TimeGrid& grid) {
  const BandTable table(p.model.sites, p.model.coupling, p.model.alpha);
  const auto& members = table.members(p.band);
  const auto choice = choice_of(cfg, opts);
  return ensemble_average(cfg.n_realizations, cfg.seed, opts.threads, [&](std::size_t i) {
    const auto op = x_operator(p.model, realization_for(cfg, p, i));
    const auto prop = make_propagator(op, choice, cfg.tolerance);
    const StateVector psi0 = initial_state(cfg, p, table, i);
    std::vector<double> pb(grid.size());
    prop->evolve(psi0, grid, [&](std::size_t k, double, const StateVector& psi) {
      double w = 0.0;
      for (auto m : members) w += std::norm(psi[m]);
      pb[k] = w;
    });
    return pb;
  });
}

}  // namespace

const char* version_string() { return SHIELDSIM_VERSION; }

const Table& ExperimentOutput::table(const std::string& suffix) const {
  for (const auto& [s, t] : tables) {
    if (s == suffix) return t;
  }
  throw std::out_of_range("no table '" + suffix + "'");
}

std::vector<ScanPoint> scan_points(const ExperimentConfig& cfg) {
  const std::vector<double> none{0.0};
  const auto& primary = cfg.scan.active() ? cfg.scan.values : none;
  const auto& secondary = cfg.scan.series != ScanVariable::None ? cfg.scan.series_values : none;
  std::vector<ScanPoint> points;
  for (double s : secondary) {
    for (double v : primary) {
      ScanPoint p;
      p.model = with_value(with_value(cfg.model, cfg.scan.variable, v), cfg.scan.series, s);
      p.band = cfg.initial.band;
      if (cfg.scan.variable == ScanVariable::Band) p.band = static_cast<int>(std::lround(v));
      if (cfg.scan.series == ScanVariable::Band) p.band = static_cast<int>(std::lround(s));
      p.value = v;
      p.series_value = s;
      points.push_back(p);
    }
  }
  return points;
}

StateVector initial_state(const ExperimentConfig& cfg, const ScanPoint& point, const BandTable& table,
                          std::size_t index) {
  const int sites = point.model.sites;
  switch (cfg.initial.kind) {
    case InitialKind::RandomBand: {
      CounterRng rng(cfg.seed, index, StreamPurpose::InitialState);
      return random_band_state(table, point.band, rng, cfg.initial.include_mirror);
    }
    case InitialKind::XProduct:
      return StateVector::basis_state(SpinConfiguration::from_pattern(cfg.initial.pattern, Axis::X));
    case InitialKind::ZProduct:
      return basis_rotate(
          StateVector::basis_state(SpinConfiguration::from_pattern(cfg.initial.pattern, Axis::Z)), Axis::X);
    case InitialKind::CentralFlip: {
      const std::uint32_t all = sites == 32 ? ~0u : (1u << sites) - 1u;
      const int centre = (sites - 1) / 2;
      return StateVector::basis_state(SpinConfiguration(all & ~(1u << centre), sites, Axis::X));
    }
  }
  throw std::logic_error("unhandled initial state kind");
}

double leakage_estimate(const ScanPoint& p) {
  const auto& m = p.model;
  double e = 0.0;
  bool any = false;
  try {
    if (m.disorder_width > 0.0) {
      e += pleak_field_estimate(m.sites, m.coupling, m.disorder_width, p.band);
      any = true;
    }
    if (m.zz_coupling > 0.0 && p.band == 1) {
      e += pleak_nn_estimate(m.sites, m.coupling, m.zz_coupling);
      any = true;
    }
  } catch (const std::domain_error&) {
    return kNaN;
  }
  return any ? e : kNaN;
}

ExperimentOutput run_lightcone(const ExperimentConfig& cfg, const RunOptions& opts) {
  ExperimentOutput out;
  out.name = cfg.name;
  const ScanPoint p = scan_points(cfg).front();
  const int sites = p.model.sites;
  const TimeGrid grid = cfg.grid.build();
  const BandTable table(sites, p.model.coupling, p.model.alpha);
  const std::size_t n = p.model.disorder_width > 0.0 ? cfg.n_realizations : 1;
  const auto choice = choice_of(cfg, opts);
  double truncation = 0.0;
  const EnsembleResult ens = ensemble_average(n, cfg.seed, opts.threads, [&](std::size_t i) {
    const auto op = x_operator(p.model, realization_for(cfg, p, i));
    const auto prop = make_propagator(op, choice, cfg.tolerance);
    std::vector<double> flat(grid.size() * sites);
    const double err = prop->evolve(initial_state(cfg, p, table, i), grid,
                                    [&](std::size_t k, double, const StateVector& psi) {
                                      const auto prof = sigma_x_profile(psi);
                                      std::copy(prof.begin(), prof.end(), flat.begin() + k * sites);
                                    });
    if (i == 0) truncation = err;
    return flat;
  });
  Table t;
  t.columns = {"t", "site", "sigma_x", "stderr"};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (int s = 0; s < sites; ++s) {
      const std::size_t j = k * sites + s;
      t.add({grid[k], static_cast<double>(s + 1), ens.mean[j], ens.standard_error[j]});
    }
  }
  out.tables.emplace_back("", std::move(t));
  out.summary = {{"L", sites}, {"realizations", n}, {"truncation_bound", truncation}};
  return out;
}

ExperimentOutput run_band_dynamics(const ExperimentConfig& cfg, const RunOptions& opts) {
  ExperimentOutput out;
  out.name = cfg.name;
  const TimeGrid grid = cfg.grid.build();
  Table t;
  t.columns = concat(point_columns(cfg), {"t", "P_b", "stderr"});
  json points = json::array();
  for (const auto& p : scan_points(cfg)) {
    const EnsembleResult ens = band_probability_ensemble(cfg, opts, p, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      t.add(concat(point_values(cfg, p), {grid[k], ens.mean[k], ens.standard_error[k]}));
    }
    const LeakageEstimate leak = p_leak(ens.mean);
    json j = point_json(cfg, p);
    j["plateau_P_b"] = 1.0 - leak.value;
    j["p_leak"] = leak.value;
    j["plateau_ok"] = leak.plateau;
    points.push_back(j);
    if (!leak.plateau) out.warnings.push_back("plateau test failed at " + j.dump());
  }
  out.tables.emplace_back("", std::move(t));
  out.summary = {{"points", points}};
  return out;
}

ExperimentOutput run_leakage_scan(const ExperimentConfig& cfg, const RunOptions& opts) {
  ExperimentOutput out;
  out.name = cfg.name;
  const TimeGrid grid = cfg.grid.build();
  const auto points = scan_points(cfg);
  std::vector<double> leak(points.size()), err(points.size()), est(points.size());
  std::vector<bool> plateau(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const EnsembleResult ens = band_probability_ensemble(cfg, opts, points[i], grid);
    const LeakageEstimate mean_leak = p_leak(ens.mean);
    leak[i] = mean_leak.value;
    plateau[i] = mean_leak.plateau;
    std::vector<std::vector<double>> per;
    for (const auto& s : ens.samples) per.push_back({p_leak(s).value});
    err[i] = reduce_samples(std::move(per), cfg.seed).standard_error[0];
    est[i] = leakage_estimate(points[i]);
    if (!plateau[i]) out.warnings.push_back("plateau test failed at " + point_json(cfg, points[i]).dump());
  }

  // One global prefactor, fitted on the log scale.
  std::vector<double> log_num, log_est;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (leak[i] > 0.0 && est[i] > 0.0) {
      log_num.push_back(std::log(leak[i]));
      log_est.push_back(std::log(est[i]));
    }
  }
  double prefactor = kNaN, prefactor_r2 = kNaN;
  if (!log_num.empty()) {
    double shift = 0.0;
    for (std::size_t i = 0; i < log_num.size(); ++i) shift += log_num[i] - log_est[i];
    shift /= static_cast<double>(log_num.size());
    prefactor = std::exp(shift);
    std::vector<double> model(log_est.size());
    for (std::size_t i = 0; i < model.size(); ++i) model[i] = log_est[i] + shift;
    prefactor_r2 = r_squared(log_num, model);
  }

  Table t;
  t.columns = concat(point_columns(cfg), {"p_leak", "stderr", "analytic", "estimate", "plateau_ok"});
  json jpoints = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    t.add(concat(point_values(cfg, points[i]),
                 {leak[i], err[i], prefactor * est[i], est[i], plateau[i] ? 1.0 : 0.0}));
    json j = point_json(cfg, points[i]);
    j["p_leak"] = leak[i];
    j["stderr"] = err[i];
    j["estimate"] = est[i];
    j["plateau_ok"] = static_cast<bool>(plateau[i]);
    jpoints.push_back(j);
  }
  out.tables.emplace_back("", std::move(t));

  json series = json::array();
  for (const auto& group : series_groups(points)) {
    std::vector<double> x, y;
    for (auto i : group) {
      if (points[i].value > 0.0 && leak[i] > 0.0) {
        x.push_back(points[i].value);
        y.push_back(leak[i]);
      }
    }
    json s = {{"series_value", points[group.front()].series_value}};
    if (x.size() >= 2) s["log_log"] = fit_json(fit_power_law(x, y));
    series.push_back(s);
  }
  out.summary = {{"scan_variable", scan_variable_name(cfg.scan.variable)},
                 {"prefactor", prefactor},
                 {"prefactor_r_squared_log", prefactor_r2},
                 {"series", series},
                 {"points", jpoints}};
  return out;
}

ExperimentOutput run_fidelity_scan(const ExperimentConfig& cfg, const RunOptions& opts) {
  ExperimentOutput out;
  out.name = cfg.name;
  const auto points = scan_points(cfg);
  const auto choice = choice_of(cfg, opts);
  Table curves;
  curves.columns = concat(point_columns(cfg), {"t", "F", "stderr"});

  struct Row {
    double mean_t_half, stderr_t_half, crossed, t_half_of_mean, tau, tau_amp, tau_r2, delta_e;
  };
  std::vector<Row> rows;
  for (const auto& p : points) {
    const auto& m = p.model;
    double delta_e = kNaN;
    try {
      if (m.disorder_width > 0.0) delta_e = deltaE_estimate(m.sites, m.coupling, m.disorder_width, p.band);
    } catch (const std::domain_error&) {
    }
    double unit = 1.0;
    if (cfg.grid.scale_by_estimate) {
      if (!(delta_e > 0.0)) throw ConfigError("scale_by_estimate needs a band spread estimate (W > 0, L > 2b+1)");
      unit = 1.0 / delta_e;
    }
    const TimeGrid grid = cfg.grid.build(unit);
    const BandTable table(m.sites, m.coupling, m.alpha);
    const EnsembleResult ens = ensemble_average(cfg.n_realizations, cfg.seed, opts.threads, [&](std::size_t i) {
      const DisorderRealization h = realization_for(cfg, p, i);
      const auto prop = make_propagator(x_operator(m, h), choice, cfg.tolerance);
      const ZenoHamiltonian zeno = build_zeno(m, h, table);
      std::vector<double> f = fidelity_series(initial_state(cfg, p, table, i), grid, *prop, zeno, choice,
                                              cfg.tolerance);
      double th = grid.horizon(), crossed = 0.0;
      try {
        th = t_half(grid.times(), f);
        crossed = 1.0;
      } catch (const NoCrossingError&) {
      }
      f.push_back(th);
      f.push_back(crossed);
      return f;
    });
    const std::size_t n = grid.size();
    for (std::size_t k = 0; k < n; ++k) {
      curves.add(concat(point_values(cfg, p), {grid[k], ens.mean[k], ens.standard_error[k]}));
    }
    const std::vector<double> mean_f(ens.mean.begin(), ens.mean.begin() + n);
    Row r{ens.mean[n], ens.standard_error[n], ens.mean[n + 1], kNaN, kNaN, kNaN, kNaN, delta_e};
    try {
      r.t_half_of_mean = t_half(grid.times(), mean_f);
    } catch (const NoCrossingError&) {
      out.warnings.push_back("mean fidelity never reaches 1/2 at " + point_json(cfg, p).dump());
    }
    try {
      const GaussianFit g = fit_gaussian_decay(grid.times(), mean_f);
      r.tau = g.tau;
      r.tau_amp = g.amplitude;
      r.tau_r2 = g.r_squared;
    } catch (const std::invalid_argument&) {
    }
    if (r.crossed < 1.0) {
      out.warnings.push_back("some realizations never reach F = 1/2 at " + point_json(cfg, p).dump() +
                             "; their horizon enters the mean as a lower bound");
    }
    rows.push_back(r);
  }

  std::vector<double> inv_de, th;
  for (const auto& r : rows) {
    if (r.delta_e > 0.0) {
      inv_de.push_back(1.0 / r.delta_e);
      th.push_back(r.mean_t_half);
    }
  }
  double c1 = kNaN, c1_r2 = kNaN;
  if (!inv_de.empty()) {
    const ProportionalFit pf = fit_proportional(inv_de, th);
    c1 = pf.factor;
    c1_r2 = pf.r_squared;
  }

  Table summary;
  summary.columns = concat(point_columns(cfg), {"L", "b", "t_half_mean", "t_half_stderr", "crossed_fraction",
                                                "t_half_of_mean", "gauss_tau", "gauss_amplitude", "gauss_r2", "deltaE", "c1_over_deltaE"});
  json jpoints = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& r = rows[i];
    summary.add(concat(point_values(cfg, points[i]),
                       {static_cast<double>(points[i].model.sites), static_cast<double>(points[i].band),
                        r.mean_t_half, r.stderr_t_half, r.crossed, r.t_half_of_mean, r.tau, r.tau_amp, r.tau_r2, r.delta_e,
                        c1 / r.delta_e}));
    json j = point_json(cfg, points[i]);
    j.update({{"t_half_mean", r.mean_t_half},
              {"t_half_stderr", r.stderr_t_half},
              {"crossed_fraction", r.crossed},
              {"t_half_of_mean", r.t_half_of_mean},
              {"gauss_tau", r.tau},
              {"gauss_amplitude", r.tau_amp},
              {"gauss_r2", r.tau_r2},
              {"deltaE", r.delta_e}});
    jpoints.push_back(j);
  }
  out.tables.emplace_back("", std::move(curves));
  out.tables.emplace_back("thalf", std::move(summary));

  json series = json::array();
  for (const auto& group : series_groups(points)) {
    std::vector<double> x, y;
    for (auto i : group) {
      if (points[i].value > 0.0 && rows[i].mean_t_half > 0.0) {
        x.push_back(points[i].value);
        y.push_back(rows[i].mean_t_half);
      }
    }
    json s = {{"series_value", points[group.front()].series_value}};
    if (x.size() >= 2) s["log_log"] = fit_json(fit_power_law(x, y));
    series.push_back(s);
  }
  out.summary = {{"scan_variable", scan_variable_name(cfg.scan.variable)},
                 {"c1", c1},
                 {"c1_r_squared", c1_r2},
                 {"series", series},
                 {"points", jpoints}};
  return out;
}

ExperimentOutput run_reversal_scan(const ExperimentConfig& cfg, const RunOptions& opts) {
  ExperimentOutput out;
  out.name = cfg.name;
  const auto points = scan_points(cfg);
  const TimeGrid grid = cfg.grid.build();
  const auto requested = choice_of(cfg, opts);

  struct Row {
    double tau, tau_bound, background, background_bound, sync_steps;
    std::vector<double> centre, rest;
  };
  std::vector<Row> rows(points.size());
  parallel_for(points.size(), opts.threads, [&](std::size_t idx) {
    const auto& p = points[idx];
    const int sites = p.model.sites;
    const int centre = (sites - 1) / 2;
    const BandTable table(sites, p.model.coupling, p.model.alpha);
    auto choice = requested;
    if (choice == PropagatorChoice::Auto) {
      choice = sites <= kDenseSiteLimit ? PropagatorChoice::Dense : PropagatorChoice::Chebyshev;
    }
    const auto prop = make_propagator(x_operator(p.model, realization_for(cfg, p, 0)), choice, cfg.tolerance);
    Row& r = rows[idx];
    r.centre.resize(grid.size());
    r.rest.resize(grid.size());
    prop->evolve(initial_state(cfg, p, table, 0), grid, [&](std::size_t k, double, const StateVector& psi) {
      const auto prof = sigma_x_profile(psi);
      double s = 0.0;
      for (int n = 0; n < sites; ++n) {
        if (n != centre) s += prof[n];
      }
      r.centre[k] = prof[centre];
      r.rest[k] = s / (sites - 1);
    });
    auto crossing = [&](const std::vector<double>& series, double& t, double& bound) {
      try {
        t = reversal_time(grid.times(), series);
        bound = 0.0;
      } catch (const NoCrossingError& e) {
        t = e.horizon();
        bound = 1.0;
      }
    };
    crossing(r.centre, r.tau, r.tau_bound);
    crossing(r.rest, r.background, r.background_bound);
    auto index_of = [&](double t) {
      return static_cast<double>(std::lower_bound(grid.times().begin(), grid.times().end(), t) -
                                 grid.times().begin());
    };
    r.sync_steps = (r.tau_bound > 0.0 || r.background_bound > 0.0)
                       ? kNaN
                       : std::abs(index_of(r.tau) - index_of(r.background));
  });

  Table t;
  t.columns = {"L", "alpha", "B", "tau_rev", "lower_bound", "t_background", "background_lower_bound",
               "sync_steps"};
  Table series_table;
  series_table.columns = {"L", "alpha", "t", "sigma_center", "sigma_background"};
  json jpoints = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const auto& r = rows[i];
    t.add({static_cast<double>(p.model.sites), p.model.alpha, p.model.field, r.tau, r.tau_bound, r.background,
           r.background_bound, r.sync_steps});
    for (std::size_t k = 0; k < grid.size(); ++k) {
      series_table.add({static_cast<double>(p.model.sites), p.model.alpha, grid[k], r.centre[k], r.rest[k]});
    }
    if (r.tau_bound > 0.0) {
      out.warnings.push_back("no reversal within the horizon for " + point_json(cfg, p).dump());
    }
    json j = point_json(cfg, p);
    j.update({{"alpha", p.model.alpha},
              {"tau_rev", r.tau},
              {"lower_bound", r.tau_bound > 0.0},
              {"t_background", r.background},
              {"sync_steps", r.sync_steps}});
    jpoints.push_back(j);
  }
  out.tables.emplace_back("", std::move(t));
  out.tables.emplace_back("series", std::move(series_table));

  json series = json::array();
  for (const auto& group : series_groups(points)) {
    std::vector<double> l, log_tau;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (auto i : group) {
      l.push_back(points[i].model.sites);
      log_tau.push_back(std::log(rows[i].tau));
      lo = std::min(lo, rows[i].tau);
      hi = std::max(hi, rows[i].tau);
    }
    json s = {{"alpha", points[group.front()].model.alpha}, {"max_over_min", hi / lo}};
    if (l.size() >= 2) s["log_linear"] = fit_json(fit_linear(l, log_tau));
    series.push_back(s);
  }
  out.summary = {{"series", series}, {"points", jpoints}};
  return out;
}

ExperimentOutput run_spectrum(const ExperimentConfig& cfg, const RunOptions&) {
  ExperimentOutput out;
  out.name = cfg.name;
  const auto& m = cfg.model;
  const BandTable table(m.sites, m.coupling, m.alpha);
  Table t;
  t.columns = {"b", "E_b", "dimension", "v_min", "v_max", "v_mean"};
  const auto spreads = band_spreads(table, m);
  for (int b = 0; b < table.band_count(); ++b) {
    const auto& s = spreads[b];
    t.add({static_cast<double>(b), table.energy(b).value_or(kNaN), static_cast<double>(table.dimension(b)), s.v_min,
           s.v_max, s.v_mean});
  }
  const auto overlap = m.alpha > 0.0 ? overlapping_bands(spreads, 2) : std::vector<int>{};
  for (int b : overlap) {
    out.warnings.push_back("band " + std::to_string(b) + " spread exceeds the smallest adjacent band gap at alpha = " +
                           format_number(m.alpha));
  }
  out.summary = {{"quasi_degenerate", overlap.empty()}, {"overlapping_bands", overlap}};
  out.tables.emplace_back("", std::move(t));
  return out;
}

ExperimentOutput run_estimate(const ExperimentConfig& cfg, const RunOptions&) {
  ExperimentOutput out;
  out.name = cfg.name;
  const auto& m = cfg.model;
  const int b = cfg.initial.band;
  EstimateInputs in{m.sites, m.coupling, m.disorder_width, m.zz_coupling, b};
  json j = {{"L", m.sites}, {"J", m.coupling}, {"W", m.disorder_width}, {"Jz", m.zz_coupling}, {"b", b},
            {"dilute", in.dilute()}};
  auto guarded = [&](const char* key, auto f) {
    try {
      j[key] = f();
    } catch (const std::exception&) {
      j[key] = nullptr;
    }
  };
  guarded("eps", [&] { return coupling_eps(m.disorder_width); });
  guarded("band_gap", [&] {
    return cfg.band2 >= 0 ? band_gap(m.sites, m.coupling, b, cfg.band2) : band_gap(m.sites, m.coupling, b - 1, b);
  });
  guarded("pleak_field", [&] { return pleak_field_estimate(m.sites, m.coupling, m.disorder_width, b); });
  guarded("pleak_nn", [&] { return pleak_nn_estimate(m.sites, m.coupling, m.zz_coupling); });
  guarded("deltaE", [&] { return deltaE_estimate(m.sites, m.coupling, m.disorder_width, b); });
  guarded("deltaE_band1", [&] { return deltaE_band1(m.sites, m.coupling, m.disorder_width); });
  guarded("deltaE_asymptotic", [&] { return deltaE_asymptotic(m.sites, m.coupling, m.disorder_width); });
  guarded("t_half", [&] { return t_half_estimate(m.sites, m.coupling, m.disorder_width, b, cfg.c1); });
  j["c1"] = cfg.c1;
  out.summary = j;
  return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  switch (cfg.experiment) {
    case ExperimentKind::Lightcone: return run_lightcone(cfg, opts);
    case ExperimentKind::BandDynamics: return run_band_dynamics(cfg, opts);
    case ExperimentKind::LeakageScan: return run_leakage_scan(cfg, opts);
    case ExperimentKind::FidelityScan: return run_fidelity_scan(cfg, opts);
    case ExperimentKind::ReversalScan: return run_reversal_scan(cfg, opts);
    case ExperimentKind::Spectrum: return run_spectrum(cfg, opts);
    case ExperimentKind::Estimate: return run_estimate(cfg, opts);
  }
  throw std::logic_error("unhandled experiment");
}

nlohmann::json make_manifest(const ExperimentConfig& cfg, const RunOptions& opts,
                             const ExperimentOutput& output, double wall_seconds) {
  json config = json::array();
  for (const auto& [k, v] : cfg.echo) config.push_back({k, v});
  json streams = json::array();
  const bool ensemble = cfg.experiment != ExperimentKind::Spectrum && cfg.experiment != ExperimentKind::Estimate;
  const std::size_t n = ensemble ? (cfg.experiment == ExperimentKind::ReversalScan ? 1 : cfg.n_realizations) : 0;
  for (std::size_t i = 0; i < n; ++i) {
    streams.push_back({{"index", i},
                       {"disorder_key", CounterRng(cfg.seed, i, StreamPurpose::Disorder).key()},
                       {"initial_state_key", CounterRng(cfg.seed, i, StreamPurpose::InitialState).key()}});
  }
  json files = json::array();
  for (const auto& [suffix, table] : output.tables) {
    files.push_back(suffix.empty() ? output.name + ".csv" : output.name + "_" + suffix + ".csv");
  }
  return {{"experiment", experiment_name(cfg.experiment)},
          {"name", output.name},
          {"version", version_string()},
          {"rng_algorithm", std::string(CounterRng::kAlgorithm)},
          {"seed", cfg.seed},
          {"n_realizations", cfg.n_realizations},
          {"propagator", propagator_choice_name(choice_of(cfg, opts))},
          {"tolerance", cfg.tolerance},
          {"threads", opts.threads},
          {"config", config},
          {"realization_streams", streams},
          {"outputs", files},
          {"warnings", output.warnings},
          {"wall_time_seconds", wall_seconds}};
}

std::vector<std::string> write_outputs(const ExperimentConfig& cfg, const RunOptions& opts,
                                       const ExperimentOutput& output, const std::string& dir,
                                       double wall_seconds) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> written;
  for (const auto& [suffix, table] : output.tables) {
    const auto path = (fs::path(dir) / (suffix.empty() ? output.name + ".csv" : output.name + "_" + suffix + ".csv")).string();
    write_csv(table, path);
    written.push_back(path);
  }
  auto dump = [&](const std::string& file, const json& j) {
    const auto path = (fs::path(dir) / file).string();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << j.dump(2) << '\n';
    written.push_back(path);
  };
  if (!output.summary.empty()) dump(output.name + ".fit.json", output.summary);
  dump(output.name + ".manifest.json", make_manifest(cfg, opts, output, wall_seconds));
  return written;
}

}  // namespace shieldsim
