#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "shieldsim/config.hpp"
#include "shieldsim/csv.hpp"
#include "shieldsim/errors.hpp"
#include "shieldsim/experiments.hpp"

using namespace shieldsim;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

int error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string csv_text(const Table& t) {
  std::ostringstream out;
  write_csv(t, out);
  return out.str();
}

std::vector<double> col(const Table& t, const std::string& name) {
  const auto j = t.column(name);
  std::vector<double> v;
  for (const auto& r : t.rows) v.push_back(r[j]);
  return v;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse(
      "experiment = leakage_scan\n"
      "# comment\n"
      "[model]\nL = 8\nJz = 0\n"
      "[initial_state]\nb = 1\n"
      "[scan]\nvariable = W\nvalues = 0.5, 1.0\n"
      "[ensemble]\nn_realizations = 4\nseed = 18446744073709551615\n");
  CHECK(cfg.experiment == ExperimentKind::LeakageScan);
  CHECK(cfg.name == "leakage_scan");
  CHECK(cfg.model.sites == 8);
  CHECK(cfg.initial.kind == InitialKind::RandomBand);
  CHECK(cfg.scan.values == std::vector<double>{0.5, 1.0});
  CHECK(cfg.seed == 18446744073709551615ull);
  CHECK(scan_points(cfg).size() == 2);
}

TEST_CASE("config errors carry line numbers") {
  CHECK(error_line("experiment = spectrum\n[model]\nL = 8\nQ = 1\n") == 4);
  CHECK(error_line("experiment = spectrum\n[bogus]\n") == 2);
  CHECK(error_line("experiment = spectrum\n[model]\nL = 8\nL = 9\n") == 4);
  CHECK(error_line("experiment = spectrum\n[model]\nL = x\n") == 3);
  CHECK(error_line("experiment = spectrum\n[grid]\nn_steps = 1\n") == 3);
  CHECK(error_line("experiment = leakage_scan\n[model]\nW = 1\n[scan]\nvariable = W\nvalues = 1\n") == 3);
  CHECK(error_line("experiment = reversal_scan\n[model]\nB = 1\n[scan]\nvariable = L\nvalues = 3, 4\n") == 6);
  CHECK(error_line("experiment = reversal_scan\n[scan]\nvariable = L\nvalues = 3, 5\n") == 0);
  CHECK(error_line("experiment = band_dynamics\n[initial_state]\nkind = central_flip\n") == 3);
  CHECK(error_line("experiment = lightcone\n[model]\nL = 0\n") == 3);
  CHECK(error_line("[model]\nL = 8\n") == 0);
  CHECK_THROWS_AS(parse("experiment = nope\n"), ConfigError);
}

TEST_CASE("spectrum and estimate") {
  const auto spec = run_experiment(parse("experiment = spectrum\n[model]\nL = 10\n"), {});
  const auto& t = spec.table();
  REQUIRE(t.rows.size() == 6);
  CHECK(col(t, "E_b")[0] == doctest::Approx(45.0));
  CHECK(col(t, "E_b")[1] == doctest::Approx(27.0));
  CHECK(col(t, "dimension")[1] == doctest::Approx(20.0));

  const auto est = run_experiment(parse("experiment = estimate\n[model]\nL = 10\nW = 2\nJz = 1\n"
                                        "[initial_state]\nb = 1\n[estimate]\nb2 = 0\nc1 = 1\n"),
                                  {});
  CHECK(est.summary["pleak_field"].get<double>() == doctest::Approx(0.016335).epsilon(1e-4));
  CHECK(est.summary["pleak_nn"].get<double>() == doctest::Approx(0.0060764).epsilon(1e-4));
  CHECK(est.summary["deltaE"].get<double>() == doctest::Approx(0.13200).epsilon(1e-4));
  CHECK(est.summary["t_half"].get<double>() == doctest::Approx(7.576).epsilon(1e-3));
}

TEST_CASE("outputs do not depend on the thread count") {
  const auto cfg = parse(
      "experiment = band_dynamics\n"
      "[model]\nL = 6\nW = 1.5\nJz = 0.5\n"
      "[initial_state]\nb = 1\n"
      "[grid]\nt_max = 20\nn_steps = 30\n"
      "[ensemble]\nn_realizations = 6\nseed = 7\n");
  const auto one = run_experiment(cfg, RunOptions{1, std::nullopt});
  const auto four = run_experiment(cfg, RunOptions{4, std::nullopt});
  CHECK(csv_text(one.table()) == csv_text(four.table()));
  CHECK(one.summary.dump() == four.summary.dump());

  const auto dense = run_experiment(cfg, RunOptions{1, PropagatorChoice::Dense});
  const auto cheby = run_experiment(cfg, RunOptions{1, PropagatorChoice::Chebyshev});
  const auto a = col(dense.table(), "P_b"), b = col(cheby.table(), "P_b");
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-8);
}

TEST_CASE("lightcone starts from the initial pattern") {
  const auto out = run_experiment(parse("experiment = lightcone\n[model]\nL = 5\nalpha = 0.5\n"
                                        "[initial_state]\nkind = central_flip\n[grid]\nt_max = 2\nn_steps = 4\n"),
                                  {});
  const auto& t = out.table();
  const auto times = col(t, "t"), sx = col(t, "sigma_x"), site = col(t, "site");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] == 0.0) CHECK(sx[i] == doctest::Approx(site[i] == 3 ? -1.0 : 1.0));
  }
}

TEST_CASE("three-site reversal is finite") {
  const auto out = run_experiment(parse("experiment = reversal_scan\n[model]\nB = 1\nalpha = 0.5\n"
                                        "[scan]\nvariable = L\nvalues = 3\n[grid]\nt_max = 50\nn_steps = 400\n"),
                                  {});
  const double tau = col(out.table(), "tau_rev")[0];
  CHECK(std::isfinite(tau));
  CHECK(tau > 0.0);
}

TEST_CASE("csv formatting") {
  Table t;
  t.columns = {"a", "b"};
  t.add({1.5, std::nan("")});
  t.add({-2.0, INFINITY});
  CHECK(csv_text(t) == "a,b\n1.5,nan\n-2,inf\n");
}

TEST_CASE("shipped configs parse") {
  int n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(SHIELDSIM_CONFIG_DIR)) {
    if (entry.path().extension() != ".ini") continue;
    INFO(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path().string()));
    ++n;
  }
  CHECK(n >= 8);
}
