#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "shieldsim/config.hpp"
#include "shieldsim/errors.hpp"
#include "shieldsim/experiments.hpp"
#include "shieldsim/parallel.hpp"

namespace {
constexpr int kConfigError = 2;
constexpr int kConvergenceError = 3;
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact dynamics of long-range spin chains"};
  std::string experiment, config_path, out_dir = ".", propagator;
  int threads = shieldsim::default_thread_count();
  app.add_option("experiment", experiment,
                 "lightcone | band_dynamics | leakage_scan | fidelity_scan | reversal_scan | spectrum | estimate")
      ->required();
  app.add_option("--config", config_path, "Experiment config file")->required();
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--threads", threads, std::string("Worker threads (default $") + shieldsim::kThreadsEnv +
                                           " or hardware count)")
      ->check(CLI::PositiveNumber);
  app.add_option("--propagator", propagator, "Override the configured propagator")
      ->check(CLI::IsMember({"dense", "cheby"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    const auto kind = shieldsim::parse_experiment(experiment);
    const auto cfg = shieldsim::load_config(config_path);
    if (cfg.experiment != kind) {
      throw shieldsim::ConfigError("config describes '" + std::string(shieldsim::experiment_name(cfg.experiment)) +
                                   "', not '" + experiment + "'");
    }
    shieldsim::RunOptions opts;
    opts.threads = threads;
    if (propagator == "dense") opts.propagator = shieldsim::PropagatorChoice::Dense;
    if (propagator == "cheby") opts.propagator = shieldsim::PropagatorChoice::Chebyshev;

    const auto start = std::chrono::steady_clock::now();
    const auto output = shieldsim::run_experiment(cfg, opts);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    for (const auto& w : output.warnings) std::cerr << "warning: " << w << '\n';
    if (kind == shieldsim::ExperimentKind::Estimate) std::cout << output.summary.dump(2) << '\n';
    for (const auto& path : shieldsim::write_outputs(cfg, opts, output, out_dir, wall)) {
      std::cerr << "wrote " << path << '\n';
    }
  } catch (const shieldsim::ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << '\n';
    return kConfigError;
  } catch (const shieldsim::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << '\n';
    return kConvergenceError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
