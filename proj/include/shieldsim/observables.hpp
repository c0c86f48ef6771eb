#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "shieldsim/basis.hpp"
#include "shieldsim/propagation.hpp"
#include "shieldsim/zeno.hpp"

namespace shieldsim {

/// <sigma^x_n> for every site, site 1 first. Z-basis input is rotated first.
std::vector<double> sigma_x_profile(const StateVector& psi);

/// |<psi0|psi_t>|^2.
double survival_probability(const StateVector& psi0, const StateVector& psi_t);

/// F(t) = |<psi0| exp(i H_Z t) exp(-i H t) |psi0>|^2 on every grid time.
std::vector<double> fidelity_series(const StateVector& psi0, const TimeGrid& grid,
                                    const Propagator& full, const ZenoHamiltonian& zeno,
                                    PropagatorChoice zeno_choice = PropagatorChoice::Auto,
                                    double tolerance = 1e-12);
double fidelity_zeno(const StateVector& psi0, double t, const Propagator& full,
                     const ZenoHamiltonian& zeno,
                     PropagatorChoice zeno_choice = PropagatorChoice::Auto,
                     double tolerance = 1e-12);

struct LeakageEstimate {
  static constexpr double kPlateauTolerance = 0.10;
  double value;        // 1 - mean P_b over the final third of the grid
  double first_half;   // leak from the first half of that window
  double second_half;  // leak from the second half
  bool plateau;        // halves agree within kPlateauTolerance relative
};

/// Long-time leakage from a sampled P_b(t) series (uniform grid assumed).
LeakageEstimate p_leak(std::span<const double> band_probability);

/// First time the series falls to `level`, linearly interpolated.
/// Throws NoCrossingError carrying the last grid time.
double first_crossing_below(std::span<const double> times, std::span<const double> values,
                            double level);

/// First time F(t) reaches 1/2.
double t_half(std::span<const double> times, std::span<const double> fidelity);

/// First sign change of a polarization series that starts at +-1.
double reversal_time(std::span<const double> times, std::span<const double> polarization);

struct EnsembleResult {
  std::vector<double> mean;
  std::vector<double> standard_error;  // sample standard deviation / sqrt(n); 0 for n = 1
  std::vector<std::vector<double>> samples;  // by realization index
  std::uint64_t seed = 0;

  std::size_t realizations() const { return samples.size(); }
};

/// Evaluates compute(index) for every realization and averages the returned
/// vectors elementwise. Reduction runs in index order, so the result does
/// not depend on scheduling.
EnsembleResult ensemble_average(std::size_t realizations, std::uint64_t seed, int threads,
                                const std::function<std::vector<double>(std::size_t)>& compute);

/// Reduction step of ensemble_average, exposed for callers that collect
/// samples themselves.
EnsembleResult reduce_samples(std::vector<std::vector<double>> samples, std::uint64_t seed);

}  // namespace shieldsim
