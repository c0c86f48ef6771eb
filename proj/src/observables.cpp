#include "shieldsim/observables.hpp"

#include <cmath>
#include <stdexcept>

#include "shieldsim/errors.hpp"
#include "shieldsim/parallel.hpp"

namespace shieldsim {

std::vector<double> sigma_x_profile(const StateVector& psi) {
  const StateVector x = basis_rotate(psi, Axis::X);
  const int sites = x.sites();
  std::vector<double> profile(sites, 0.0);
  for (std::size_t i = 0; i < x.dimension(); ++i) {
    const double w = std::norm(x[i]);
    if (w == 0.0) continue;
    for (int n = 0; n < sites; ++n) profile[n] += (i >> n) & 1u ? w : -w;
  }
  return profile;
}

double survival_probability(const StateVector& psi0, const StateVector& psi_t) {
  return std::norm(inner(psi0, psi_t));
}

std::vector<double> fidelity_series(const StateVector& psi0, const TimeGrid& grid,
                                    const Propagator& full, const ZenoHamiltonian& zeno,
                                    PropagatorChoice zeno_choice, double tolerance) {
  const EvolutionResult reference = evolve_zeno(zeno, psi0, grid, zeno_choice, tolerance);
  std::vector<double> f(grid.size());
  full.evolve(psi0, grid, [&](std::size_t k, double, const StateVector& psi) {
    f[k] = std::norm(inner(reference.states[k], psi));
  });
  return f;
}

double fidelity_zeno(const StateVector& psi0, double t, const Propagator& full,
                     const ZenoHamiltonian& zeno, PropagatorChoice zeno_choice, double tolerance) {
  if (t == 0.0) return std::norm(inner(psi0, psi0));
  return fidelity_series(psi0, TimeGrid({0.0, t}), full, zeno, zeno_choice, tolerance).back();
}

LeakageEstimate p_leak(std::span<const double> band_probability) {
  const std::size_t n = band_probability.size();
  if (n < 6) throw std::invalid_argument("leakage needs at least 6 samples");
  const std::size_t start = n - n / 3;
  const std::size_t mid = start + (n - start) / 2;
  auto mean = [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += band_probability[i];
    return s / static_cast<double>(hi - lo);
  };
  LeakageEstimate out{};
  out.value = 1.0 - mean(start, n);
  out.first_half = 1.0 - mean(start, mid);
  out.second_half = 1.0 - mean(mid, n);
  const double scale = std::max(std::abs(out.first_half), std::abs(out.second_half));
  out.plateau = std::abs(out.first_half - out.second_half) <=
                LeakageEstimate::kPlateauTolerance * scale;
  return out;
}

namespace {
void check_series(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size() || times.empty()) {
    throw std::invalid_argument("time and value series must be nonempty and equally long");
  }
}

double interpolate(double t0, double t1, double v0, double v1, double level) {
  if (v1 == v0) return t1;
  return t0 + (level - v0) / (v1 - v0) * (t1 - t0);
}
}  // namespace

double first_crossing_below(std::span<const double> times, std::span<const double> values,
                            double level) {
  check_series(times, values);
  if (values[0] <= level) return times[0];
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] <= level) return interpolate(times[k - 1], times[k], values[k - 1], values[k], level);
  }
  throw NoCrossingError("series never reaches " + std::to_string(level), times.back());
}

double t_half(std::span<const double> times, std::span<const double> fidelity) {
  return first_crossing_below(times, fidelity, 0.5);
}

double reversal_time(std::span<const double> times, std::span<const double> polarization) {
  check_series(times, polarization);
  const double s0 = polarization[0];
  if (s0 == 0.0) throw std::invalid_argument("polarization starts at zero");
  for (std::size_t k = 1; k < polarization.size(); ++k) {
    if (polarization[k] * s0 <= 0.0) {
      return interpolate(times[k - 1], times[k], polarization[k - 1], polarization[k], 0.0);
    }
  }
  throw NoCrossingError("polarization never changes sign", times.back());
}

EnsembleResult reduce_samples(std::vector<std::vector<double>> samples, std::uint64_t seed) {
  if (samples.empty()) throw std::invalid_argument("ensemble needs at least one realization");
  const std::size_t width = samples.front().size();
  const std::size_t n = samples.size();
  EnsembleResult out;
  out.seed = seed;
  out.mean.assign(width, 0.0);
  out.standard_error.assign(width, 0.0);
  for (const auto& s : samples) {
    if (s.size() != width) throw std::invalid_argument("realizations returned different lengths");
    for (std::size_t j = 0; j < width; ++j) out.mean[j] += s[j];
  }
  for (auto& m : out.mean) m /= static_cast<double>(n);
  if (n > 1) {
    for (const auto& s : samples) {
      for (std::size_t j = 0; j < width; ++j) {
        const double d = s[j] - out.mean[j];
        out.standard_error[j] += d * d;
      }
    }
    for (auto& e : out.standard_error) e = std::sqrt(e / static_cast<double>(n - 1) / static_cast<double>(n));
  }
  out.samples = std::move(samples);
  return out;
}

EnsembleResult ensemble_average(std::size_t realizations, std::uint64_t seed, int threads,
                                const std::function<std::vector<double>(std::size_t)>& compute) {
  if (realizations == 0) throw std::invalid_argument("ensemble needs at least one realization");
  std::vector<std::vector<double>> samples(realizations);
  parallel_for(realizations, threads, [&](std::size_t i) { samples[i] = compute(i); });
  return reduce_samples(std::move(samples), seed);
}

}  // namespace shieldsim
