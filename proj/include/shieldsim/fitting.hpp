#pragma once

#include <cstddef>
#include <span>

namespace shieldsim {

/// Coefficient of determination 1 - SS_res / SS_tot.
double r_squared(std::span<const double> y, std::span<const double> model);

struct LinearFit {
  double slope;
  double intercept;
  double r_squared;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit fit_linear(std::span<const double> x, std::span<const double> y);

/// log y = slope * log x + intercept; all values must be positive.
LinearFit fit_power_law(std::span<const double> x, std::span<const double> y);

struct ProportionalFit {
  double factor;     // y ~ factor * x
  double r_squared;  // against the mean of y
};

ProportionalFit fit_proportional(std::span<const double> x, std::span<const double> y);

struct GaussianFit {
  double tau;        // F ~ A exp(-(t / tau)^2)
  double amplitude;  // A, below 1 by the fast out-of-band loss
  double r_squared;  // computed on F itself
  std::size_t points;
};

/// Least squares of ln F against t^2 with a free intercept, using samples from
/// t = 0 until F first drops below `floor`.
GaussianFit fit_gaussian_decay(std::span<const double> times, std::span<const double> fidelity,
                               double floor = 0.2);

}  // namespace shieldsim
