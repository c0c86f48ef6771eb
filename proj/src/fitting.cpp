#include "shieldsim/fitting.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace shieldsim {

namespace {
void check(std::span<const double> x, std::span<const double> y, std::size_t min_points) {
  if (x.size() != y.size()) throw std::invalid_argument("fit inputs differ in length");
  if (x.size() < min_points) throw std::invalid_argument("too few points to fit");
}
}  // namespace

double r_squared(std::span<const double> y, std::span<const double> model) {
  check(y, model, 1);
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_res += (y[i] - model[i]) * (y[i] - model[i]);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
  check(x, y, 2);
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit abscissae are all equal");
  LinearFit fit{sxy / sxx, 0.0, 0.0};
  fit.intercept = my - fit.slope * mx;
  std::vector<double> model(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) model[i] = fit.slope * x[i] + fit.intercept;
  fit.r_squared = r_squared(y, model);
  return fit;
}

LinearFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  check(x, y, 2);
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("power-law fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_linear(lx, ly);
}

ProportionalFit fit_proportional(std::span<const double> x, std::span<const double> y) {
  check(x, y, 1);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  if (sxx == 0.0) throw std::invalid_argument("proportional fit needs a nonzero abscissa");
  ProportionalFit fit{sxy / sxx, 0.0};
  std::vector<double> model(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) model[i] = fit.factor * x[i];
  fit.r_squared = r_squared(y, model);
  return fit;
}

GaussianFit fit_gaussian_decay(std::span<const double> times, std::span<const double> fidelity,
                               double floor) {
  check(times, fidelity, 2);
  std::size_t used = 0;
  while (used < times.size() && fidelity[used] >= floor) ++used;
  if (used < 3) throw std::invalid_argument("too few samples above the fit floor");
  std::vector<double> t2(used), lf(used);
  for (std::size_t i = 0; i < used; ++i) {
    t2[i] = times[i] * times[i];
    lf[i] = std::log(fidelity[i]);
  }
  const LinearFit line = fit_linear(t2, lf);
  if (!(line.slope < 0.0)) throw std::invalid_argument("fidelity does not decay");
  GaussianFit fit{1.0 / std::sqrt(-line.slope), std::exp(line.intercept), 0.0, used};
  std::vector<double> model(used);
  for (std::size_t i = 0; i < used; ++i) model[i] = fit.amplitude * std::exp(line.slope * t2[i]);
  fit.r_squared = r_squared(fidelity.first(used), model);
  return fit;
}

}  // namespace shieldsim
