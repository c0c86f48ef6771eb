#include "shieldsim/perturbation.hpp"

#include <cmath>
#include <stdexcept>

#include "shieldsim/bands.hpp"

namespace shieldsim {

double coupling_eps(double disorder_width) {
  if (!(disorder_width >= 0.0)) throw std::invalid_argument("W must be >= 0");
  return disorder_width / std::sqrt(12.0);
}

double band_gap(int sites, double coupling, int b, int b2) {
  return band_energy(sites, coupling, b) - band_energy(sites, coupling, b2);
}

double pleak_field_estimate(int sites, double coupling, double disorder_width, int b) {
  check_band(sites, b);
  const double eps2 = std::pow(coupling_eps(disorder_width), 2);
  const double down = 2.0 * coupling * (sites - 2 * b + 1);  // D_{b-1,b}
  const double up = 2.0 * coupling * (sites - 2 * b - 1);    // D_{b,b+1}
  if (up == 0.0) throw std::domain_error("field leakage estimate needs L > 2b + 1");
  double p = (sites - b) * eps2 / (up * up);
  if (b > 0) p += b * eps2 / (down * down);
  return p;
}

double pleak_nn_estimate(int sites, double coupling, double zz_coupling) {
  if (sites <= 4) throw std::domain_error("nearest-neighbour leakage estimate needs L > 4");
  const double d = coupling * (2.0 * sites - 8.0);
  return (sites - 3) / 8.0 * zz_coupling * zz_coupling / (d * d);
}

Eigen::MatrixXd build_C_matrix(const DisorderRealization& realization, int sites, double coupling) {
  if (sites <= 3) throw std::domain_error("C matrix needs L > 3");
  if (static_cast<int>(realization.fields.size()) != sites) {
    throw std::invalid_argument("realization length differs from L");
  }
  const auto& h = realization.fields;
  const double g10 = 2.0 * coupling * (1 - sites);  // E1 - E0
  const double g12 = 2.0 * coupling * (sites - 3);  // E1 - E2
  double total = 0.0;
  for (double v : h) total += v * v;
  Eigen::MatrixXd c(sites, sites);
  for (int s = 0; s < sites; ++s) {
    for (int k = 0; k < sites; ++k) {
      c(k, s) = k == s ? h[s] * h[s] / g10 + (total - h[s] * h[s]) / g12
                       : h[k] * h[s] * (1.0 / g10 + 1.0 / g12);
    }
  }
  return c;
}

double deltaE_estimate(int sites, double coupling, double disorder_width, int b) {
  check_band(sites, b);
  const double a = 2.0 * b - sites - 1;
  const double d = sites - 2.0 * b - 1;
  if (a == 0.0 || d == 0.0) throw std::domain_error("band spread estimate needs L > 2b + 1");
  const double w4 = std::pow(disorder_width, 4);
  return std::sqrt(w4 / (180.0 * coupling * coupling) * (b / (a * a) + (sites - b) / (d * d)));
}

double deltaE_band1(int sites, double coupling, double disorder_width) {
  if (sites <= 3) throw std::domain_error("band spread estimate needs L > 3");
  const double w4 = std::pow(disorder_width, 4);
  const double l1 = sites - 1.0, l3 = sites - 3.0;
  return std::sqrt(w4 / (180.0 * coupling * coupling) * (1.0 / (l1 * l1) + l1 / (l3 * l3)));
}

double deltaE_asymptotic(int sites, double coupling, double disorder_width) {
  return disorder_width * disorder_width / (coupling * std::sqrt(180.0 * sites));
}

double t_half_estimate(int sites, double coupling, double disorder_width, int b, double c1) {
  const double de = deltaE_estimate(sites, coupling, disorder_width, b);
  if (!(de > 0.0)) throw std::domain_error("T1/2 estimate needs a nonzero band spread");
  return c1 / de;
}

}  // namespace shieldsim
