#pragma once

#include <Eigen/Dense>

#include "shieldsim/hamiltonian.hpp"

namespace shieldsim {

/// Parameters of the closed-form estimates.
struct EstimateInputs {
  int sites = 0;
  double coupling = 1.0;      // J
  double disorder_width = 0;  // W
  double zz_coupling = 0;     // Jz
  int band = 1;               // b

  /// The estimates assume b / L << 1; flagged false once b / L > 1/4.
  bool dilute() const { return 4 * band <= sites; }
};

/// eps = W / sqrt(12), the rms random field.
double coupling_eps(double disorder_width);

/// E_b - E_b2 at alpha = 0, so band_gap(L, J, b - 1, b) = 2J(L - 2b + 1).
double band_gap(int sites, double coupling, int b, int b2);

/// b eps^2 / D_{b-1,b}^2 + (L - b) eps^2 / D_{b,b+1}^2 for Jz = 0.
double pleak_field_estimate(int sites, double coupling, double disorder_width, int b);

/// (L - 3)/8 * Jz^2 / (J^2 (2L - 8)^2) for band 1 at W = 0. Needs L > 4.
double pleak_nn_estimate(int sites, double coupling, double zz_coupling);

/// Second-order degenerate perturbation matrix for band 1 (B = Jz = 0):
///   C_ss = h_s^2/(E1-E0) + sum_{k != s} h_k^2/(E1-E2)
///   C_ks = h_k h_s [1/(E1-E0) + 1/(E1-E2)].
/// Needs L > 3.
Eigen::MatrixXd build_C_matrix(const DisorderRealization& realization, int sites, double coupling);

/// dE^2 = W^4/(180 J^2) [b/(2b-L-1)^2 + (L-b)/(L-2b-1)^2]. Needs L > 2b + 1.
double deltaE_estimate(int sites, double coupling, double disorder_width, int b);

/// Band-1 form W^4/(180 J^2) [1/(L-1)^2 + (L-1)/(L-3)^2], square-rooted.
double deltaE_band1(int sites, double coupling, double disorder_width);

/// Large-L scaling W^2 / (J sqrt(180 L)).
double deltaE_asymptotic(int sites, double coupling, double disorder_width);

/// c1 / deltaE_estimate.
double t_half_estimate(int sites, double coupling, double disorder_width, int b, double c1);

}  // namespace shieldsim
