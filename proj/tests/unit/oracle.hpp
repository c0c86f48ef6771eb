#pragma once

// Test-side reference constructions built from explicit Kronecker products.
// They share no code with the library.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;

// Single-site operators in the z basis, index 0 = down, 1 = up.
inline Mat sx() { return (Mat(2, 2) << 0, 1, 1, 0).finished(); }
inline Mat sz() { return (Mat(2, 2) << -1, 0, 0, 1).finished(); }
inline Mat id2() { return Mat::Identity(2, 2); }

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Operator acting with `op` on site n (0-based, bit n of the index) of an L-site chain.
inline Mat site_op(int sites, int n, const Mat& op) {
  Mat out = Mat::Identity(1, 1);
  for (int s = sites - 1; s >= 0; --s) out = kron(out, s == n ? op : id2());
  return out;
}

struct Params {
  int L;
  double B, J, Jz, alpha;
  std::vector<double> h;
};

// H in the z basis straight from the defining sum.
inline Mat hamiltonian_z(const Params& p) {
  const Eigen::Index dim = Eigen::Index{1} << p.L;
  Mat h = Mat::Zero(dim, dim);
  for (int n = 0; n < p.L; ++n) h += (p.B + (p.h.empty() ? 0.0 : p.h[n])) * site_op(p.L, n, sz());
  for (int n = 0; n + 1 < p.L; ++n) h += p.Jz * site_op(p.L, n, sz()) * site_op(p.L, n + 1, sz());
  for (int n = 0; n < p.L; ++n)
    for (int m = n + 1; m < p.L; ++m)
      h += p.J / std::pow(double(m - n), p.alpha) * site_op(p.L, n, sx()) * site_op(p.L, m, sx());
  return h;
}

// Unitary taking z-basis amplitudes to x-basis amplitudes: column j of the
// single-site matrix is the z-basis expansion of x-basis state j.
inline Mat rotation_zx(int sites) {
  const double r = 1.0 / std::sqrt(2.0);
  Mat u(2, 2);
  u << r, -r, r, r;  // rows: |-x>, |+x> in components (dn, up)
  Mat out = Mat::Identity(1, 1);
  for (int s = 0; s < sites; ++s) out = kron(out, u);
  return out;
}

inline CVec random_vector(std::size_t dim, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g;
  CVec v(dim);
  for (auto& x : v) x = {g(gen), g(gen)};
  return v / v.norm();
}

// Eigenvalues of the open tight-binding chain with hopping t and n sites.
inline std::vector<double> tight_binding(int n, double t) {
  std::vector<double> e;
  for (int m = 1; m <= n; ++m) e.push_back(2.0 * t * std::cos(M_PI * m / (n + 1)));
  return e;
}

}  // namespace oracle
