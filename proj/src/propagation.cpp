#include "shieldsim/propagation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "shieldsim/errors.hpp"
#include "shieldsim/rng.hpp"

namespace shieldsim {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.empty()) throw std::invalid_argument("time grid is empty");
  if (times_.front() != 0.0) throw std::invalid_argument("time grid must start at t = 0");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i])) throw std::invalid_argument("time grid contains non-finite values");
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw std::invalid_argument("time grid must be strictly increasing");
    }
  }
}

TimeGrid TimeGrid::linear(double t_max, int n_steps) {
  if (n_steps < 1 || !(t_max > 0.0)) throw std::invalid_argument("linear grid needs t_max > 0, n_steps >= 1");
  std::vector<double> t(n_steps + 1);
  for (int i = 0; i <= n_steps; ++i) t[i] = t_max * i / n_steps;
  return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::geometric(double t_first, double t_max, int n_points) {
  if (n_points < 2 || !(t_first > 0.0) || !(t_max > t_first)) {
    throw std::invalid_argument("geometric grid needs 0 < t_first < t_max and n_points >= 2");
  }
  std::vector<double> t{0.0};
  const double ratio = std::log(t_max / t_first) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) t.push_back(t_first * std::exp(ratio * i));
  t.back() = t_max;
  return TimeGrid(std::move(t));
}

const char* propagator_name(PropagatorKind kind) {
  return kind == PropagatorKind::Dense ? "dense" : "chebyshev";
}

SymmetricEigen eigensolve_sym(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("eigensolve needs a square matrix");
  const double scale = 1.0 + matrix.cwiseAbs().maxCoeff();
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("eigensolve needs a symmetric matrix");
  }
  SymmetricEigen out;
  if (matrix.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix);
  if (solver.info() != Eigen::Success) throw ConvergenceError("symmetric eigensolver did not converge");
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  return out;
}

DensePropagator::DensePropagator(const Eigen::MatrixXd& h, int sites, Axis axis)
    : sites_(sites), axis_(axis), eigen_(eigensolve_sym(h)) {
  if (h.rows() != (Eigen::Index{1} << sites)) throw std::invalid_argument("matrix size is not 2^L");
}

DensePropagator::DensePropagator(const SparseOperator& op)
    : DensePropagator(op.to_dense(), op.sites(), op.axis()) {}

void DensePropagator::check(const StateVector& psi) const {
  if (psi.sites() != sites_ || psi.axis() != axis_) {
    throw std::invalid_argument("state does not match the propagator basis");
  }
}

namespace {

struct SplitVector {
  Eigen::VectorXd re;
  Eigen::VectorXd im;
};

SplitVector split(const StateVector& psi) {
  const Eigen::Index n = static_cast<Eigen::Index>(psi.dimension());
  SplitVector s{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    s.re[i] = psi[i].real();
    s.im[i] = psi[i].imag();
  }
  return s;
}

}  // namespace

double DensePropagator::evolve(const StateVector& psi0, const TimeGrid& grid,
                               const StateObserver& observe) const {
  check(psi0);
  const auto& q = eigen_.vectors;
  const SplitVector in = split(psi0);
  const Eigen::VectorXd c_re = q.transpose() * in.re;
  const Eigen::VectorXd c_im = q.transpose() * in.im;
  const Eigen::Index n = c_re.size();
  Eigen::VectorXd p_re(n), p_im(n);
  StateVector psi(sites_, axis_);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    for (Eigen::Index j = 0; j < n; ++j) {
      const double phase = -eigen_.values[j] * t;
      const double cs = std::cos(phase), sn = std::sin(phase);
      p_re[j] = cs * c_re[j] - sn * c_im[j];
      p_im[j] = sn * c_re[j] + cs * c_im[j];
    }
    const Eigen::VectorXd out_re = q * p_re;
    const Eigen::VectorXd out_im = q * p_im;
    for (Eigen::Index i = 0; i < n; ++i) psi[i] = cplx(out_re[i], out_im[i]);
    observe(k, t, psi);
  }
  return 0.0;
}

StateVector DensePropagator::evolve(const StateVector& psi0, double t) const {
  if (t == 0.0) {
    check(psi0);
    return psi0;
  }
  StateVector out(sites_, axis_);
  evolve(psi0, TimeGrid({0.0, t}), [&](std::size_t k, double, const StateVector& psi) {
    if (k == 1) out = psi;
  });
  return out;
}

EvolutionResult evolve_dense(const Eigen::MatrixXd& h, const StateVector& psi0,
                             const TimeGrid& grid) {
  if (h.rows() > (Eigen::Index{1} << kDenseSiteLimit)) {
    throw std::length_error("dense propagation is limited to L <= " + std::to_string(kDenseSiteLimit));
  }
  DensePropagator prop(h, psi0.sites(), psi0.axis());
  EvolutionResult result{{}, PropagatorKind::Dense, 0.0};
  result.states.reserve(grid.size());
  prop.evolve(psi0, grid, [&](std::size_t, double, const StateVector& psi) {
    result.states.push_back(psi);
  });
  return result;
}

SpectralBounds spectral_bounds(const SparseOperator& op) {
  const std::size_t dim = op.dimension();
  const int steps = static_cast<int>(std::min<std::size_t>(dim, 60));
  CounterRng rng(0x5eed, dim, StreamPurpose::Lanczos);

  std::vector<std::vector<cplx>> basis;
  basis.reserve(steps);
  std::vector<cplx> v(dim), w(dim);
  double nrm = 0.0;
  for (auto& x : v) {
    x = rng.normal();
    nrm += std::norm(x);
  }
  nrm = std::sqrt(nrm);
  for (auto& x : v) x /= nrm;

  std::vector<double> alpha, beta;
  for (int j = 0; j < steps; ++j) {
    basis.push_back(v);
    op.apply(v, w);
    double a = 0.0;
    for (std::size_t i = 0; i < dim; ++i) a += (std::conj(v[i]) * w[i]).real();
    alpha.push_back(a);
    // Full reorthogonalization, applied twice.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : basis) {
        cplx proj{};
        for (std::size_t i = 0; i < dim; ++i) proj += std::conj(u[i]) * w[i];
        for (std::size_t i = 0; i < dim; ++i) w[i] -= proj * u[i];
      }
    }
    double b = 0.0;
    for (const auto& x : w) b += std::norm(x);
    b = std::sqrt(b);
    if (j + 1 == steps || b < 1e-10 * (1.0 + std::abs(a))) break;
    beta.push_back(b);
    for (std::size_t i = 0; i < dim; ++i) v[i] = w[i] / b;
  }

  const Eigen::Index m = static_cast<Eigen::Index>(alpha.size());
  Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
  Eigen::VectorXd sub(std::max<Eigen::Index>(m - 1, 0));
  for (Eigen::Index i = 0; i + 1 < m; ++i) sub[i] = beta[i];
  double lo = diag[0], hi = diag[0];
  if (m > 1) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    lo = es.eigenvalues().minCoeff();
    hi = es.eigenvalues().maxCoeff();
  }
  double pad = SpectralBounds::kPadding * (hi - lo);
  if (pad <= 0.0) pad = SpectralBounds::kPadding * std::max(1.0, std::abs(hi));
  return {lo - pad, hi + pad, lo, hi};
}

ChebyshevPropagator::ChebyshevPropagator(std::shared_ptr<const SparseOperator> op, double tolerance)
    : ChebyshevPropagator(op, tolerance, spectral_bounds(*op)) {}

ChebyshevPropagator::ChebyshevPropagator(std::shared_ptr<const SparseOperator> op, double tolerance,
                                         SpectralBounds bounds)
    : op_(std::move(op)), tolerance_(tolerance), bounds_(bounds) {
  if (!(tolerance_ >= 1e-12)) throw std::invalid_argument("Chebyshev tolerance must be >= 1e-12");
  if (!(bounds_.upper > bounds_.lower)) throw std::invalid_argument("degenerate spectral interval");
  center_ = 0.5 * (bounds_.upper + bounds_.lower);
  half_width_ = 0.5 * (bounds_.upper - bounds_.lower);
}

ChebyshevPropagator::Expansion ChebyshevPropagator::expansion_for(double dt) const {
  Expansion e;
  e.dt = dt;
  const double total = half_width_ * dt;
  if (!(total / kMaxStepArgument <= kMaxSubsteps)) {
    throw ConvergenceError("Chebyshev step needs more than " + std::to_string(kMaxSubsteps) + " substeps");
  }
  e.substeps = std::max(1, static_cast<int>(std::ceil(total / kMaxStepArgument)));
  const double x = total / e.substeps;
  const double sub_tol = tolerance_ / e.substeps;
  for (int k = 0;; ++k) {
    if (k > kMaxOrder) {
      throw ConvergenceError("Chebyshev expansion did not converge below order " +
                             std::to_string(kMaxOrder));
    }
    e.bessel.push_back(std::cyl_bessel_j(static_cast<double>(k), x));
    // Stop once two consecutive coefficients past the turning point are negligible.
    if (k >= 2 && k > x) {
      const double t1 = 2.0 * std::abs(e.bessel[k]);
      const double t2 = 2.0 * std::abs(e.bessel[k - 1]);
      if (t1 + t2 < 0.25 * sub_tol) {
        e.tail = 2.0 * (t1 + t2) * e.substeps;
        e.bessel.resize(k - 1);
        break;
      }
    }
  }
  return e;
}

double ChebyshevPropagator::apply_expansion(const Expansion& e, StateVector& psi) const {
  const std::size_t dim = psi.dimension();
  std::vector<cplx> acc(dim), prev(dim), cur(dim), next(dim);
  const double inv_hw = 1.0 / half_width_;
  const double phase = -center_ * e.dt / e.substeps;
  const cplx global(std::cos(phase), std::sin(phase));
  // (-i)^k cycles through 1, -i, -1, i.
  static const cplx kPowers[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};

  for (int s = 0; s < e.substeps; ++s) {
    auto amps = psi.amplitudes();
    std::copy(amps.begin(), amps.end(), prev.begin());
    for (std::size_t i = 0; i < dim; ++i) acc[i] = e.bessel[0] * prev[i];
    if (e.bessel.size() > 1) {
      op_->apply(prev, cur);
      for (std::size_t i = 0; i < dim; ++i) cur[i] = (cur[i] - center_ * prev[i]) * inv_hw;
      const cplx c1 = 2.0 * e.bessel[1] * kPowers[1];
      for (std::size_t i = 0; i < dim; ++i) acc[i] += c1 * cur[i];
      for (std::size_t k = 2; k < e.bessel.size(); ++k) {
        op_->apply(cur, next);
        const cplx ck = 2.0 * e.bessel[k] * kPowers[k % 4];
        for (std::size_t i = 0; i < dim; ++i) {
          next[i] = 2.0 * (next[i] - center_ * cur[i]) * inv_hw - prev[i];
          acc[i] += ck * next[i];
        }
        std::swap(prev, cur);
        std::swap(cur, next);
      }
    }
    for (std::size_t i = 0; i < dim; ++i) amps[i] = global * acc[i];
  }
  return e.tail;
}

double ChebyshevPropagator::step(StateVector& psi, double dt) const {
  if (psi.dimension() != op_->dimension() || psi.axis() != op_->axis()) {
    throw std::invalid_argument("state does not match the propagator basis");
  }
  if (dt == 0.0) return 0.0;
  if (dt < 0.0) throw std::invalid_argument("Chebyshev steps must go forward in time");
  return apply_expansion(expansion_for(dt), psi);
}

double ChebyshevPropagator::evolve(const StateVector& psi0, const TimeGrid& grid,
                                   const StateObserver& observe) const {
  if (psi0.dimension() != op_->dimension() || psi0.axis() != op_->axis()) {
    throw std::invalid_argument("state does not match the propagator basis");
  }
  StateVector psi = psi0;
  Expansion cached;
  double error = 0.0;
  observe(0, grid[0], psi);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double dt = grid[k] - grid[k - 1];
    // Uniform grids reuse one expansion; tiny float jitter is tolerated.
    if (cached.dt < 0.0 || std::abs(cached.dt - dt) > 1e-13 * std::max(1.0, dt)) {
      cached = expansion_for(dt);
    }
    cached.dt = dt;
    error += apply_expansion(cached, psi);
    observe(k, grid[k], psi);
  }
  return error;
}

EvolutionResult evolve_chebyshev(const SparseOperator& op, const StateVector& psi0,
                                 const TimeGrid& grid, double tolerance) {
  ChebyshevPropagator prop(std::make_shared<const SparseOperator>(op), tolerance);
  EvolutionResult result{{}, PropagatorKind::Chebyshev, 0.0};
  result.states.reserve(grid.size());
  result.accuracy_estimate = prop.evolve(psi0, grid, [&](std::size_t, double, const StateVector& psi) {
    result.states.push_back(psi);
  });
  return result;
}

std::unique_ptr<Propagator> make_propagator(std::shared_ptr<const SparseOperator> op,
                                            PropagatorChoice choice, double tolerance) {
  const bool dense = choice == PropagatorChoice::Dense ||
                     (choice == PropagatorChoice::Auto && op->sites() <= kAutoDenseSiteLimit);
  if (dense) return std::make_unique<DensePropagator>(*op);
  return std::make_unique<ChebyshevPropagator>(std::move(op), tolerance);
}

}  // namespace shieldsim
