#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "shieldsim/basis.hpp"
#include "shieldsim/hamiltonian.hpp"

namespace shieldsim {

/// Strictly increasing sample times starting at t = 0 (units 1/J).
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> times);

  /// n_steps equal intervals on [0, t_max], n_steps + 1 points.
  static TimeGrid linear(double t_max, int n_steps);
  /// t = 0 followed by n_points geometrically spaced times in [t_first, t_max].
  static TimeGrid geometric(double t_first, double t_max, int n_points);

  const std::vector<double>& times() const { return times_; }
  std::size_t size() const { return times_.size(); }
  double operator[](std::size_t i) const { return times_[i]; }
  double horizon() const { return times_.back(); }

 private:
  std::vector<double> times_;
};

enum class PropagatorKind { Dense, Chebyshev };
const char* propagator_name(PropagatorKind kind);

struct EvolutionResult {
  std::vector<StateVector> states;  // one per grid point
  PropagatorKind method;
  double accuracy_estimate = 0.0;  // accumulated truncation bound (Chebyshev) or 0
};

/// Called once per grid point with the state at that time.
using StateObserver = std::function<void(std::size_t index, double t, const StateVector& psi)>;

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns
};

/// Full eigendecomposition of a real symmetric matrix (Eigen self-adjoint solver).
SymmetricEigen eigensolve_sym(const Eigen::MatrixXd& matrix);

class Propagator {
 public:
  virtual ~Propagator() = default;
  virtual PropagatorKind kind() const = 0;
  /// Streams psi(t) for every grid time; returns the accumulated
  /// truncation bound (0 for exact methods).
  virtual double evolve(const StateVector& psi0, const TimeGrid& grid,
                        const StateObserver& observe) const = 0;
};

/// psi(t) = Q exp(-i Lambda t) Q^T psi0 from one dense diagonalization.
class DensePropagator final : public Propagator {
 public:
  DensePropagator(const Eigen::MatrixXd& h, int sites, Axis axis);
  explicit DensePropagator(const SparseOperator& op);

  PropagatorKind kind() const override { return PropagatorKind::Dense; }
  double evolve(const StateVector& psi0, const TimeGrid& grid,
                const StateObserver& observe) const override;
  StateVector evolve(const StateVector& psi0, double t) const;

  const SymmetricEigen& eigen() const { return eigen_; }

 private:
  void check(const StateVector& psi) const;

  int sites_;
  Axis axis_;
  SymmetricEigen eigen_;
};

EvolutionResult evolve_dense(const Eigen::MatrixXd& h, const StateVector& psi0,
                             const TimeGrid& grid);

/// Enclosure [lower, upper] of the spectrum: extremal Lanczos Ritz values
/// widened on each side by kPadding times their spread.
struct SpectralBounds {
  static constexpr double kPadding = 0.05;
  double lower;
  double upper;
  double ritz_min;
  double ritz_max;
};

SpectralBounds spectral_bounds(const SparseOperator& op);

/// Chebyshev expansion of exp(-iH dt) on the padded spectral interval.
/// The expansion order per step is chosen so the discarded Bessel tail is
/// below `tolerance` in vector norm.
class ChebyshevPropagator final : public Propagator {
 public:
  static constexpr double kMaxStepArgument = 40.0;
  static constexpr int kMaxOrder = 200000;
  static constexpr int kMaxSubsteps = 100000000;

  explicit ChebyshevPropagator(std::shared_ptr<const SparseOperator> op, double tolerance = 1e-12);
  ChebyshevPropagator(std::shared_ptr<const SparseOperator> op, double tolerance,
                      SpectralBounds bounds);

  PropagatorKind kind() const override { return PropagatorKind::Chebyshev; }
  double evolve(const StateVector& psi0, const TimeGrid& grid,
                const StateObserver& observe) const override;

  /// Advances psi by dt in place; returns the truncation bound for the step.
  double step(StateVector& psi, double dt) const;

  const SpectralBounds& bounds() const { return bounds_; }
  const SparseOperator& op() const { return *op_; }

 private:
  struct Expansion {
    double dt = -1.0;
    int substeps = 0;
    std::vector<double> bessel;  // J_k(half_width * dt / substeps)
    double tail = 0.0;
  };
  Expansion expansion_for(double dt) const;
  double apply_expansion(const Expansion& e, StateVector& psi) const;

  std::shared_ptr<const SparseOperator> op_;
  double tolerance_;
  SpectralBounds bounds_;
  double center_;
  double half_width_;
};

EvolutionResult evolve_chebyshev(const SparseOperator& op, const StateVector& psi0,
                                 const TimeGrid& grid, double tolerance = 1e-12);

enum class PropagatorChoice { Auto, Dense, Chebyshev };

/// Largest L the Auto choice sends to the dense propagator.
inline constexpr int kAutoDenseSiteLimit = 10;

std::unique_ptr<Propagator> make_propagator(std::shared_ptr<const SparseOperator> op,
                                            PropagatorChoice choice, double tolerance = 1e-12);

}  // namespace shieldsim
