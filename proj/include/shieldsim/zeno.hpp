#pragma once

#include <memory>
#include <vector>

#include "shieldsim/bands.hpp"
#include "shieldsim/hamiltonian.hpp"
#include "shieldsim/propagation.hpp"

namespace shieldsim {

/// H_Z = sum_b P_b H P_b in the x basis.
///
/// The diagonal is the per-configuration V eigenvalue (the band energy E_b
/// at alpha = 0) plus the projected diagonal of H0; the off-diagonal part
/// keeps only flips that stay inside a band. For alpha > 0 the same
/// construction is applied to the excitation-number clusters.
class ZenoHamiltonian {
 public:
  explicit ZenoHamiltonian(SparseOperator restricted);

  const SparseOperator& op() const { return *op_; }
  std::shared_ptr<const SparseOperator> shared_op() const { return op_; }
  int sites() const { return op_->sites(); }

  /// True when H_Z has no intra-band hopping, i.e. H_Z = V.
  bool diagonal() const { return op_->flips().empty(); }
  /// Flip terms surviving the projection (adjacent double flips for the zz
  /// part, plus single flips inside the central band of odd chains).
  const std::vector<FlipTerm>& hops() const { return op_->flips(); }

 private:
  std::shared_ptr<const SparseOperator> op_;
};

ZenoHamiltonian build_zeno(const ModelParams& params, const DisorderRealization& realization,
                           const BandTable& table);

/// Evolution under H_Z. A diagonal H_Z is applied as exact phases, otherwise
/// the requested propagator is used.
EvolutionResult evolve_zeno(const ZenoHamiltonian& zh, const StateVector& psi0,
                            const TimeGrid& grid,
                            PropagatorChoice choice = PropagatorChoice::Auto,
                            double tolerance = 1e-12);

/// Streaming form of evolve_zeno; returns the accumulated truncation bound.
double evolve_zeno(const ZenoHamiltonian& zh, const StateVector& psi0, const TimeGrid& grid,
                   const StateObserver& observe, PropagatorChoice choice = PropagatorChoice::Auto,
                   double tolerance = 1e-12);

}  // namespace shieldsim
