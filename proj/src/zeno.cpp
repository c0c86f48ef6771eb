#include "shieldsim/zeno.hpp"

#include <cmath>
#include <stdexcept>

namespace shieldsim {

ZenoHamiltonian::ZenoHamiltonian(SparseOperator restricted)
    : op_(std::make_shared<const SparseOperator>(std::move(restricted))) {
  if (!op_->band_restricted()) throw std::invalid_argument("Zeno Hamiltonian needs a band-restricted operator");
}

ZenoHamiltonian build_zeno(const ModelParams& params, const DisorderRealization& realization,
                           const BandTable& table) {
  if (table.sites() != params.sites) throw std::invalid_argument("band table and model differ in L");
  SparseOperator full(build_terms_x(params, realization));
  return ZenoHamiltonian(full.restricted_to_bands());
}

double evolve_zeno(const ZenoHamiltonian& zh, const StateVector& psi0, const TimeGrid& grid,
                   const StateObserver& observe, PropagatorChoice choice, double tolerance) {
  if (psi0.axis() != Axis::X || psi0.sites() != zh.sites()) {
    throw std::invalid_argument("Zeno evolution needs an x-basis state of matching L");
  }
  if (!zh.diagonal()) {
    return make_propagator(zh.shared_op(), choice, tolerance)->evolve(psi0, grid, observe);
  }
  const auto& diag = zh.op().diagonal();
  StateVector psi(psi0.sites(), Axis::X);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    for (std::size_t i = 0; i < psi.dimension(); ++i) {
      const double phase = -diag[i] * t;
      psi[i] = psi0[i] * cplx(std::cos(phase), std::sin(phase));
    }
    observe(k, t, psi);
  }
  return 0.0;
}

EvolutionResult evolve_zeno(const ZenoHamiltonian& zh, const StateVector& psi0,
                            const TimeGrid& grid, PropagatorChoice choice, double tolerance) {
  EvolutionResult result{{}, PropagatorKind::Dense, 0.0};
  result.states.reserve(grid.size());
  if (!zh.diagonal()) {
    const bool dense = choice == PropagatorChoice::Dense ||
                       (choice == PropagatorChoice::Auto && zh.sites() <= kAutoDenseSiteLimit);
    result.method = dense ? PropagatorKind::Dense : PropagatorKind::Chebyshev;
  }
  result.accuracy_estimate = evolve_zeno(
      zh, psi0, grid, [&](std::size_t, double, const StateVector& psi) { result.states.push_back(psi); },
      choice, tolerance);
  return result;
}

}  // namespace shieldsim
