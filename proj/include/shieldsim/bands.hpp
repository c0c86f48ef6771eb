#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "shieldsim/basis.hpp"
#include "shieldsim/hamiltonian.hpp"
#include "shieldsim/rng.hpp"

namespace shieldsim {

/// E_b = 2J(L/2 - b)^2 - JL/2, the alpha = 0 eigenvalue of V on band b.
double band_energy(int sites, double coupling, int b);

/// Diagonal element of V on an x-basis configuration, any alpha.
double v_eigenvalue(const SpinConfiguration& config, const ModelParams& params);

/// Partition of the x basis into bands b = min(k, L-k).
///
/// Membership is by excitation number for every alpha; at alpha = 0 the
/// bands are exact degenerate eigenspaces of V, otherwise quasi-degenerate
/// clusters. Projectors are index sets.
class BandTable {
 public:
  BandTable(int sites, double coupling, double alpha);

  int sites() const { return sites_; }
  double coupling() const { return coupling_; }
  double alpha() const { return alpha_; }
  int band_count() const { return static_cast<int>(members_.size()); }

  const std::vector<std::uint32_t>& members(int b) const;
  std::size_t dimension(int b) const { return members(b).size(); }
  int band_of(std::uint32_t index) const { return band_[index]; }
  const std::vector<std::uint8_t>& band_labels() const { return band_; }

  /// E_b at alpha = 0, empty otherwise.
  std::optional<double> energy(int b) const;

 private:
  int sites_;
  double coupling_;
  double alpha_;
  std::vector<std::vector<std::uint32_t>> members_;
  std::vector<std::uint8_t> band_;
};

struct BandSpread {
  double v_min;
  double v_max;
  double v_mean;
};

/// Range and mean of v_eigenvalue over the members of each band.
std::vector<BandSpread> band_spreads(const BandTable& table, const ModelParams& params);

/// Bands b <= max_band whose spread is not below the smallest gap between
/// adjacent band means among b <= max_band + 1. Empty means separated.
std::vector<int> overlapping_bands(const std::vector<BandSpread>& spreads, int max_band);

/// Zeroes every amplitude outside band b. Result is not renormalized.
StateVector projector_apply(const BandTable& table, int b, const StateVector& psi);

/// P_b = ||Pi_b psi||^2 for every band.
std::vector<double> band_weights(const BandTable& table, const StateVector& psi);

/// Haar-random unit vector on band b: i.i.d. complex Gaussians, normalized.
/// With include_mirror = false only the sector with exactly b down spins
/// is populated.
StateVector random_band_state(const BandTable& table, int b, CounterRng& rng,
                              bool include_mirror = true);
StateVector random_band_state(const BandTable& table, int b, std::uint64_t seed,
                              bool include_mirror = true);

}  // namespace shieldsim
