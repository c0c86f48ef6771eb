#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shieldsim {

using cplx = std::complex<double>;

/// Quantization axis a bit pattern or state vector is expressed in.
enum class Axis : std::uint8_t { Z, X };

inline constexpr int kMaxSites = 30;

const char* axis_name(Axis axis);

/// Product-basis label for an L-site chain.
///
/// Bit n set means the spin on site n+1 has eigenvalue +1 of the Pauli
/// operator along the tagged axis. Bits at positions >= L are always zero.
class SpinConfiguration {
 public:
  SpinConfiguration(std::uint32_t bits, int sites, Axis axis);

  /// Parses a site-ordered pattern (site 1 first). Accepts '1'/'+'/'u' for
  /// up and '0'/'-'/'d' for down.
  static SpinConfiguration from_pattern(std::string_view pattern, Axis axis);

  /// All spins up except the one at 0-based `site`.
  static SpinConfiguration single_flip(int sites, int site, Axis axis);

  std::uint32_t bits() const { return bits_; }
  int sites() const { return sites_; }
  Axis axis() const { return axis_; }
  bool up(int site) const { return (bits_ >> site) & 1u; }

  SpinConfiguration flipped() const;
  std::string pattern() const;

  friend bool operator==(const SpinConfiguration&, const SpinConfiguration&) = default;

 private:
  std::uint32_t bits_;
  int sites_;
  Axis axis_;
};

/// Number of x-direction down spins. Rejects Z-tagged configurations.
int x_excitation_count(const SpinConfiguration& config);

/// Band label b = min(k, L-k) of an X-tagged configuration.
int band_of(const SpinConfiguration& config);

/// Band label for a raw x-basis index.
inline int band_of_index(std::uint64_t index, int sites) {
  const int k = sites - __builtin_popcountll(index);
  return k < sites - k ? k : sites - k;
}

void check_band(int sites, int b);

/// All X-tagged configurations with b or L-b down spins, ordered by index.
std::vector<SpinConfiguration> enumerate_band(int sites, int b);

/// Dense amplitude vector over the 2^L product states of one axis.
class StateVector {
 public:
  StateVector(int sites, Axis axis);
  StateVector(int sites, Axis axis, std::vector<cplx> amplitudes);

  static StateVector basis_state(const SpinConfiguration& config);

  int sites() const { return sites_; }
  Axis axis() const { return axis_; }
  std::size_t dimension() const { return amps_.size(); }

  std::span<cplx> amplitudes() { return amps_; }
  std::span<const cplx> amplitudes() const { return amps_; }
  cplx& operator[](std::size_t i) { return amps_[i]; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }

  double norm() const;
  void normalize();

 private:
  int sites_;
  Axis axis_;
  std::vector<cplx> amps_;
};

cplx inner(const StateVector& bra, const StateVector& ket);

/// Largest |a_i - b_i| over amplitudes; both vectors must share axis and L.
double max_abs_diff(const StateVector& a, const StateVector& b);

/// Euclidean norm of a - b.
double distance(const StateVector& a, const StateVector& b);

/// Re-expresses psi in the target basis using one butterfly pass per site.
///
/// Single-site convention: |+x> = (|dn> + |up>)/sqrt2 and
/// |-x> = (|dn> - |up>)/sqrt2, so z-amplitudes (a_dn, a_up) map to
/// x-amplitudes ((a_dn - a_up)/sqrt2, (a_dn + a_up)/sqrt2). Rotating to X
/// and back to Z is the identity.
StateVector basis_rotate(const StateVector& psi, Axis target);

}  // namespace shieldsim
