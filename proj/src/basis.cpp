#include "shieldsim/basis.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace shieldsim {

const char* axis_name(Axis axis) { return axis == Axis::Z ? "z" : "x"; }

namespace {

void check_sites(int sites) {
  if (sites < 1 || sites > kMaxSites) {
    throw std::invalid_argument("site count must lie in [1, 30], got " + std::to_string(sites));
  }
}

std::uint32_t all_up(int sites) {
  return sites == 32 ? ~0u : ((1u << sites) - 1u);
}

void require_same_layout(const StateVector& a, const StateVector& b) {
  if (a.sites() != b.sites() || a.axis() != b.axis()) {
    throw std::invalid_argument("state vectors differ in site count or basis");
  }
}

}  // namespace

SpinConfiguration::SpinConfiguration(std::uint32_t bits, int sites, Axis axis)
    : bits_(bits), sites_(sites), axis_(axis) {
  check_sites(sites);
  if ((bits & ~all_up(sites)) != 0) {
    throw std::invalid_argument("configuration has bits set beyond site L");
  }
}

SpinConfiguration SpinConfiguration::from_pattern(std::string_view pattern, Axis axis) {
  const int sites = static_cast<int>(pattern.size());
  check_sites(sites);
  std::uint32_t bits = 0;
  for (int n = 0; n < sites; ++n) {
    switch (pattern[n]) {
      case '1':
      case '+':
      case 'u':
        bits |= 1u << n;
        break;
      case '0':
      case '-':
      case 'd':
        break;
      default:
        throw std::invalid_argument("invalid character '" + std::string(1, pattern[n]) +
                                    "' in spin pattern");
    }
  }
  return {bits, sites, axis};
}

SpinConfiguration SpinConfiguration::single_flip(int sites, int site, Axis axis) {
  check_sites(sites);
  if (site < 0 || site >= sites) throw std::invalid_argument("flip site out of range");
  return {all_up(sites) & ~(1u << site), sites, axis};
}

SpinConfiguration SpinConfiguration::flipped() const {
  return {~bits_ & all_up(sites_), sites_, axis_};
}

std::string SpinConfiguration::pattern() const {
  std::string out(sites_, '0');
  for (int n = 0; n < sites_; ++n) {
    if (up(n)) out[n] = '1';
  }
  return out;
}

int x_excitation_count(const SpinConfiguration& config) {
  if (config.axis() != Axis::X) {
    throw std::invalid_argument("excitation count needs an x-basis configuration");
  }
  return config.sites() - std::popcount(config.bits());
}

int band_of(const SpinConfiguration& config) {
  const int k = x_excitation_count(config);
  return std::min(k, config.sites() - k);
}

void check_band(int sites, int b) {
  if (b < 0 || b > sites / 2) {
    throw std::out_of_range("band index " + std::to_string(b) + " outside [0, " +
                            std::to_string(sites / 2) + "]");
  }
}

std::vector<SpinConfiguration> enumerate_band(int sites, int b) {
  check_sites(sites);
  check_band(sites, b);
  std::vector<SpinConfiguration> out;
  const std::uint32_t dim = 1u << sites;
  for (std::uint32_t i = 0; i < dim; ++i) {
    if (band_of_index(i, sites) == b) out.emplace_back(i, sites, Axis::X);
  }
  return out;
}

StateVector::StateVector(int sites, Axis axis) : sites_(sites), axis_(axis) {
  check_sites(sites);
  amps_.assign(std::size_t{1} << sites, cplx{});
}

StateVector::StateVector(int sites, Axis axis, std::vector<cplx> amplitudes)
    : sites_(sites), axis_(axis), amps_(std::move(amplitudes)) {
  check_sites(sites);
  if (amps_.size() != (std::size_t{1} << sites)) {
    throw std::invalid_argument("amplitude array length must be 2^L");
  }
}

StateVector StateVector::basis_state(const SpinConfiguration& config) {
  StateVector psi(config.sites(), config.axis());
  psi[config.bits()] = 1.0;
  return psi;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::normalize() {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
  for (auto& a : amps_) a /= n;
}

cplx inner(const StateVector& bra, const StateVector& ket) {
  require_same_layout(bra, ket);
  cplx s{};
  for (std::size_t i = 0; i < bra.dimension(); ++i) s += std::conj(bra[i]) * ket[i];
  return s;
}

double max_abs_diff(const StateVector& a, const StateVector& b) {
  require_same_layout(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double distance(const StateVector& a, const StateVector& b) {
  require_same_layout(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

StateVector basis_rotate(const StateVector& psi, Axis target) {
  if (psi.axis() == target) return psi;
  StateVector out(psi.sites(), target,
                  std::vector<cplx>(psi.amplitudes().begin(), psi.amplitudes().end()));

  const double r = 1.0 / std::sqrt(2.0);
  const bool to_x = target == Axis::X;
  auto amps = out.amplitudes();
  const std::size_t dim = amps.size();
  for (int n = 0; n < psi.sites(); ++n) {
    const std::size_t stride = std::size_t{1} << n;
    for (std::size_t block = 0; block < dim; block += 2 * stride) {
      for (std::size_t i = block; i < block + stride; ++i) {
        const cplx lo = amps[i];
        const cplx hi = amps[i + stride];
        if (to_x) {
          amps[i] = (lo - hi) * r;
          amps[i + stride] = (lo + hi) * r;
        } else {
          amps[i] = (lo + hi) * r;
          amps[i + stride] = (hi - lo) * r;
        }
      }
    }
  }
  return out;
}

}  // namespace shieldsim
