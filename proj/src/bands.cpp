#include "shieldsim/bands.hpp"

#include <bit>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace shieldsim {

double band_energy(int sites, double coupling, int b) {
  check_band(sites, b);
  const double d = 0.5 * sites - b;
  return 2.0 * coupling * d * d - 0.5 * coupling * sites;
}

double v_eigenvalue(const SpinConfiguration& config, const ModelParams& params) {
  if (config.axis() != Axis::X) throw std::invalid_argument("V is diagonal only in the x basis");
  if (config.sites() != params.sites) throw std::invalid_argument("configuration length differs from L");
  double e = 0.0;
  for (int n = 0; n < params.sites; ++n) {
    const double sn = config.up(n) ? 1.0 : -1.0;
    for (int m = n + 1; m < params.sites; ++m) {
      const double sm = config.up(m) ? 1.0 : -1.0;
      e += params.coupling / std::pow(static_cast<double>(m - n), params.alpha) * sn * sm;
    }
  }
  return e;
}

BandTable::BandTable(int sites, double coupling, double alpha)
    : sites_(sites), coupling_(coupling), alpha_(alpha) {
  if (sites < 1 || sites > kMaxSites) throw std::invalid_argument("invalid L for band table");
  const std::size_t dim = std::size_t{1} << sites;
  members_.resize(sites / 2 + 1);
  band_.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const int b = band_of_index(i, sites);
    band_[i] = static_cast<std::uint8_t>(b);
    members_[b].push_back(static_cast<std::uint32_t>(i));
  }
}

const std::vector<std::uint32_t>& BandTable::members(int b) const {
  check_band(sites_, b);
  return members_[b];
}

std::optional<double> BandTable::energy(int b) const {
  check_band(sites_, b);
  if (alpha_ != 0.0) return std::nullopt;
  return band_energy(sites_, coupling_, b);
}

namespace {
void require_x(const BandTable& table, const StateVector& psi) {
  if (psi.axis() != Axis::X) throw std::invalid_argument("band operations need an x-basis state");
  if (psi.sites() != table.sites()) throw std::invalid_argument("state and band table differ in L");
}
}  // namespace

StateVector projector_apply(const BandTable& table, int b, const StateVector& psi) {
  require_x(table, psi);
  check_band(table.sites(), b);
  StateVector out(psi.sites(), Axis::X);
  for (auto i : table.members(b)) out[i] = psi[i];
  return out;
}

std::vector<double> band_weights(const BandTable& table, const StateVector& psi) {
  require_x(table, psi);
  std::vector<double> w(table.band_count(), 0.0);
  const auto& labels = table.band_labels();
  for (std::size_t i = 0; i < psi.dimension(); ++i) w[labels[i]] += std::norm(psi[i]);
  return w;
}

StateVector random_band_state(const BandTable& table, int b, CounterRng& rng,
                              bool include_mirror) {
  const auto& members = table.members(b);
  StateVector psi(table.sites(), Axis::X);
  for (auto i : members) {
    const double re = rng.normal();
    const double im = rng.normal();
    const int k = table.sites() - std::popcount(i);
    if (include_mirror || k == b) psi[i] = cplx(re, im);
  }
  psi.normalize();
  return psi;
}

StateVector random_band_state(const BandTable& table, int b, std::uint64_t seed,
                              bool include_mirror) {
  CounterRng rng(seed, 0, StreamPurpose::InitialState);
  return random_band_state(table, b, rng, include_mirror);
}

std::vector<BandSpread> band_spreads(const BandTable& table, const ModelParams& params) {
  std::vector<BandSpread> out;
  for (int b = 0; b < table.band_count(); ++b) {
    BandSpread s{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0.0};
    for (auto i : table.members(b)) {
      const double v = v_eigenvalue(SpinConfiguration(i, table.sites(), Axis::X), params);
      s.v_min = std::min(s.v_min, v);
      s.v_max = std::max(s.v_max, v);
      s.v_mean += v;
    }
    s.v_mean /= static_cast<double>(table.dimension(b));
    out.push_back(s);
  }
  return out;
}

std::vector<int> overlapping_bands(const std::vector<BandSpread>& spreads, int max_band) {
  const int top = std::min<int>(max_band + 1, static_cast<int>(spreads.size()) - 1);
  double gap = std::numeric_limits<double>::infinity();
  for (int b = 0; b < top; ++b) gap = std::min(gap, std::abs(spreads[b].v_mean - spreads[b + 1].v_mean));
  std::vector<int> out;
  for (int b = 0; b <= std::min(max_band, top); ++b) {
    if (!(spreads[b].v_max - spreads[b].v_min < gap)) out.push_back(b);
  }
  return out;
}

}  // namespace shieldsim
