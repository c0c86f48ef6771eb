#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "shieldsim/bands.hpp"

using namespace shieldsim;

TEST_CASE("band energies") {
  CHECK(band_energy(13, 1.0, 1) == doctest::Approx(54.0));
  CHECK(band_energy(13, 1.0, 0) == doctest::Approx(78.0));
  CHECK(band_energy(13, 1.0, 0) - band_energy(13, 1.0, 1) == doctest::Approx(24.0));
  CHECK(band_energy(4, 1.0, 2) == doctest::Approx(-2.0));
  CHECK_THROWS(band_energy(4, 1.0, 3));
}

TEST_CASE("V eigenvalues") {
  ModelParams p;
  p.sites = 8;
  for (const auto& c : enumerate_band(8, 1)) CHECK(v_eigenvalue(c, p) == doctest::Approx(14.0));
  p.sites = 3;
  p.alpha = 3.0;
  CHECK(v_eigenvalue(SpinConfiguration(7, 3, Axis::X), p) == doctest::Approx(1.0 + 1.0 / 8.0 + 1.0));
  p.sites = 9;
  p.alpha = 0.7;
  for (std::uint32_t i = 0; i < 512; i += 7) {
    const SpinConfiguration c(i, 9, Axis::X);
    CHECK(v_eigenvalue(c.flipped(), p) == doctest::Approx(v_eigenvalue(c, p)));
  }
  CHECK_THROWS(v_eigenvalue(SpinConfiguration(7, 3, Axis::Z), p));
}

TEST_CASE("V is diagonal with band energies at alpha = 0") {
  for (int L = 2; L <= 12; ++L) {
    ModelParams p;
    p.sites = L;
    const auto v = build_v_terms(p, Axis::X);
    const SparseOperator op(v);
    CHECK(op.flips().empty());
    for (std::uint32_t i = 0; i < (1u << L); ++i) {
      CHECK(op.diagonal()[i] == doctest::Approx(band_energy(L, 1.0, band_of_index(i, L))).epsilon(1e-13));
    }
  }
}

TEST_CASE("band table structure") {
  for (int L = 1; L <= 14; ++L) {
    const BandTable t(L, 1.0, 0.0);
    std::size_t total = 0;
    for (int b = 0; b < t.band_count(); ++b) {
      double binom = 1.0;
      for (int k = 1; k <= b; ++k) binom = binom * (L - b + k) / k;
      const auto expect = static_cast<std::size_t>(std::lround(2 * b == L ? binom : 2.0 * binom));
      CHECK(t.dimension(b) == expect);
      total += t.dimension(b);
      for (auto i : t.members(b)) CHECK(t.band_of(i) == b);
    }
    CHECK(total == (std::size_t{1} << L));
  }
  CHECK(BandTable(8, 1.0, 0.0).dimension(1) == 16);
  CHECK(BandTable(8, 1.0, 0.0).dimension(4) == 70);
  CHECK(BandTable(8, 1.0, 0.0).energy(2).value() == doctest::Approx(band_energy(8, 1.0, 2)));
  CHECK_FALSE(BandTable(8, 1.0, 0.5).energy(2).has_value());
}

TEST_CASE("projectors and weights") {
  const BandTable t(8, 1.0, 0.0);
  CounterRng rng(3, 0, StreamPurpose::InitialState);
  StateVector psi(8, Axis::X);
  for (std::size_t i = 0; i < psi.dimension(); ++i) psi[i] = cplx(rng.normal(), rng.normal());
  psi.normalize();

  StateVector sum(8, Axis::X);
  for (int b = 0; b < t.band_count(); ++b) {
    const auto pb = projector_apply(t, b, psi);
    CHECK(max_abs_diff(projector_apply(t, b, pb), pb) == 0.0);
    for (int b2 = 0; b2 < t.band_count(); ++b2) {
      if (b2 != b) CHECK(projector_apply(t, b2, pb).norm() == 0.0);
    }
    for (std::size_t i = 0; i < sum.dimension(); ++i) sum[i] += pb[i];
  }
  CHECK(max_abs_diff(sum, psi) < 1e-15);
  const auto w = band_weights(t, psi);
  double total = 0.0;
  for (double x : w) total += x;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  StateVector mix(8, Axis::X);
  mix[0xFF] = M_SQRT1_2;
  mix[0xFE] = M_SQRT1_2;
  const auto wm = band_weights(t, mix);
  CHECK(wm[0] == doctest::Approx(0.5));
  CHECK(wm[1] == doctest::Approx(0.5));
  CHECK(wm[2] == 0.0);
  CHECK_THROWS(projector_apply(t, 5, psi));
}

TEST_CASE("random band states") {
  const BandTable t(10, 1.0, 0.0);
  const auto psi = random_band_state(t, 3, std::uint64_t{4});
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(band_weights(t, psi)[3] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_abs_diff(psi, random_band_state(t, 3, std::uint64_t{4})) == 0.0);

  const auto half = random_band_state(t, 2, std::uint64_t{4}, false);
  for (std::size_t i = 0; i < half.dimension(); ++i) {
    if (half[i] != cplx(0.0)) CHECK(10 - std::popcount(i) == 2);
  }

  // Haar mean overlap 1/dim over 1000 pairs.
  const BandTable small(6, 1.0, 0.0);
  double mean = 0.0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    mean += std::norm(inner(random_band_state(small, 2, 2 * s), random_band_state(small, 2, 2 * s + 1)));
  }
  mean /= 1000.0;
  CHECK(mean == doctest::Approx(1.0 / small.dimension(2)).epsilon(0.2));
}

TEST_CASE("band spreads for 0 < alpha < 1") {
  ModelParams p;
  p.sites = 8;
  const auto flat = band_spreads(BandTable(8, 1.0, 0.0), p);
  for (int b = 0; b <= 4; ++b) {
    CHECK(flat[b].v_min == doctest::Approx(band_energy(8, 1.0, b)));
    CHECK(flat[b].v_max == doctest::Approx(band_energy(8, 1.0, b)));
  }
  CHECK(overlapping_bands(flat, 2).empty());

  // Separated everywhere at alpha = 0.3; at larger alpha band 2 can overlap,
  // which the spectrum experiment reports as a warning.
  for (double alpha : {0.3, 0.5, 0.8}) {
    for (int L : {8, 10, 12}) {
      p.sites = L;
      p.alpha = alpha;
      const auto s = band_spreads(BandTable(L, 1.0, alpha), p);
      const auto bad = overlapping_bands(s, 2);
      INFO("alpha=" << alpha << " L=" << L);
      for (int b : bad) CHECK(b == 2);
      if (alpha == 0.3) CHECK(bad.empty());
      if (alpha == 0.8) CHECK(bad == std::vector<int>{2});
    }
  }
}
