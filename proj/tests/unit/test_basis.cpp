#include <doctest.h>

#include <stdexcept>

#include "oracle.hpp"
#include "shieldsim/basis.hpp"

using namespace shieldsim;

namespace {
StateVector from_eigen(const oracle::CVec& v, int sites, Axis axis) {
  return StateVector(sites, axis, std::vector<cplx>(v.data(), v.data() + v.size()));
}
}  // namespace

TEST_CASE("x excitation count") {
  CHECK(x_excitation_count(SpinConfiguration(0xFF, 8, Axis::X)) == 0);
  CHECK(x_excitation_count(SpinConfiguration(0xFE, 8, Axis::X)) == 1);
  CHECK(x_excitation_count(SpinConfiguration(0xC0, 8, Axis::X)) == 6);
  CHECK_THROWS_AS(x_excitation_count(SpinConfiguration(0xFF, 8, Axis::Z)), std::invalid_argument);
}

TEST_CASE("band labels") {
  CHECK(band_of(SpinConfiguration(0xFE, 8, Axis::X)) == 1);
  CHECK(band_of(SpinConfiguration(0xC0, 8, Axis::X)) == 2);
  CHECK(band_of(SpinConfiguration(0xF0, 8, Axis::X)) == 4);
  CHECK_THROWS(band_of(SpinConfiguration(0xF0, 8, Axis::Z)));
  for (std::uint32_t bits = 0; bits < 1024; ++bits) {
    const SpinConfiguration c(bits, 10, Axis::X);
    CHECK(band_of(c.flipped()) == band_of(c));
    CHECK(band_of_index(bits, 10) == band_of(c));
  }
}

TEST_CASE("configuration validation and patterns") {
  CHECK_THROWS(SpinConfiguration(0, 0, Axis::X));
  CHECK_THROWS(SpinConfiguration(0, 31, Axis::X));
  CHECK_THROWS(SpinConfiguration(0x10, 4, Axis::X));
  const auto c = SpinConfiguration::from_pattern("1101", Axis::X);
  CHECK(c.up(0));
  CHECK(c.up(1));
  CHECK_FALSE(c.up(2));
  CHECK(c.pattern() == "1101");
  CHECK(SpinConfiguration::from_pattern("++-+", Axis::X) == c);
  CHECK(SpinConfiguration::single_flip(13, 6, Axis::X).pattern() == "1111110111111");
  CHECK_THROWS(SpinConfiguration::from_pattern("10x1", Axis::X));
}

TEST_CASE("enumerate band sizes") {
  CHECK(enumerate_band(4, 1).size() == 8);
  CHECK(enumerate_band(4, 2).size() == 6);
  CHECK_THROWS_AS(enumerate_band(4, 3), std::out_of_range);
  for (int L = 1; L <= 14; ++L) {
    std::size_t total = 0;
    for (int b = 0; b <= L / 2; ++b) {
      const auto members = enumerate_band(L, b);
      for (const auto& c : members) CHECK(band_of(c) == b);
      total += members.size();
    }
    CHECK(total == (std::size_t{1} << L));
  }
}

TEST_CASE("basis rotation examples") {
  StateVector up(1, Axis::Z, {1.0, 0.0});
  const auto x = basis_rotate(up, Axis::X);
  CHECK(x.axis() == Axis::X);
  CHECK(std::abs(x[0] - cplx(M_SQRT1_2)) < 1e-15);
  CHECK(std::abs(x[1] - cplx(M_SQRT1_2)) < 1e-15);

  StateVector two(2, Axis::Z, {1.0, 0.0, 0.0, 0.0});
  const auto x2 = basis_rotate(two, Axis::X);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(x2[i] - cplx(0.5)) < 1e-15);
}

TEST_CASE("basis rotation against Kronecker oracle, involution, unitarity") {
  for (int L = 1; L <= 10; ++L) {
    const auto v = oracle::random_vector(std::size_t{1} << L, 100 + L);
    const auto w = oracle::random_vector(std::size_t{1} << L, 200 + L);
    const StateVector psi = from_eigen(v, L, Axis::Z);
    const StateVector phi = from_eigen(w, L, Axis::Z);
    const auto rx = basis_rotate(psi, Axis::X);
    if (L <= 6) {
      const oracle::CVec expect = oracle::rotation_zx(L).cast<std::complex<double>>() * v;
      CHECK(max_abs_diff(rx, from_eigen(expect, L, Axis::X)) < 1e-12);
    }
    CHECK(max_abs_diff(basis_rotate(rx, Axis::Z), psi) < 1e-12);
    CHECK(std::abs(inner(rx, basis_rotate(phi, Axis::X)) - inner(psi, phi)) < 1e-12);
    CHECK(std::abs(rx.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("state vector helpers") {
  const auto s = StateVector::basis_state(SpinConfiguration(5, 3, Axis::X));
  CHECK(s.dimension() == 8);
  CHECK(s[5] == cplx(1.0));
  CHECK(s.norm() == doctest::Approx(1.0));
  CHECK_THROWS(StateVector(3, Axis::X, std::vector<cplx>(7)));
  CHECK_THROWS(inner(s, StateVector(3, Axis::Z)));
  CHECK(distance(s, s) == 0.0);
}
