#include <doctest.h>

#include <cmath>
#include <set>

#include "shieldsim/hamiltonian.hpp"
#include "shieldsim/rng.hpp"

using namespace shieldsim;

TEST_CASE("streams are deterministic and order independent") {
  CounterRng a(42, 3, StreamPurpose::Disorder), b(42, 3, StreamPurpose::Disorder);
  CounterRng other(42, 4, StreamPurpose::Disorder);
  for (int i = 0; i < 5; ++i) other.next_u64();
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(CounterRng(42, 3, StreamPurpose::Disorder).key() != CounterRng(42, 3, StreamPurpose::InitialState).key());
  CHECK(CounterRng(42, 3, StreamPurpose::Disorder).key() != CounterRng(43, 3, StreamPurpose::Disorder).key());
  CHECK(CounterRng::kAlgorithm == "splitmix64-weyl/v1");
}

TEST_CASE("uniform and normal moments") {
  CounterRng r(7, 0, StreamPurpose::Disorder);
  const int n = 200000;
  double s = 0, s2 = 0, g = 0, g2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    s += u;
    s2 += u * u;
  }
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    g += z;
    g2 += z * z;
  }
  CHECK(s / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(s2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.01));
  CHECK(std::abs(g / n) < 0.01);
  CHECK(g2 / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("disorder sampling") {
  ModelParams p;
  p.sites = 10;
  CHECK(sample_disorder(p, 1, 0).fields == std::vector<double>(10, 0.0));

  p.disorder_width = 2.0;
  const auto a = sample_disorder(p, 5, 9), b = sample_disorder(p, 5, 9);
  CHECK(a.fields == b.fields);
  CHECK(a.fields != sample_disorder(p, 5, 10).fields);

  // <h^2> = W^2/12 over 10^5 draws.
  double m2 = 0.0;
  std::size_t count = 0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    for (double h : sample_disorder(p, 11, i).fields) {
      CHECK(std::abs(h) <= 1.0);
      m2 += h * h;
      ++count;
    }
  }
  CHECK(m2 / count == doctest::Approx(1.0 / 3.0).epsilon(0.02));
}
