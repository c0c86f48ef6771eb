#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "oracle.hpp"
#include "shieldsim/bands.hpp"
#include "shieldsim/errors.hpp"
#include "shieldsim/propagation.hpp"

using namespace shieldsim;

namespace {

ModelParams random_params(std::mt19937_64& gen, int L) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ModelParams p;
  p.sites = L;
  p.field = u(gen);
  p.disorder_width = 2.0 * u(gen);
  p.coupling = 0.5 + u(gen);
  p.zz_coupling = u(gen);
  p.alpha = 2.0 * u(gen);
  return p;
}

StateVector random_state(int L, unsigned seed) {
  const auto v = oracle::random_vector(std::size_t{1} << L, seed);
  return StateVector(L, Axis::X, std::vector<cplx>(v.data(), v.data() + v.size()));
}

}  // namespace

TEST_CASE("time grids") {
  const auto g = TimeGrid::linear(2.0, 4);
  CHECK(g.size() == 5);
  CHECK(g[2] == doctest::Approx(1.0));
  CHECK(g.horizon() == 2.0);
  const auto geo = TimeGrid::geometric(0.1, 1000.0, 5);
  CHECK(geo.size() == 6);
  CHECK(geo[0] == 0.0);
  CHECK(geo[1] == doctest::Approx(0.1));
  CHECK(geo[3] == doctest::Approx(10.0));
  CHECK(geo.horizon() == 1000.0);
  CHECK_THROWS(TimeGrid({}));
  CHECK_THROWS(TimeGrid({0.5, 1.0}));
  CHECK_THROWS(TimeGrid({0.0, 1.0, 1.0}));
  CHECK_THROWS(TimeGrid({0.0, NAN}));
}

TEST_CASE("symmetric eigensolver") {
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, 1, 0;
  const auto e = eigensolve_sym(a);
  CHECK(e.values[0] == doctest::Approx(-1.0));
  CHECK(e.values[1] == doctest::Approx(1.0));
  const auto id = eigensolve_sym(Eigen::MatrixXd::Identity(5, 5));
  for (int i = 0; i < 5; ++i) CHECK(id.values[i] == doctest::Approx(1.0));
  Eigen::MatrixXd bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(eigensolve_sym(bad), std::invalid_argument);

  std::mt19937_64 gen(1);
  const auto p = random_params(gen, 8);
  const auto h = dense_matrix(build_terms_x(p, sample_disorder(p, 1, 0)));
  const auto r = eigensolve_sym(h);
  const double norm = h.norm();
  CHECK((h * r.vectors - r.vectors * r.values.asDiagonal()).colwise().norm().maxCoeff() < 1e-10 * norm);
  CHECK((r.vectors.transpose() * r.vectors - Eigen::MatrixXd::Identity(256, 256)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("V eigenvalues reproduce band multiplicities") {
  ModelParams p;
  p.sites = 8;
  const auto e = eigensolve_sym(dense_matrix(build_v_terms(p, Axis::X)));
  std::map<long, int> counts;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) counts[std::lround(e.values[i])]++;
  for (int b = 0; b <= 4; ++b) {
    CHECK(counts[std::lround(band_energy(8, 1.0, b))] == static_cast<int>(enumerate_band(8, b).size()));
  }
}

TEST_CASE("dense evolution") {
  ModelParams p;
  p.sites = 2;
  const auto h = dense_matrix(build_terms(p, clean_realization(2)));
  StateVector up(2, Axis::Z);
  up[3] = 1.0;
  const auto res = evolve_dense(h, up, TimeGrid({0.0, M_PI / 4, M_PI / 2}));
  CHECK(max_abs_diff(res.states[0], up) < 1e-14);
  CHECK(std::norm(res.states[1][0]) == doctest::Approx(0.5));
  CHECK(std::norm(res.states[2][0]) == doctest::Approx(1.0));

  // Diagonal evolution only changes phases.
  p.sites = 6;
  const auto v = dense_matrix(build_v_terms(p, Axis::X));
  const auto psi = random_state(6, 4);
  const auto vr = evolve_dense(v, psi, TimeGrid::linear(3.0, 3));
  for (const auto& s : vr.states)
    for (std::size_t i = 0; i < s.dimension(); ++i) CHECK(std::abs(s[i]) == doctest::Approx(std::abs(psi[i])));
}

TEST_CASE("spectral bounds enclose the spectrum") {
  ModelParams p;
  p.sites = 2;
  const SparseOperator xx(build_terms(p, clean_realization(2)));
  const auto b = spectral_bounds(xx);
  CHECK(b.lower <= -1.0);
  CHECK(b.upper >= 1.0);
  CHECK(b.upper - b.ritz_max == doctest::Approx(SpectralBounds::kPadding * (b.ritz_max - b.ritz_min)));
  CHECK(b.ritz_min - b.lower == doctest::Approx(SpectralBounds::kPadding * (b.ritz_max - b.ritz_min)));

  p.sites = 10;
  const auto vb = spectral_bounds(SparseOperator(build_v_terms(p, Axis::X)));
  CHECK(vb.lower <= -5.0);
  CHECK(vb.upper >= 2.0 * 25.0 - 5.0);

  std::mt19937_64 gen(2);
  for (int draw = 0; draw < 5; ++draw) {
    const auto q = random_params(gen, 8);
    const SparseOperator op(build_terms_x(q, sample_disorder(q, 3, draw)));
    const auto e = eigensolve_sym(op.to_dense());
    const auto sb = spectral_bounds(op);
    CHECK(sb.lower <= e.values.minCoeff());
    CHECK(sb.upper >= e.values.maxCoeff());
  }
}

TEST_CASE("Chebyshev matches dense, conserves norm and energy") {
  std::mt19937_64 gen(7);
  for (int draw = 0; draw < 3; ++draw) {
    const auto p = random_params(gen, 10);
    const auto op = std::make_shared<const SparseOperator>(build_terms_x(p, sample_disorder(p, 5, draw)));
    const auto psi0 = random_state(10, 30 + draw);
    const auto grid = TimeGrid::linear(10.0, 20);
    const DensePropagator dense(*op);
    const ChebyshevPropagator cheb(op, 1e-12);
    std::vector<StateVector> ref;
    dense.evolve(psi0, grid, [&](std::size_t, double, const StateVector& s) { ref.push_back(s); });
    const double e0 = op->expectation(psi0);
    const double bound = cheb.evolve(psi0, grid, [&](std::size_t k, double, const StateVector& s) {
      CHECK(distance(s, ref[k]) < 1e-8);
      CHECK(std::abs(s.norm() - 1.0) < 1e-10);
      CHECK(std::abs(op->expectation(s) - e0) < 1e-8 * std::max(1.0, std::abs(e0)));
    });
    CHECK(bound < 1e-10);
    CHECK(distance(ref.front(), psi0) < 1e-12);
  }
}

TEST_CASE("time translation") {
  std::mt19937_64 gen(8);
  const auto p = random_params(gen, 8);
  const auto op = std::make_shared<const SparseOperator>(build_terms_x(p, sample_disorder(p, 2, 0)));
  const ChebyshevPropagator cheb(op);
  const auto psi0 = random_state(8, 3);
  StateVector a = psi0, b = psi0;
  cheb.step(a, 1.3);
  cheb.step(a, 2.1);
  cheb.step(b, 3.4);
  CHECK(distance(a, b) < 1e-8);
  const DensePropagator dense(*op);
  CHECK(distance(dense.evolve(dense.evolve(psi0, 1.3), 2.1), dense.evolve(psi0, 3.4)) < 1e-8);
  StateVector c = psi0;
  CHECK(cheb.step(c, 0.0) == 0.0);
  CHECK(distance(c, psi0) == 0.0);
  CHECK_THROWS(cheb.step(c, -1.0));
}

TEST_CASE("propagator selection") {
  ModelParams p;
  p.sites = 10;
  auto op = std::make_shared<const SparseOperator>(build_v_terms(p, Axis::X));
  CHECK(make_propagator(op, PropagatorChoice::Auto)->kind() == PropagatorKind::Dense);
  CHECK(make_propagator(op, PropagatorChoice::Chebyshev)->kind() == PropagatorKind::Chebyshev);
  p.sites = 11;
  op = std::make_shared<const SparseOperator>(build_v_terms(p, Axis::X));
  CHECK(make_propagator(op, PropagatorChoice::Auto)->kind() == PropagatorKind::Chebyshev);
  p.sites = 13;
  op = std::make_shared<const SparseOperator>(build_v_terms(p, Axis::X));
  CHECK_THROWS_AS(make_propagator(op, PropagatorChoice::Dense), std::length_error);
  CHECK_THROWS(ChebyshevPropagator(op, 1e-13));
}
