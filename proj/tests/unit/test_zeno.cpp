#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracle.hpp"
#include "shieldsim/bands.hpp"
#include "shieldsim/zeno.hpp"

using namespace shieldsim;

namespace {

// sum_b P_b H P_b from the dense x-basis matrix and explicit index sets.
Eigen::MatrixXd projected(const Eigen::MatrixXd& h, int L) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(h.rows(), h.cols());
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = 0; j < h.cols(); ++j) {
      const int ki = L - std::popcount(static_cast<unsigned>(i));
      const int kj = L - std::popcount(static_cast<unsigned>(j));
      if (std::min(ki, L - ki) == std::min(kj, L - kj)) out(i, j) = h(i, j);
    }
  return out;
}

}  // namespace

TEST_CASE("Zeno Hamiltonian equals V when Jz = 0") {
  ModelParams p;
  p.sites = 8;
  p.disorder_width = 2.0;
  const auto h = sample_disorder(p, 1, 0);
  const auto z = build_zeno(p, h, BandTable(8, 1.0, 0.0));
  CHECK(z.diagonal());
  CHECK(z.hops().empty());
  CHECK((z.op().to_dense() - dense_matrix(build_v_terms(p, Axis::X))).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Zeno Hamiltonian is the band projection of H") {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 1.5);
  for (int L : {4, 5, 6, 8, 10}) {
    ModelParams p;
    p.sites = L;
    p.field = u(gen);
    p.disorder_width = u(gen);
    p.zz_coupling = u(gen);
    const auto h = sample_disorder(p, 2, L);
    const auto z = build_zeno(p, h, BandTable(L, 1.0, 0.0));
    const auto hz = z.op().to_dense();
    CHECK((hz - projected(dense_matrix(build_terms_x(p, h)), L)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((hz - hz.transpose()).cwiseAbs().maxCoeff() == 0.0);
    // Block structure: no element connects two bands.
    for (Eigen::Index i = 0; i < hz.rows(); ++i)
      for (Eigen::Index j = 0; j < hz.cols(); ++j)
        if (band_of_index(i, L) != band_of_index(j, L)) CHECK(hz(i, j) == 0.0);
  }
}

TEST_CASE("zz part of H_Z is excitation-conserving adjacent hopping") {
  ModelParams p;
  p.sites = 6;
  p.zz_coupling = 1.0;
  const auto z = build_zeno(p, clean_realization(6), BandTable(6, 1.0, 0.0));
  const auto hz = z.op().to_dense();
  CHECK((hz - projected(dense_matrix(build_terms_x(p, clean_realization(6))), 6)).cwiseAbs().maxCoeff() < 1e-12);
  for (const auto& f : z.hops()) {
    CHECK(std::popcount(f.mask) == 2);
    CHECK((f.mask & (f.mask >> 1)) != 0u);
  }
  for (Eigen::Index i = 0; i < hz.rows(); ++i)
    for (Eigen::Index j = 0; j < hz.cols(); ++j)
      if (i != j && hz(i, j) != 0.0) {
        const int ki = std::popcount(static_cast<unsigned>(i)), kj = std::popcount(static_cast<unsigned>(j));
        // Mirror sectors k and L - k share a band.
        CHECK((ki == kj || ki + kj == 6));
      }
}

TEST_CASE("band 1 of H_Z is a tight-binding chain") {
  for (int L : {6, 8, 10}) {
    ModelParams p;
    p.sites = L;
    p.zz_coupling = 0.8;
    const auto hz = build_zeno(p, clean_realization(L), BandTable(L, 1.0, 0.0)).op().to_dense();
    std::vector<int> sector;
    for (int i = 0; i < (1 << L); ++i)
      if (L - std::popcount(static_cast<unsigned>(i)) == 1) sector.push_back(i);
    Eigen::MatrixXd block(L, L);
    for (int a = 0; a < L; ++a)
      for (int b = 0; b < L; ++b) block(a, b) = hz(sector[a], sector[b]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
    auto expect = oracle::tight_binding(L, 0.8);
    for (auto& e : expect) e += band_energy(L, 1.0, 1);
    std::sort(expect.begin(), expect.end());
    for (int k = 0; k < L; ++k) CHECK(es.eigenvalues()[k] == doctest::Approx(expect[k]).epsilon(1e-12));
  }
}

TEST_CASE("Zeno evolution conserves band weights") {
  ModelParams p;
  p.sites = 8;
  p.zz_coupling = 1.0;
  p.field = 0.5;
  p.disorder_width = 1.0;
  const BandTable t(8, 1.0, 0.0);
  const auto z = build_zeno(p, sample_disorder(p, 1, 1), t);
  for (auto choice : {PropagatorChoice::Dense, PropagatorChoice::Chebyshev}) {
    const auto psi0 = random_band_state(t, 2, std::uint64_t{9});
    const auto res = evolve_zeno(z, psi0, TimeGrid::linear(20.0, 10), choice);
    for (const auto& s : res.states) CHECK(band_weights(t, s)[2] == doctest::Approx(1.0).epsilon(1e-10));
  }

  ModelParams v;
  v.sites = 8;
  v.disorder_width = 2.0;
  const auto zv = build_zeno(v, sample_disorder(v, 1, 1), t);
  const auto psi0 = random_band_state(t, 3, std::uint64_t{2});
  const auto res = evolve_zeno(zv, psi0, TimeGrid::linear(5.0, 5));
  const double e3 = band_energy(8, 1.0, 3);
  for (std::size_t k = 0; k < res.states.size(); ++k) {
    const double tk = 1.0 * k;
    const cplx phase(std::cos(e3 * tk), -std::sin(e3 * tk));
    for (std::size_t i = 0; i < psi0.dimension(); ++i) CHECK(std::abs(res.states[k][i] - phase * psi0[i]) < 1e-12);
  }
}

TEST_CASE("alpha > 0 uses the per-configuration V diagonal") {
  ModelParams p;
  p.sites = 7;
  p.alpha = 0.5;
  p.zz_coupling = 1.0;
  const auto z = build_zeno(p, clean_realization(7), BandTable(7, 1.0, 0.5));
  for (std::uint32_t i = 0; i < 128; ++i) {
    CHECK(z.op().diagonal()[i] == doctest::Approx(v_eigenvalue(SpinConfiguration(i, 7, Axis::X), p)));
  }
}
