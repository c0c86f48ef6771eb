#include "shieldsim/hamiltonian.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "shieldsim/rng.hpp"

namespace shieldsim {

void ModelParams::validate() const {
  if (sites < 2 || sites > kMaxSites) {
    throw std::invalid_argument("L must lie in [2, 30], got " + std::to_string(sites));
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(field) || !finite(disorder_width) || !finite(coupling) || !finite(zz_coupling) ||
      !finite(alpha)) {
    throw std::invalid_argument("model parameters must be finite");
  }
  if (disorder_width < 0.0) throw std::invalid_argument("W must be >= 0");
  if (zz_coupling < 0.0) throw std::invalid_argument("Jz must be >= 0");
  if (alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
}

DisorderRealization sample_disorder(const ModelParams& params, std::uint64_t seed,
                                    std::uint64_t realization_index) {
  if (!(params.disorder_width >= 0.0)) throw std::invalid_argument("W must be >= 0");
  DisorderRealization r;
  r.seed = seed;
  r.index = realization_index;
  r.fields.assign(params.sites, 0.0);
  if (params.disorder_width == 0.0) return r;
  CounterRng rng(seed, realization_index, StreamPurpose::Disorder);
  const double half = 0.5 * params.disorder_width;
  for (auto& h : r.fields) h = rng.uniform(-half, half);
  return r;
}

DisorderRealization clean_realization(int sites) {
  DisorderRealization r;
  r.fields.assign(sites, 0.0);
  return r;
}

const char* term_kind_name(TermKind kind) {
  switch (kind) {
    case TermKind::ZField: return "Zfield";
    case TermKind::ZZNearest: return "ZZ_nn";
    case TermKind::XXPair: return "XX_nm";
    case TermKind::XDiag: return "Xdiag";
    case TermKind::XFlip: return "XFlip";
    case TermKind::XXFlipPair: return "XXFlipPair";
    case TermKind::MxSquared: return "MxSquared";
    case TermKind::Constant: return "Constant";
  }
  return "?";
}

namespace {

bool z_basis_kind(TermKind k) {
  return k == TermKind::ZField || k == TermKind::ZZNearest || k == TermKind::XXPair;
}
bool x_basis_kind(TermKind k) {
  return k == TermKind::XDiag || k == TermKind::XFlip || k == TermKind::XXFlipPair;
}

void check_realization(const ModelParams& params, const DisorderRealization& r) {
  params.validate();
  if (static_cast<int>(r.fields.size()) != params.sites) {
    throw std::invalid_argument("disorder realization length differs from L");
  }
}

double pair_coefficient(const ModelParams& p, int n, int m) {
  return p.coupling / std::pow(static_cast<double>(m - n), p.alpha);
}

void append_v(const ModelParams& p, TermKind kind, std::vector<Term>& out) {
  if (p.coupling == 0.0) return;
  for (int n = 0; n < p.sites; ++n) {
    for (int m = n + 1; m < p.sites; ++m) out.push_back({kind, pair_coefficient(p, n, m), n, m});
  }
}

// +1 if bit set, -1 otherwise.
inline double spin(std::uint64_t index, int site) {
  return ((index >> site) & 1u) ? 1.0 : -1.0;
}

}  // namespace

void TermList::validate() const {
  if (sites < 1 || sites > kMaxSites) throw std::invalid_argument("TermList has invalid L");
  for (const auto& t : terms) {
    if (!std::isfinite(t.coefficient)) throw std::invalid_argument("non-finite term coefficient");
    if ((axis == Axis::Z && x_basis_kind(t.kind)) || (axis == Axis::X && z_basis_kind(t.kind))) {
      throw std::invalid_argument(std::string("term kind ") + term_kind_name(t.kind) +
                                  " does not belong to the " + axis_name(axis) + " basis");
    }
    const bool one_site = t.kind == TermKind::ZField || t.kind == TermKind::XFlip;
    const bool two_site = t.kind == TermKind::ZZNearest || t.kind == TermKind::XXPair ||
                          t.kind == TermKind::XDiag || t.kind == TermKind::XXFlipPair;
    if (one_site && (t.site_a < 0 || t.site_a >= sites)) {
      throw std::invalid_argument("term site out of range");
    }
    if (two_site && (t.site_a < 0 || t.site_b >= sites || t.site_a >= t.site_b)) {
      throw std::invalid_argument("pair term needs 0 <= n < m < L");
    }
    if ((t.kind == TermKind::ZZNearest || t.kind == TermKind::XXFlipPair) &&
        t.site_b != t.site_a + 1) {
      throw std::invalid_argument("nearest-neighbour term on non-adjacent sites");
    }
  }
}

TermList build_terms(const ModelParams& params, const DisorderRealization& realization) {
  check_realization(params, realization);
  TermList list{params.sites, Axis::Z, {}};
  for (int n = 0; n < params.sites; ++n) {
    const double c = params.field + realization.fields[n];
    if (c != 0.0) list.terms.push_back({TermKind::ZField, c, n});
  }
  if (params.zz_coupling != 0.0) {
    for (int n = 0; n + 1 < params.sites; ++n) {
      list.terms.push_back({TermKind::ZZNearest, params.zz_coupling, n, n + 1});
    }
  }
  append_v(params, TermKind::XXPair, list.terms);
  return list;
}

TermList build_terms_x(const ModelParams& params, const DisorderRealization& realization) {
  check_realization(params, realization);
  TermList list{params.sites, Axis::X, {}};
  append_v(params, TermKind::XDiag, list.terms);
  for (int n = 0; n < params.sites; ++n) {
    const double c = params.field + realization.fields[n];
    if (c != 0.0) list.terms.push_back({TermKind::XFlip, c, n});
  }
  if (params.zz_coupling != 0.0) {
    for (int n = 0; n + 1 < params.sites; ++n) {
      list.terms.push_back({TermKind::XXFlipPair, params.zz_coupling, n, n + 1});
    }
  }
  return list;
}

TermList build_mx_form(const ModelParams& params, const DisorderRealization& realization) {
  check_realization(params, realization);
  if (params.alpha != 0.0) {
    throw std::invalid_argument("the collective Mx form requires alpha = 0");
  }
  TermList list{params.sites, Axis::Z, {}};
  for (int n = 0; n < params.sites; ++n) {
    const double c = params.field + realization.fields[n];
    if (c != 0.0) list.terms.push_back({TermKind::ZField, c, n});
  }
  if (params.zz_coupling != 0.0) {
    for (int n = 0; n + 1 < params.sites; ++n) {
      list.terms.push_back({TermKind::ZZNearest, params.zz_coupling, n, n + 1});
    }
  }
  list.terms.push_back({TermKind::MxSquared, 2.0 * params.coupling});
  list.terms.push_back({TermKind::Constant, -0.5 * params.coupling * params.sites});
  return list;
}

TermList build_v_terms(const ModelParams& params, Axis axis) {
  params.validate();
  TermList list{params.sites, axis, {}};
  append_v(params, axis == Axis::Z ? TermKind::XXPair : TermKind::XDiag, list.terms);
  return list;
}

SparseOperator::SparseOperator(const TermList& terms) : sites_(terms.sites), axis_(terms.axis) {
  terms.validate();
  const std::size_t dim = std::size_t{1} << sites_;
  diagonal_.assign(dim, 0.0);
  std::map<std::uint32_t, double> flips;

  for (const auto& t : terms.terms) {
    const double c = t.coefficient;
    switch (t.kind) {
      case TermKind::ZField:
        for (std::size_t i = 0; i < dim; ++i) diagonal_[i] += c * spin(i, t.site_a);
        break;
      case TermKind::ZZNearest:
      case TermKind::XDiag:
        for (std::size_t i = 0; i < dim; ++i) {
          diagonal_[i] += c * spin(i, t.site_a) * spin(i, t.site_b);
        }
        break;
      case TermKind::XXPair:
        flips[(1u << t.site_a) | (1u << t.site_b)] += c;
        break;
      case TermKind::XFlip:
        // sz|+x> = -|-x> and sz|-x> = -|+x> in the basis_rotate phase convention.
        flips[1u << t.site_a] += -c;
        break;
      case TermKind::XXFlipPair:
        flips[(1u << t.site_a) | (1u << t.site_b)] += c;
        break;
      case TermKind::MxSquared:
        if (axis_ == Axis::X) {
          for (std::size_t i = 0; i < dim; ++i) {
            const double mx = std::popcount(i) - 0.5 * sites_;
            diagonal_[i] += c * mx * mx;
          }
        } else {
          mx_squared_ += c;
        }
        break;
      case TermKind::Constant:
        for (auto& d : diagonal_) d += c;
        break;
    }
  }
  for (const auto& [mask, element] : flips) {
    if (element != 0.0) flips_.push_back({mask, element});
  }
}

SparseOperator SparseOperator::restricted_to_bands() const {
  if (axis_ != Axis::X) throw std::invalid_argument("band restriction needs an x-basis operator");
  SparseOperator out = *this;
  const std::size_t dim = dimension();
  out.band_.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) out.band_[i] = static_cast<std::uint8_t>(band_of_index(i, sites_));
  // Drop flips that never connect two members of the same band.
  std::vector<FlipTerm> kept;
  for (const auto& f : flips_) {
    bool any = false;
    for (std::size_t i = 0; i < dim && !any; ++i) any = out.band_[i] == out.band_[i ^ f.mask];
    if (any) kept.push_back(f);
  }
  out.flips_ = std::move(kept);
  return out;
}

double SparseOperator::offdiagonal_radius() const {
  double r = 0.0;
  for (const auto& f : flips_) r += std::abs(f.element);
  if (mx_squared_ != 0.0) r += std::abs(mx_squared_) * 0.25 * sites_ * sites_;
  return r;
}

void SparseOperator::apply(std::span<const cplx> in, std::span<cplx> out) const {
  const std::size_t dim = dimension();
  if (in.size() != dim || out.size() != dim) {
    throw std::invalid_argument("vector length does not match operator dimension");
  }
  for (std::size_t i = 0; i < dim; ++i) out[i] = diagonal_[i] * in[i];
  if (band_.empty()) {
    for (const auto& f : flips_) {
      const double e = f.element;
      const std::size_t mask = f.mask;
      for (std::size_t i = 0; i < dim; ++i) out[i] += e * in[i ^ mask];
    }
  } else {
    for (const auto& f : flips_) {
      const double e = f.element;
      const std::size_t mask = f.mask;
      for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t j = i ^ mask;
        if (band_[i] == band_[j]) out[i] += e * in[j];
      }
    }
  }
  if (mx_squared_ != 0.0) {
    StateVector tmp(sites_, Axis::Z, std::vector<cplx>(in.begin(), in.end()));
    StateVector x = basis_rotate(tmp, Axis::X);
    for (std::size_t i = 0; i < dim; ++i) {
      const double mx = std::popcount(i) - 0.5 * sites_;
      x[i] *= mx * mx;
    }
    StateVector back = basis_rotate(x, Axis::Z);
    for (std::size_t i = 0; i < dim; ++i) out[i] += mx_squared_ * back[i];
  }
}

StateVector SparseOperator::apply(const StateVector& psi) const {
  if (psi.axis() != axis_ || psi.sites() != sites_) {
    throw std::invalid_argument("operator and state differ in basis or site count");
  }
  StateVector out(sites_, axis_);
  apply(psi.amplitudes(), out.amplitudes());
  return out;
}

double SparseOperator::expectation(const StateVector& psi) const {
  return inner(psi, apply(psi)).real();
}

Eigen::MatrixXd SparseOperator::to_dense() const {
  if (sites_ > kDenseSiteLimit) {
    throw std::length_error("dense matrices are limited to L <= " +
                            std::to_string(kDenseSiteLimit));
  }
  const Eigen::Index dim = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) m(i, i) = diagonal_[i];
  for (const auto& f : flips_) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      const Eigen::Index j = i ^ static_cast<Eigen::Index>(f.mask);
      if (band_.empty() || band_[i] == band_[j]) m(i, j) += f.element;
    }
  }
  if (mx_squared_ != 0.0) {
    // Collective term: build columns from the rotated action.
    SparseOperator collective;
    collective.sites_ = sites_;
    collective.axis_ = axis_;
    collective.diagonal_.assign(dimension(), 0.0);
    collective.mx_squared_ = mx_squared_;
    std::vector<cplx> e(dimension()), col(dimension());
    for (Eigen::Index c = 0; c < dim; ++c) {
      std::fill(e.begin(), e.end(), cplx{});
      e[c] = 1.0;
      collective.apply(e, col);
      for (Eigen::Index r = 0; r < dim; ++r) m(r, c) += col[r].real();
    }
  }
  return m;
}

StateVector matvec(const TermList& terms, const StateVector& psi) {
  if (terms.axis != psi.axis()) throw std::invalid_argument("term list and state use different bases");
  if (terms.sites != psi.sites()) throw std::invalid_argument("term list and state differ in L");
  return SparseOperator(terms).apply(psi);
}

Eigen::MatrixXd dense_matrix(const TermList& terms) {
  if (terms.sites > kDenseSiteLimit) {
    throw std::length_error("dense matrices are limited to L <= " +
                            std::to_string(kDenseSiteLimit));
  }
  return SparseOperator(terms).to_dense();
}

Eigen::MatrixXd dense_matrix(const SparseOperator& op) { return op.to_dense(); }

}  // namespace shieldsim
