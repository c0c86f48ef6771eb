#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "shieldsim/basis.hpp"

namespace shieldsim {

/// Parameters of the chain
///   H = sum_n (B + h_n) sz_n + Jz sum_n sz_n sz_{n+1} + sum_{n<m} J/|n-m|^alpha sx_n sx_m
/// with open boundaries and hbar = 1. V (the last sum) is not rescaled by L.
struct ModelParams {
  int sites = 2;
  double field = 0.0;           // B
  double disorder_width = 0.0;  // W, h_n uniform in [-W/2, W/2]
  double coupling = 1.0;        // J
  double zz_coupling = 0.0;     // Jz
  double alpha = 0.0;

  void validate() const;
};

struct DisorderRealization {
  std::vector<double> fields;  // h_n, site 1 first
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
};

/// Draws h_n uniformly on [-W/2, W/2] from the (seed, index) disorder stream.
DisorderRealization sample_disorder(const ModelParams& params, std::uint64_t seed,
                                    std::uint64_t realization_index);

/// Realization with every h_n = 0, for clean runs.
DisorderRealization clean_realization(int sites);

enum class TermKind : std::uint8_t {
  ZField,       // c sz_n                      (z basis, diagonal)
  ZZNearest,    // c sz_n sz_{n+1}             (z basis, diagonal)
  XXPair,       // c sx_n sx_m                 (z basis, double flip)
  XDiag,        // c sx_n sx_m                 (x basis, diagonal)
  XFlip,        // c sz_n                      (x basis, single flip)
  XXFlipPair,   // c sz_n sz_{n+1}             (x basis, adjacent double flip)
  MxSquared,    // c Mx^2, Mx = sum_n sx_n / 2 (either basis)
  Constant,     // c * identity
};

const char* term_kind_name(TermKind kind);

struct Term {
  TermKind kind;
  double coefficient;
  int site_a = -1;
  int site_b = -1;
};

struct TermList {
  int sites = 0;
  Axis axis = Axis::Z;
  std::vector<Term> terms;

  /// Throws if a term does not belong to this basis or has bad sites.
  void validate() const;
};

/// Terms in the z basis: field, zz and all L(L-1)/2 long-range xx pairs.
/// Zero-coefficient terms are omitted.
TermList build_terms(const ModelParams& params, const DisorderRealization& realization);

/// The same operator in the x basis: V diagonal, fields as single flips,
/// zz bonds as adjacent double flips. Under the phase convention of
/// basis_rotate a field flip has matrix element -(B + h_n) and a zz double
/// flip has element +Jz.
TermList build_terms_x(const ModelParams& params, const DisorderRealization& realization);

/// Collective form valid at alpha = 0:
///   sum (B+h_n) sz_n + Jz sum sz_n sz_{n+1} + 2J Mx^2 - JL/2   (z basis).
TermList build_mx_form(const ModelParams& params, const DisorderRealization& realization);

/// Only the long-range part V, in the requested basis.
TermList build_v_terms(const ModelParams& params, Axis axis);

struct FlipTerm {
  std::uint32_t mask;
  double element;
};

/// Matrix-free realization of a TermList: a precomputed diagonal plus
/// constant-element bit-flip terms. An optional band filter drops every
/// flip that connects different x-excitation bands, which realizes
/// sum_b P_b H P_b without storing projectors.
class SparseOperator {
 public:
  explicit SparseOperator(const TermList& terms);

  int sites() const { return sites_; }
  Axis axis() const { return axis_; }
  std::size_t dimension() const { return diagonal_.size(); }
  const std::vector<double>& diagonal() const { return diagonal_; }
  const std::vector<FlipTerm>& flips() const { return flips_; }
  bool band_restricted() const { return !band_.empty(); }

  /// Copy of this operator with inter-band flips removed. X basis only.
  SparseOperator restricted_to_bands() const;

  /// Gershgorin radius: sum of |flip elements|.
  double offdiagonal_radius() const;

  void apply(std::span<const cplx> in, std::span<cplx> out) const;
  StateVector apply(const StateVector& psi) const;

  /// Real part of <psi|H|psi>.
  double expectation(const StateVector& psi) const;

  Eigen::MatrixXd to_dense() const;

 private:
  SparseOperator() = default;

  int sites_ = 0;
  Axis axis_ = Axis::Z;
  std::vector<double> diagonal_;
  std::vector<FlipTerm> flips_;
  double mx_squared_ = 0.0;  // collective term handled by rotation (z basis only)
  std::vector<std::uint8_t> band_;
};

/// H psi without forming H. Throws on basis or size mismatch.
StateVector matvec(const TermList& terms, const StateVector& psi);

inline constexpr int kDenseSiteLimit = 12;

Eigen::MatrixXd dense_matrix(const TermList& terms);
Eigen::MatrixXd dense_matrix(const SparseOperator& op);

}  // namespace shieldsim
