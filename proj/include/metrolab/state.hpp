#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "metrolab/fock_basis.hpp"
#include "metrolab/types.hpp"

namespace metrolab {

// Normalized amplitude vector over a FockBasis.
class PureState {
 public:
  // `amplitudes` must already have unit norm within tol::kInputNorm; the
  // stored vector is rescaled to unit norm exactly.
  PureState(FockBasis basis, Vector amplitudes);

  // Rescales any non-zero vector to unit norm.
  static PureState normalized(FockBasis basis, Vector amplitudes);
  // Single occupation-number ket.
  static PureState fock(FockBasis basis, std::span<const std::uint32_t> occ);
  static PureState fock(FockBasis basis, std::initializer_list<std::uint32_t> occ) {
    return fock(std::move(basis), std::span<const std::uint32_t>(occ.begin(), occ.size()));
  }

  const FockBasis& basis() const { return basis_; }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::span<const std::uint32_t> occ) const { return amplitudes_[basis_.rank(occ)]; }

  // Probability mass in each total-photon sector, index = sector.
  std::vector<double> sector_weights() const;

 private:
  FockBasis basis_;
  Vector amplitudes_;
};

// Hermitian, positive-semidefinite, unit-trace density matrix.
class MixedState {
 public:
  // Validates Hermiticity, trace and spectrum (eigenvalues >= -1e-10).
  MixedState(FockBasis basis, Matrix matrix);

  static MixedState from_pure(const PureState& psi);
  static MixedState maximally_mixed(FockBasis basis);

  const FockBasis& basis() const { return basis_; }
  const Matrix& matrix() const { return matrix_; }

  double purity() const;
  std::vector<double> sector_weights() const;

 private:
  struct Trusted {};
  MixedState(FockBasis basis, Matrix matrix, Trusted);

  friend MixedState partial_trace(const MixedState&, std::span<const std::size_t>);
  friend MixedState partial_trace(const PureState&, std::span<const std::size_t>);
  friend MixedState tensor_product(const MixedState&, const MixedState&);

  FockBasis basis_;
  Matrix matrix_;
};

double fidelity(const PureState& a, const PureState& b);
double fidelity(const PureState& a, const MixedState& b);
double fidelity(const MixedState& a, const PureState& b);
// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2.
double fidelity(const MixedState& a, const MixedState& b);

// Reduced state on the modes listed in `keep` (0-based, any order; the
// reduced basis lists them in ascending order). The reduced basis keeps the
// original photon cutoff.
MixedState partial_trace(const PureState& state, std::span<const std::size_t> keep);
MixedState partial_trace(const MixedState& state, std::span<const std::size_t> keep);

// Modes of `a` first, then modes of `b`; cutoff is the sum of both cutoffs.
PureState tensor_product(const PureState& a, const PureState& b);
MixedState tensor_product(const MixedState& a, const MixedState& b);

// Same modes, larger photon cutoff, zero amplitude in the new sectors.
PureState extend_cutoff(const PureState& state, std::uint32_t n_total);
MixedState extend_cutoff(const MixedState& state, std::uint32_t n_total);

// Mass in the top two sectors (total >= N_total - 1). Operators that leave the
// number-conserving subspace, such as quadratures, are exact only when this is
// negligible.
double boundary_mass(const PureState& state);
double boundary_mass(const MixedState& state);

// Throws NumericError when boundary_mass exceeds `limit`.
void require_small_boundary_mass(double mass, double limit, const char* context);

}  // namespace metrolab
