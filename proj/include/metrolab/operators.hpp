#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "metrolab/fock_basis.hpp"
#include "metrolab/state.hpp"
#include "metrolab/types.hpp"

namespace metrolab {

// Mode pair (i, j) and the direction
//   n = cos(beta) z + sin(beta) cos(phi) x + sin(beta) sin(phi) y
// of the Schwinger operator J_n^{(i,j)}.
//
// Angles are canonicalized on construction: beta is folded into [0, pi]
// (shifting phi by pi when the fold flips the direction), phi is reduced to
// [0, 2 pi), and phi is set to 0 at the poles where it has no meaning.
struct PairAxis {
  std::size_t i = 0;
  std::size_t j = 1;
  double beta = 0.0;
  double phi = 0.0;

  PairAxis() = default;
  // Throws std::invalid_argument when i == j.
  PairAxis(std::size_t i, std::size_t j, double beta, double phi);

  static PairAxis x(std::size_t i, std::size_t j);
  static PairAxis y(std::size_t i, std::size_t j);
  static PairAxis z(std::size_t i, std::size_t j);

  friend bool operator==(const PairAxis&, const PairAxis&) = default;
};

// Dense operator with no structural guarantee (ladder operators).
struct LinearOp {
  FockBasis basis;
  Matrix matrix;
};

class HermitianOp {
 public:
  // Throws std::invalid_argument when `matrix` is not Hermitian within 1e-12.
  HermitianOp(FockBasis basis, Matrix matrix, std::string label = {});

  const FockBasis& basis() const { return basis_; }
  const Matrix& matrix() const { return matrix_; }
  const std::string& label() const { return label_; }

  HermitianOp scaled(double factor, std::string label = {}) const;
  friend HermitianOp operator+(const HermitianOp& a, const HermitianOp& b);
  friend HermitianOp operator-(const HermitianOp& a, const HermitianOp& b);

  // True when no matrix element connects different total-photon sectors.
  bool conserves_number(double tol = 1e-12) const;

 private:
  FockBasis basis_;
  Matrix matrix_;
  std::string label_;
};

// Number-conserving unitary stored as one dense block per total-photon
// sector; the full matrix is block diagonal in the graded basis ordering.
class UnitaryOp {
 public:
  // Throws NumericError when U^dagger U deviates from identity by more than 1e-10.
  UnitaryOp(FockBasis basis, std::vector<Matrix> sector_blocks);

  static UnitaryOp identity(FockBasis basis);

  const FockBasis& basis() const { return basis_; }
  const std::vector<Matrix>& blocks() const { return blocks_; }
  Matrix matrix() const;
  UnitaryOp adjoint() const;
  double unitarity_defect() const;

  // (a * b) applies b first.
  friend UnitaryOp operator*(const UnitaryOp& a, const UnitaryOp& b);

 private:
  FockBasis basis_;
  std::vector<Matrix> blocks_;
};

PureState apply(const UnitaryOp& u, const PureState& psi);
MixedState apply(const UnitaryOp& u, const MixedState& rho);

// exp(i xi J_n) |psi> and exp(i gamma J_n^2) |psi>, exponentiating only the
// sectors where psi has support.
PureState apply_rotation(const PureState& psi, const PairAxis& pair, double xi);
PureState apply_spin_squeeze(const PureState& psi, const PairAxis& pair, double gamma);

LinearOp annihilation(const FockBasis& basis, std::size_t mode);
LinearOp creation(const FockBasis& basis, std::size_t mode);

HermitianOp number_op(const FockBasis& basis, std::size_t mode);
HermitianOp total_number(const FockBasis& basis, std::span<const std::size_t> modes);

// J_n^{(i,j)} with J_x = (a_i^dag a_j + a_i a_j^dag)/2,
// J_y = i (a_i a_j^dag - a_i^dag a_j)/2, J_z = (n_i - n_j)/2.
HermitianOp schwinger_J(const FockBasis& basis, const PairAxis& pair);

// exp(i xi J_n), exact via per-sector Hermitian eigendecomposition.
UnitaryOp rotation_unitary(const FockBasis& basis, const PairAxis& pair, double xi);
// exp(i gamma J_n^2).
UnitaryOp spin_squeeze_unitary(const FockBasis& basis, const PairAxis& pair, double gamma);

// p = i (a - a^dag) / 2 on the truncated space. Matrix elements that would
// leave the cutoff are dropped, so expectation values involving p are exact
// only for states with negligible boundary_mass(); callers check that.
HermitianOp quadrature_p(const FockBasis& basis, std::size_t mode);

// (n_zeta, n_zeta_perp) = (cos z n_0 + sin z n_1, sin z n_0 - cos z n_1).
// Throws std::invalid_argument for a single-mode basis.
std::pair<HermitianOp, HermitianOp> weighted_number(const FockBasis& basis, double zeta);

// sum_k weights[k] * n_{modes[k]}.
HermitianOp weighted_number(const FockBasis& basis, std::span<const double> weights,
                            std::span<const std::size_t> modes);

// Sub-block of `m` between sectors `row_sector` and `col_sector`.
Matrix sector_block(const FockBasis& basis, const Matrix& m, std::uint32_t row_sector, std::uint32_t col_sector);

}  // namespace metrolab
