#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metrolab/operators.hpp"
#include "metrolab/probes.hpp"
#include "metrolab/state.hpp"

namespace metrolab {

struct CramerRao {
  std::uint64_t nu = 1;  // repetitions
  double delta = 0.0;    // 1 / sqrt(nu * qfi)
};

struct QFIReport {
  double qfi = 0.0;
  std::string generator_label;
  std::optional<CramerRao> crb;

  // Copy with the Cramer-Rao bound for `nu` >= 1 repetitions filled in.
  QFIReport with_repetitions(std::uint64_t nu) const;
};

// Outcome set of a measurement. Either a complete family of rank-1
// projectors (stored as orthonormal columns) or general PSD elements.
class Povm {
 public:
  // Columns of `vectors` must form an orthonormal basis of the whole space.
  static Povm projective(FockBasis basis, Matrix vectors);
  // Each element PSD within 1e-10, sum equal to identity within 1e-10.
  static Povm general(FockBasis basis, std::vector<Matrix> elements);

  const FockBasis& basis() const { return basis_; }
  std::size_t size() const;
  bool is_projective() const { return elements_.empty(); }
  Matrix element(std::size_t k) const;
  const Matrix& vectors() const { return vectors_; }
  const std::vector<Matrix>& elements() const { return elements_; }

 private:
  Povm(FockBasis basis, Matrix vectors, std::vector<Matrix> elements)
      : basis_(std::move(basis)), vectors_(std::move(vectors)), elements_(std::move(elements)) {}

  FockBasis basis_;
  Matrix vectors_;
  std::vector<Matrix> elements_;
};

double expectation(const PureState& state, const HermitianOp& op);
double expectation(const MixedState& state, const HermitianOp& op);

// <op^2> - <op>^2. Roundoff down to -1e-10 is clamped to 0; anything more
// negative throws NumericError.
double variance(const PureState& state, const HermitianOp& op);
double variance(const MixedState& state, const HermitianOp& op);

// 4 Var(H) for the family exp(i H kappa)|psi>.
QFIReport qfi_pure(const PureState& state, const HermitianOp& generator);

// Symmetric-logarithmic-derivative spectral formula
//   Q = 2 sum_{k,l: l_k + l_l > floor} |<k|H|l>|^2 (l_k - l_l)^2 / (l_k + l_l)
// over eigenpairs of rho.
QFIReport qfi_mixed(const MixedState& rho, const HermitianOp& generator, double eigenvalue_floor = 1e-12);

// Closed-form Var(J_n) for sum_n c_n |n>_0 |N-n>_1 with
// n = cos(beta) z + sin(beta) cos(phi) x + sin(beta) sin(phi) y.
double analytic_variance_Jn(const CoeffProfile& coeffs, std::uint32_t n_total, double beta, double phi);

// Closed-form Var(J_y) for the same family (beta = phi = pi/2).
double cv_variance_Jy(const CoeffProfile& coeffs, std::uint32_t n_total);

// delta|alpha| >= 1 / sqrt(4 nu Var(p)) for the quadrature of `mode`.
// Throws NumericError when the boundary-sector mass exceeds `tail_limit`.
double displacement_bound(const PureState& state, std::uint64_t nu, std::size_t mode = 0,
                          double tail_limit = tol::kTailMass);
double displacement_bound(const MixedState& state, std::uint64_t nu, std::size_t mode = 0,
                          double tail_limit = tol::kTailMass);

enum class Derivative {
  Central,     // (P(k0 + d) - P(k0 - d)) / 2d
  Richardson,  // (4 D(d/2) - D(d)) / 3
  Analytic,    // Tr[Pi i[H, rho]]
};

struct FisherOptions {
  double step = 1e-5;
  Derivative derivative = Derivative::Central;
  double probability_floor = 1e-12;
};

struct FisherResult {
  double value = 0.0;
  // Set when an outcome below the probability floor still carries a non-zero
  // derivative; value is then +infinity.
  bool divergent = false;
  std::size_t skipped_outcomes = 0;
};

// Classical Fisher information of P_k(x) = Tr[Pi_x U_k rho U_k^dagger],
// U_k = exp(i H k), at k = kappa0.
FisherResult fisher_information(const PureState& state, const HermitianOp& generator, const Povm& povm,
                                double kappa0, const FisherOptions& options = {});
FisherResult fisher_information(const MixedState& state, const HermitianOp& generator, const Povm& povm,
                                double kappa0, const FisherOptions& options = {});

// Projective measurement onto the eigenbasis of the symmetric logarithmic
// derivative of U_{kappa0} rho U_{kappa0}^dagger. Degenerate eigenspaces use
// whatever orthonormal basis the eigensolver returns.
Povm optimal_povm(const PureState& state, const HermitianOp& generator, double kappa0);
Povm optimal_povm(const MixedState& rho, const HermitianOp& generator, double kappa0,
                  double eigenvalue_floor = 1e-12);

}  // namespace metrolab
