#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "metrolab/operators.hpp"
#include "metrolab/state.hpp"

namespace metrolab {

struct ZetaResult {
  double zeta_opt = 0.0;  // radians, in [0, pi)
  double var_max = 0.0;   // Var(n_zeta) at the optimum
  double var_perp = 0.0;  // Var(n_zeta_perp) at the optimum
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();  // covariance of (n_0, n_1)
  bool degenerate = false;  // isotropic covariance; every zeta is optimal
};

struct WeightResult {
  RealVector weights;  // unit vector over the requested modes
  double var_max = 0.0;
  Eigen::MatrixXd cov;
  bool degenerate = false;
};

// Covariance matrix of the number operators of `modes`.
Eigen::MatrixXd number_covariance(const PureState& state, std::span<const std::size_t> modes);
Eigen::MatrixXd number_covariance(const MixedState& state, std::span<const std::size_t> modes);

// Weight angle zeta maximizing Var(cos z n_0 + sin z n_1), in closed form
// from the 2x2 number covariance. Ties (isotropic covariance) return zeta = 0
// with `degenerate` set. Throws for fewer than 2 modes.
ZetaResult optimal_zeta(const PureState& state);
ZetaResult optimal_zeta(const MixedState& state);

// Top eigenvector of the K x K number covariance of `modes`. The sign is
// fixed so the last non-zero component is positive; for two modes this gives
// (cos zeta_opt, sin zeta_opt).
WeightResult optimal_weights(const PureState& state, std::span<const std::size_t> modes);
WeightResult optimal_weights(const MixedState& state, std::span<const std::size_t> modes);

// theta such that theta n_zeta = theta13 n_0 + theta23 n_1. Throws
// std::invalid_argument when (theta13, theta23) is not parallel to
// (cos zeta, sin zeta) within 1e-10.
double estimated_parameter_map(double zeta, double theta13, double theta23);

struct LossCoupling {
  std::size_t probe_mode = 0;  // 0, 1 or 2
  double kappa = 0.0;
  double beta = 1.5707963267948966;  // coupling direction, default x
  double phi = 0.0;
};

// Couples probe mode i to the environment (mode 3) through exp(i kappa J_n^{(i,3)})
// and traces the environment out, leaving a 3-mode state.
MixedState lossy_probe(const PureState& state, std::size_t probe_mode, double kappa);
MixedState lossy_probe(const PureState& state, std::span<const LossCoupling> couplings);

struct ZetaSample {
  double zeta = 0.0;
  double qfi = 0.0;       // 4 Var(n_zeta)
  double var_zeta = 0.0;
  double var_perp = 0.0;
};

std::vector<ZetaSample> sweep_qfi_vs_zeta(const PureState& state, std::span<const double> zetas);
std::vector<ZetaSample> sweep_qfi_vs_zeta(const MixedState& state, std::span<const double> zetas);

}  // namespace metrolab
