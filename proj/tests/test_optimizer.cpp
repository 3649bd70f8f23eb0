#include <cmath>

#include <gtest/gtest.h>

#include "metrolab/metrology.hpp"
#include "metrolab/operators.hpp"
#include "metrolab/optimizer.hpp"
#include "metrolab/probes.hpp"
#include "test_support.hpp"

using namespace metrolab;
using metrolab::testing::kPi;
using metrolab::testing::Random;

namespace {

constexpr std::size_t kPair[] = {0, 1};

double top_eigenvalue(const Eigen::MatrixXd& cov) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(cov).eigenvalues().maxCoeff();
}

PureState random_probe(Random& rng, std::uint32_t n) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(FockBasis(4, n).dim()));
  FockBasis basis(4, n);
  for (std::size_t k = basis.sector_begin(n); k < basis.sector_end(n); ++k)
    if (basis.occupation(k, 3) == 0) v[static_cast<Eigen::Index>(k)] = Complex(rng.normal(), rng.normal());
  return PureState::normalized(basis, v);
}

}  // namespace

TEST(OptimalZeta, CorrelatedStatesGivePiOverFour) {
  Random rng(1);
  for (std::uint32_t n : {2u, 5u, 8u, 11u}) {
    auto psi = correlated_three_mode(rng.coeffs(n / 2 + 1), n);
    auto r = optimal_zeta(psi);
    EXPECT_NEAR(r.zeta_opt, kPi / 4, 1e-10);
    EXPECT_LE(std::abs(r.var_perp), 1e-10);
    EXPECT_FALSE(r.degenerate);
  }
}

TEST(OptimalZeta, FockProductIsDegenerate) {
  auto psi = PureState::fock(FockBasis(3, 6), {2, 3, 1});
  auto r = optimal_zeta(psi);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.zeta_opt, 0.0);
  EXPECT_NEAR(r.var_max, 0.0, 1e-15);
  EXPECT_THROW(optimal_zeta(coherent_truncated(1.0, 30)), std::invalid_argument);
}

TEST(OptimalZeta, AntiCorrelatedGivesDifferenceMode) {
  Random rng(2);
  for (std::uint32_t n : {3u, 6u, 10u}) {
    auto psi = two_mode_ssrc(rng.coeffs(n + 1), n);
    auto r = optimal_zeta(psi);
    EXPECT_NEAR(r.zeta_opt, 3 * kPi / 4, 1e-10);
    EXPECT_LE(std::abs(r.var_perp), 1e-10);
    EXPECT_NEAR(r.var_max, 2 * variance(psi, number_op(psi.basis(), 0)), 1e-10);
  }
}

TEST(OptimalZeta, InvariantsOnRandomStates) {
  Random rng(3);
  FockBasis basis(3, 4);
  for (int t = 0; t < 50; ++t) {
    auto psi = rng.state(basis);
    auto r = optimal_zeta(psi);
    EXPECT_GE(r.var_max, r.var_perp);
    EXPECT_GE(r.var_perp, -1e-10);
    EXPECT_GE(r.zeta_opt, 0.0);
    EXPECT_LT(r.zeta_opt, kPi);
    const double v0 = variance(psi, number_op(basis, 0)), v1 = variance(psi, number_op(basis, 1));
    EXPECT_NEAR(r.var_max + r.var_perp, v0 + v1, 1e-10);
    EXPECT_NEAR(r.var_max, top_eigenvalue(number_covariance(psi, kPair)), 1e-10);
    auto [nz, np] = weighted_number(basis, r.zeta_opt);
    EXPECT_NEAR(variance(psi, nz), r.var_max, 1e-10);
    EXPECT_NEAR(variance(psi, np), r.var_perp, 1e-10);
    auto rm = optimal_zeta(MixedState::from_pure(psi));
    EXPECT_NEAR(rm.var_max, r.var_max, 1e-10);
  }
}

TEST(OptimalZeta, DenseSweepNeverExceedsOptimum) {
  Random rng(4);
  FockBasis basis(2, 5);
  std::vector<double> grid(1000);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = kPi * static_cast<double>(k) / grid.size();
  for (int t = 0; t < 5; ++t) {
    auto rho = rng.mixed(basis, 3);
    auto r = optimal_zeta(rho);
    for (const auto& s : sweep_qfi_vs_zeta(rho, grid)) EXPECT_LE(s.qfi, 4 * r.var_max + 1e-8);
  }
}

TEST(SumRule, HoldsForRandomStatesAndAngles) {
  Random rng(5);
  FockBasis basis(3, 4);
  for (int t = 0; t < 1000; ++t) {
    auto psi = rng.state(basis);
    const double zeta = rng.uniform(-kPi, kPi);
    auto [nz, np] = weighted_number(basis, zeta);
    const double lhs = variance(psi, number_op(basis, 0)) + variance(psi, number_op(basis, 1));
    EXPECT_NEAR(lhs, variance(psi, nz) + variance(psi, np), 1e-10);
  }
}

TEST(OptimalWeights, ReducesToZetaForTwoModes) {
  Random rng(6);
  FockBasis basis(3, 4);
  for (int t = 0; t < 20; ++t) {
    auto psi = rng.state(basis);
    auto z = optimal_zeta(psi);
    auto w = optimal_weights(psi, kPair);
    ASSERT_EQ(w.weights.size(), 2);
    EXPECT_NEAR(w.var_max, z.var_max, 1e-10);
    EXPECT_NEAR(w.weights[0], std::cos(z.zeta_opt), 1e-8);
    EXPECT_NEAR(w.weights[1], std::sin(z.zeta_opt), 1e-8);
  }
}

TEST(OptimalWeights, ThreeModeTopEigenvector) {
  Random rng(7);
  FockBasis basis(3, 4);
  constexpr std::size_t modes[] = {0, 1, 2};
  for (int t = 0; t < 20; ++t) {
    auto psi = rng.state(basis);
    auto w = optimal_weights(psi, modes);
    EXPECT_NEAR(w.weights.norm(), 1.0, 1e-12);
    std::vector<double> weights(w.weights.data(), w.weights.data() + 3);
    EXPECT_NEAR(variance(psi, weighted_number(basis, weights, modes)), w.var_max, 1e-10);
    EXPECT_NEAR(w.var_max, top_eigenvalue(w.cov), 1e-12);
    // No random direction does better.
    for (int s = 0; s < 20; ++s) {
      Eigen::Vector3d d(rng.normal(), rng.normal(), rng.normal());
      d.normalize();
      std::vector<double> dw(d.data(), d.data() + 3);
      EXPECT_LE(variance(psi, weighted_number(basis, dw, modes)), w.var_max + 1e-10);
    }
  }
}

TEST(ParameterMap, Examples) {
  EXPECT_NEAR(estimated_parameter_map(kPi / 4, 0.3, 0.3), 0.6 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(estimated_parameter_map(0.0, 0.7, 0.0), 0.7, 1e-15);
  EXPECT_NEAR(estimated_parameter_map(kPi / 2, 0.0, 0.4), 0.4, 1e-15);
  EXPECT_THROW(estimated_parameter_map(0.0, 0.7, 0.1), std::invalid_argument);
  // Consistency with the generator identity theta n_zeta = t13 n_0 + t23 n_1.
  FockBasis basis(2, 3);
  const double zeta = 0.9, theta = 1.3;
  const double t13 = theta * std::cos(zeta), t23 = theta * std::sin(zeta);
  EXPECT_NEAR(estimated_parameter_map(zeta, t13, t23), theta, 1e-12);
  auto [nz, np] = weighted_number(basis, zeta);
  Matrix lhs = theta * nz.matrix();
  Matrix rhs = t13 * number_op(basis, 0).matrix() + t23 * number_op(basis, 1).matrix();
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(LossyProbe, IdentityCouplingKeepsPurity) {
  Random rng(8);
  auto psi = random_probe(rng, 4);
  auto rho = lossy_probe(psi, 1, 0.0);
  EXPECT_NEAR(rho.purity(), 1.0, 1e-10);
  EXPECT_EQ(rho.basis(), FockBasis(3, 4));
}

TEST(LossyProbe, FullTransferEmptiesMode) {
  const std::uint32_t n = 4;
  Matrix c = Matrix::Zero(n + 1, n + 1);
  c(1, 0) = 1.0;
  auto psi = general_probe(TwoIndexCoeffs(n, c), {});
  auto rho = lossy_probe(psi, 0, kPi);
  const auto k = static_cast<Eigen::Index>(rho.basis().rank(OccupationVector{0, 0, n - 1}));
  EXPECT_NEAR(rho.matrix()(k, k).real(), 1.0, 1e-12);
  EXPECT_NEAR(rho.purity(), 1.0, 1e-12);
}

TEST(LossyProbe, NoonQfiDecreasesOverQuarterTurn) {
  const std::uint32_t n = 4;
  Matrix c = Matrix::Zero(n + 1, n + 1);
  c(0, 0) = c(n, 0) = 1 / std::sqrt(2.0);
  auto psi = general_probe(TwoIndexCoeffs(n, c), {});
  auto gen = schwinger_J(FockBasis(3, n), PairAxis::z(0, 2));
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 4; ++k) {
    const double q = qfi_mixed(lossy_probe(psi, 0, k * kPi / 8), gen).qfi;
    EXPECT_LE(q, previous + 1e-8);
    previous = q;
  }
}

TEST(LossyProbe, ValidMixedStatesOnRandomInputs) {
  Random rng(9);
  for (int t = 0; t < 100; ++t) {
    auto psi = random_probe(rng, static_cast<std::uint32_t>(rng.integer(1, 4)));
    const auto mode = static_cast<std::size_t>(rng.integer(0, 2));
    auto rho = lossy_probe(psi, mode, rng.uniform(0, 2 * kPi));
    EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
    EXPECT_LT(hermiticity_defect(rho.matrix()), 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
  }
}

TEST(LossyProbe, MatchesExplicitUnitaryAndTrace) {
  Random rng(10);
  auto psi = random_probe(rng, 3);
  std::vector<LossCoupling> couplings{{0, 0.7}, {2, 1.9, 0.4, 2.2}};
  auto rho = lossy_probe(psi, couplings);
  auto global = apply(rotation_unitary(psi.basis(), PairAxis(2, 3, 0.4, 2.2), 1.9) *
                          rotation_unitary(psi.basis(), PairAxis::x(0, 3), 0.7),
                      psi);
  constexpr std::size_t keep[] = {0, 1, 2};
  EXPECT_LT((partial_trace(global, keep).matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LossyProbe, RejectsWrongArity) {
  EXPECT_THROW(lossy_probe(noon(2), 0, 0.1), std::invalid_argument);
  Random rng(11);
  EXPECT_THROW(lossy_probe(random_probe(rng, 2), 3, 0.1), std::invalid_argument);
}

TEST(Sweep, Examples) {
  Random rng(12);
  const std::uint32_t n = 8;
  auto psi = correlated_three_mode(rng.coeffs(n / 2 + 1), n);
  std::vector<double> grid(181);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = kPi * static_cast<double>(k) / 180.0;
  auto rows = sweep_qfi_vs_zeta(psi, grid);
  ASSERT_EQ(rows.size(), grid.size());
  std::size_t best = 0;
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (rows[k].qfi > rows[best].qfi) best = k;
  EXPECT_NEAR(rows[best].zeta, kPi / 4, 1e-12);
  const double total = rows[0].var_zeta + rows[0].var_perp;
  for (const auto& r : rows) {
    EXPECT_NEAR(r.var_zeta + r.var_perp, total, 1e-10);
    EXPECT_NEAR(r.qfi, 4 * r.var_zeta, 1e-12);
  }
  constexpr double zero[] = {0.0};
  auto single = sweep_qfi_vs_zeta(psi, zero);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_NEAR(single[0].qfi, 4 * variance(psi, number_op(psi.basis(), 0)), 1e-12);
}
