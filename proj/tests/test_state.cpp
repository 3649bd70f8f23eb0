#include <cmath>

#include <gtest/gtest.h>

#include "metrolab/operators.hpp"
#include "metrolab/probes.hpp"
#include "metrolab/state.hpp"
#include "test_support.hpp"

using namespace metrolab;
using metrolab::testing::Random;

namespace {

constexpr std::size_t kMode0[] = {0};

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(PureState, ConstructionValidatesNorm) {
  FockBasis basis(2, 1);
  EXPECT_THROW(PureState(basis, Vector::Ones(3)), std::invalid_argument);
  EXPECT_THROW(PureState(basis, Vector::Ones(2)), std::invalid_argument);
  auto psi = PureState::normalized(basis, Vector::Ones(3));
  EXPECT_NEAR(psi.amplitudes().norm(), 1.0, 1e-12);
  EXPECT_THROW(PureState::normalized(basis, Vector::Zero(3)), std::invalid_argument);
}

TEST(PureState, FockKetAndSectorWeights) {
  FockBasis basis(3, 4);
  auto psi = PureState::fock(basis, {1, 2, 0});
  EXPECT_EQ(psi.amplitude(OccupationVector{1, 2, 0}), Complex(1.0, 0.0));
  auto w = psi.sector_weights();
  ASSERT_EQ(w.size(), 5u);
  EXPECT_DOUBLE_EQ(w[3], 1.0);
  EXPECT_DOUBLE_EQ(w[0] + w[1] + w[2] + w[4], 0.0);
}

TEST(Fidelity, PureCases) {
  FockBasis basis(2, 1);
  auto a = PureState::fock(basis, {1, 0});
  auto b = PureState::fock(basis, {0, 1});
  EXPECT_DOUBLE_EQ(fidelity(a, a), 1.0);
  EXPECT_DOUBLE_EQ(fidelity(a, b), 0.0);
  EXPECT_THROW(fidelity(a, PureState::fock(FockBasis(2, 2), {1, 0})), BasisMismatch);
}

TEST(Fidelity, RotatedFockAgainstCoherentOverlapOracle) {
  const int n = 40;
  const double theta = theta_for_amplitude(1.0, n);
  auto fock_image = cv_image(rotated_fock(n, theta, 0.0), 40);
  auto coherent = coherent_truncated(Complex(1.0, 0.0), 40);
  const double f = fidelity(fock_image, coherent);
  EXPECT_NEAR(1.0 - f, metrolab::testing::binomial_poisson_infidelity(n, 1.0, 40), 1e-12);
  EXPECT_GT(f, 0.99);
}

TEST(Fidelity, SymmetricAndPhaseInvariant) {
  Random rng(11);
  FockBasis basis(3, 3);
  for (int t = 0; t < 50; ++t) {
    auto a = rng.state(basis);
    auto b = rng.state(basis);
    EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-14);
    PureState rotated(basis, a.amplitudes() * std::polar(1.0, rng.uniform(0, 6.0)));
    EXPECT_NEAR(fidelity(a, rotated), 1.0, 1e-12);
    EXPECT_LT(fidelity(a, b), 1.0 - 1e-6);
  }
}

TEST(Fidelity, MixedOverloadsAgreeOnPureInputs) {
  Random rng(12);
  FockBasis basis(2, 3);
  for (int t = 0; t < 20; ++t) {
    auto a = rng.state(basis);
    auto b = rng.state(basis);
    const double f = fidelity(a, b);
    auto ra = MixedState::from_pure(a);
    auto rb = MixedState::from_pure(b);
    EXPECT_NEAR(fidelity(ra, b), f, 1e-12);
    EXPECT_NEAR(fidelity(a, rb), f, 1e-12);
    EXPECT_NEAR(fidelity(ra, rb), f, 1e-7);
  }
}

TEST(Fidelity, UhlmannForCommutingStates) {
  FockBasis basis(1, 2);
  Matrix p = Matrix::Zero(3, 3), q = Matrix::Zero(3, 3);
  p.diagonal() << 0.5, 0.3, 0.2;
  q.diagonal() << 0.1, 0.6, 0.3;
  const double expected = std::pow(std::sqrt(0.05) + std::sqrt(0.18) + std::sqrt(0.06), 2);
  EXPECT_NEAR(fidelity(MixedState(basis, p), MixedState(basis, q)), expected, 1e-12);
}

TEST(MixedState, ValidatesInput) {
  FockBasis basis(1, 1);
  Matrix m = Matrix::Identity(2, 2) * 0.5;
  EXPECT_NO_THROW(MixedState(basis, m));
  Matrix bad_trace = Matrix::Identity(2, 2);
  EXPECT_THROW(MixedState(basis, bad_trace), std::invalid_argument);
  Matrix non_herm = m;
  non_herm(0, 1) = 0.1;
  EXPECT_THROW(MixedState(basis, non_herm), std::invalid_argument);
  Matrix negative = Matrix::Zero(2, 2);
  negative.diagonal() << 1.5, -0.5;
  EXPECT_THROW(MixedState(basis, negative), std::invalid_argument);
  EXPECT_THROW(MixedState(basis, Matrix::Identity(3, 3) / 3.0), std::invalid_argument);
}

TEST(MixedState, PurityOfMaximallyMixed) {
  FockBasis basis(2, 2);
  EXPECT_NEAR(MixedState::maximally_mixed(basis).purity(), 1.0 / 6.0, 1e-14);
}

TEST(PartialTrace, ProductFockState) {
  const std::uint32_t n = 4;
  auto psi = PureState::fock(FockBasis(2, n), {n, 0});
  auto rho = partial_trace(psi, kMode0);
  EXPECT_EQ(rho.basis(), FockBasis(1, n));
  Matrix expected = Matrix::Zero(n + 1, n + 1);
  expected(n, n) = 1.0;
  EXPECT_LT(max_abs(rho.matrix() - expected), 1e-14);
}

TEST(PartialTrace, NoonReducesToClassicalMixture) {
  auto rho = partial_trace(noon(3), kMode0);
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = 0.5;
  expected(3, 3) = 0.5;
  EXPECT_LT(max_abs(rho.matrix() - expected), 1e-14);
}

TEST(PartialTrace, CorrelatedStatePurityIsSchmidtSum) {
  Random rng(3);
  for (std::uint32_t n : {2u, 5u, 8u}) {
    auto coeffs = rng.coeffs(n / 2 + 1);
    auto rho = partial_trace(correlated_three_mode(coeffs, n), kMode0);
    double expected = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) expected += std::pow(std::norm(coeffs[k]), 2);
    EXPECT_NEAR(rho.purity(), expected, 1e-12);
  }
}

TEST(PartialTrace, PreservesTraceAndHermiticity) {
  Random rng(5);
  FockBasis basis(3, 4);
  for (int t = 0; t < 100; ++t) {
    auto psi = rng.state(basis);
    std::vector<std::size_t> keep;
    for (std::size_t m = 0; m < 3; ++m)
      if (rng.uniform() < 0.5) keep.push_back(m);
    if (keep.empty() || keep.size() == 3) keep = {static_cast<std::size_t>(rng.integer(0, 2))};
    auto rho = partial_trace(psi, keep);
    EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
    EXPECT_LT(hermiticity_defect(rho.matrix()), 1e-12);
    auto rho2 = partial_trace(MixedState::from_pure(psi), keep);
    EXPECT_LT(max_abs(rho.matrix() - rho2.matrix()), 1e-12);
  }
}

TEST(PartialTrace, RecoversFactorOfProductState) {
  Random rng(6);
  FockBasis ba(2, 2), bb(1, 2);
  for (int t = 0; t < 20; ++t) {
    auto ra = rng.mixed(ba);
    auto rb = rng.mixed(bb);
    auto joint = tensor_product(ra, rb);
    constexpr std::size_t keep_a[] = {0, 1};
    auto back = partial_trace(joint, keep_a);
    ASSERT_EQ(back.basis(), FockBasis(2, 4));
    // ra lives on cutoff 2; the reduced basis keeps cutoff 4.
    auto ra_ext = extend_cutoff(ra, 4);
    EXPECT_LT(max_abs(back.matrix() - ra_ext.matrix()), 1e-12);
    auto pa = rng.state(ba);
    auto pb = rng.state(bb);
    constexpr std::size_t keep_b[] = {2};
    auto back_b = partial_trace(tensor_product(pa, pb), keep_b);
    EXPECT_LT(max_abs(back_b.matrix() - extend_cutoff(MixedState::from_pure(pb), 4).matrix()), 1e-12);
  }
}

TEST(PartialTrace, RejectsBadModeSets) {
  auto psi = noon(2);
  EXPECT_THROW(partial_trace(psi, std::span<const std::size_t>{}), std::invalid_argument);
  constexpr std::size_t out_of_range[] = {2};
  EXPECT_THROW(partial_trace(psi, out_of_range), std::invalid_argument);
  constexpr std::size_t dup[] = {0, 0};
  EXPECT_THROW(partial_trace(psi, dup), std::invalid_argument);
}

TEST(PartialTrace, KeepOrderDoesNotMatter) {
  Random rng(8);
  auto psi = rng.state(FockBasis(3, 3));
  constexpr std::size_t a[] = {0, 2};
  constexpr std::size_t b[] = {2, 0};
  EXPECT_LT(max_abs(partial_trace(psi, a).matrix() - partial_trace(psi, b).matrix()), 1e-15);
}

TEST(BoundaryMass, CountsTopTwoSectors) {
  FockBasis basis(1, 4);
  Vector v = Vector::Zero(5);
  v[0] = std::sqrt(0.5);
  v[3] = std::sqrt(0.3);
  v[4] = std::sqrt(0.2);
  PureState psi(basis, v);
  EXPECT_NEAR(boundary_mass(psi), 0.5, 1e-14);
  EXPECT_NEAR(boundary_mass(MixedState::from_pure(psi)), 0.5, 1e-14);
  EXPECT_THROW(require_small_boundary_mass(0.5, 1e-10, "test"), NumericError);
}
