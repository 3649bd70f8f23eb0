#pragma once

// Test-only generators and independent oracles. Nothing here calls the
// library routine it is used to check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "metrolab/fock_basis.hpp"
#include "metrolab/probes.hpp"
#include "metrolab/state.hpp"

namespace metrolab::testing {

inline constexpr double kPi = std::numbers::pi;

class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  Vector complex_gaussian(std::size_t n) {
    Vector v(static_cast<Eigen::Index>(n));
    for (auto& c : v) c = Complex(normal(), normal());
    return v;
  }
  CoeffProfile coeffs(std::size_t n) { return CoeffProfile::normalized(complex_gaussian(n)); }
  PureState state(const FockBasis& basis) { return PureState::normalized(basis, complex_gaussian(basis.dim())); }
  // Random state supported on a single total-photon sector.
  PureState sector_state(const FockBasis& basis, std::uint32_t sector) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
    for (std::size_t k = basis.sector_begin(sector); k < basis.sector_end(sector); ++k) {
      v[static_cast<Eigen::Index>(k)] = Complex(normal(), normal());
    }
    return PureState::normalized(basis, std::move(v));
  }
  // Random density matrix of rank `rank` (full rank when 0).
  MixedState mixed(const FockBasis& basis, std::size_t rank = 0) {
    const auto n = static_cast<Eigen::Index>(basis.dim());
    const auto r = rank == 0 ? n : static_cast<Eigen::Index>(rank);
    Matrix g(n, r);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < r; ++j) g(i, j) = Complex(normal(), normal());
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return MixedState(basis, 0.5 * (rho + rho.adjoint()));
  }
  Matrix hermitian(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(normal(), normal());
    return 0.5 * (g + g.adjoint());
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Every M-tuple with entries in [0, N] and sum <= N, by nested counting.
inline std::vector<std::vector<std::uint32_t>> brute_force_occupations(int modes, int n_total) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> t(static_cast<std::size_t>(modes), 0);
  while (true) {
    std::uint32_t s = 0;
    for (auto v : t) s += v;
    if (s <= static_cast<std::uint32_t>(n_total)) out.push_back(t);
    std::size_t k = 0;
    while (k < t.size() && t[k] == static_cast<std::uint32_t>(n_total)) t[k++] = 0;
    if (k == t.size()) break;
    ++t[k];
  }
  return out;
}

// Poisson amplitude e^{-a^2/2} a^n / sqrt(n!) for real a >= 0.
inline double poisson_amplitude(double a, int n) {
  if (a == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(-0.5 * a * a + n * std::log(a) - 0.5 * std::lgamma(n + 1.0));
}

// sqrt(C(N,k)) cos^{N-k}(t/2) sin^k(t/2), 0 <= t <= pi.
inline double binomial_amplitude(int n_total, int k, double theta) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  double log_mag = 0.5 * (std::lgamma(n_total + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n_total - k + 1.0));
  if (n_total - k > 0) log_mag += (n_total - k) * std::log(c);
  if (k > 0) {
    if (s == 0.0) return 0.0;
    log_mag += k * std::log(s);
  }
  return std::exp(log_mag);
}

// 1 - |sum_k binomial_k poisson_k|^2 with the binomial state normalized
// and the Poisson state truncated at `cutoff` then renormalized.
inline double binomial_poisson_infidelity(int n_total, double alpha, int cutoff) {
  const double theta = 2.0 * std::asin(alpha / std::sqrt(static_cast<double>(n_total)));
  double norm_p = 0.0;
  for (int n = 0; n <= cutoff; ++n) norm_p += poisson_amplitude(alpha, n) * poisson_amplitude(alpha, n);
  double overlap = 0.0;
  for (int k = 0; k <= std::min(n_total, cutoff); ++k) overlap += binomial_amplitude(n_total, k, theta) * poisson_amplitude(alpha, k);
  return 1.0 - overlap * overlap / norm_p;
}

// Moments of the cat (|0> + |a>)/K from closed-form Poisson sums.
struct CatMoments {
  double mean;
  double second;
};
inline CatMoments cv_cat_moments(double a, int cutoff) {
  std::vector<double> c(static_cast<std::size_t>(cutoff + 1));
  for (int n = 0; n <= cutoff; ++n) c[static_cast<std::size_t>(n)] = poisson_amplitude(a, n);
  double pn = 0.0;
  for (double x : c) pn += x * x;
  for (double& x : c) x /= std::sqrt(pn);
  c[0] += 1.0;
  double norm = 0.0, mean = 0.0, second = 0.0;
  for (int n = 0; n <= cutoff; ++n) {
    const double p = c[static_cast<std::size_t>(n)] * c[static_cast<std::size_t>(n)];
    norm += p;
    mean += p * n;
    second += p * n * n;
  }
  return {mean / norm, second / norm};
}

// QFI of rho(kappa) = Tr_env[(U_k x 1)|Psi><Psi|(U_k x 1)^dag] from the
// Bures metric. The Uhlmann fidelity of two reduced states of a common
// purification is the trace norm of C_a^dag C_b, where C[s, e] holds the
// global amplitudes split into system and environment indices. Richardson
// extrapolation over steps h and h/2 removes the O(h^2) term.
inline double qfi_fidelity_susceptibility(const PureState& global, std::size_t env_mode, const Matrix& system_generator,
                                          const FockBasis& system_basis, double h = 2e-4) {
  const FockBasis& basis = global.basis();
  const std::uint32_t n = basis.n_total();
  Matrix c = Matrix::Zero(static_cast<Eigen::Index>(system_basis.dim()), n + 1);
  std::vector<std::uint32_t> sys_occ;
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    auto occ = basis.occupation(k);
    sys_occ.clear();
    for (std::size_t m = 0; m < occ.size(); ++m)
      if (m != env_mode) sys_occ.push_back(occ[m]);
    c(static_cast<Eigen::Index>(system_basis.rank(sys_occ)), occ[env_mode]) += global.amplitudes()[static_cast<Eigen::Index>(k)];
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(system_generator);
  auto evolved = [&](double kappa) {
    Vector d(es.eigenvalues().size());
    for (Eigen::Index k = 0; k < d.size(); ++k) d[k] = std::polar(1.0, kappa * es.eigenvalues()[k]);
    return Matrix(es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint() * c);
  };
  auto estimate = [&](double step) {
    const Matrix overlap = evolved(-step).adjoint() * evolved(step);
    Eigen::JacobiSVD<Matrix> svd(overlap);
    const double root_f = svd.singularValues().sum();
    return 8.0 * (1.0 - root_f) / (4.0 * step * step);
  };
  return (4.0 * estimate(0.5 * h) - estimate(h)) / 3.0;
}

}  // namespace metrolab::testing
