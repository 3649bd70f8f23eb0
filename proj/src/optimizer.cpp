#include "metrolab/optimizer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "metrolab/error.hpp"

namespace metrolab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTieTolerance = 1e-12;

Eigen::MatrixXd covariance_from_probs(const FockBasis& basis, const RealVector& probs,
                                      std::span<const std::size_t> modes) {
  for (auto m : modes) {
    if (m >= basis.num_modes()) throw std::invalid_argument("number_covariance: mode index out of range");
  }
  const auto k = static_cast<Eigen::Index>(modes.size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(k);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd occ(k);
  for (std::size_t s = 0; s < basis.dim(); ++s) {
    const double p = probs[static_cast<Eigen::Index>(s)];
    if (p == 0.0) continue;
    for (Eigen::Index q = 0; q < k; ++q) occ[q] = basis.occupation(s, modes[static_cast<std::size_t>(q)]);
    mean += p * occ;
    second += p * occ * occ.transpose();
  }
  return second - mean * mean.transpose();
}

ZetaResult zeta_from_covariance(const Eigen::Matrix2d& cov) {
  ZetaResult r;
  r.cov = cov;
  const double v1 = cov(0, 0);
  const double v2 = cov(1, 1);
  const double c = cov(0, 1);
  const double scale = std::max({std::abs(v1), std::abs(v2), 1.0});
  if (std::abs(c) <= kTieTolerance * scale && std::abs(v1 - v2) <= kTieTolerance * scale) {
    r.degenerate = true;
    r.zeta_opt = 0.0;
  } else {
    double z = 0.5 * std::atan2(2.0 * c, v1 - v2);
    if (z < 0.0) z += kPi;
    if (z >= kPi) z -= kPi;
    r.zeta_opt = z;
  }
  const double cz = std::cos(r.zeta_opt);
  const double sz = std::sin(r.zeta_opt);
  r.var_max = std::max(0.0, cz * cz * v1 + sz * sz * v2 + 2.0 * cz * sz * c);
  r.var_perp = std::max(0.0, sz * sz * v1 + cz * cz * v2 - 2.0 * cz * sz * c);
  return r;
}

WeightResult weights_from_covariance(const Eigen::MatrixXd& cov) {
  WeightResult r;
  r.cov = cov;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success) throw NumericError("optimal_weights: eigendecomposition failed");
  const auto k = cov.rows();
  const auto& values = es.eigenvalues();
  const double scale = std::max(values.cwiseAbs().maxCoeff(), 1.0);
  if (k > 1 && values[k - 1] - values[k - 2] <= kTieTolerance * scale) r.degenerate = true;
  r.weights = es.eigenvectors().col(k - 1);
  for (Eigen::Index q = k - 1; q >= 0; --q) {
    if (std::abs(r.weights[q]) > 1e-14) {
      if (r.weights[q] < 0.0) r.weights = -r.weights;
      break;
    }
  }
  r.var_max = std::max(0.0, values[k - 1]);
  return r;
}

template <class S>
void require_two_modes(const S& state, const char* context) {
  if (state.basis().num_modes() < 2) throw std::invalid_argument(std::string(context) + ": needs at least 2 modes");
}

// Direct moments of the weighted occupation over the number distribution;
// deliberately does not reuse the covariance route of optimal_zeta.
std::vector<ZetaSample> sweep_probs(const FockBasis& basis, const RealVector& probs, std::span<const double> zetas) {
  if (basis.num_modes() < 2) throw std::invalid_argument("sweep_qfi_vs_zeta: needs at least 2 modes");
  std::vector<ZetaSample> rows;
  rows.reserve(zetas.size());
  for (double z : zetas) {
    const double c = std::cos(z);
    const double s = std::sin(z);
    double m = 0.0, m2 = 0.0, mp = 0.0, mp2 = 0.0;
    for (std::size_t k = 0; k < basis.dim(); ++k) {
      const double p = probs[static_cast<Eigen::Index>(k)];
      if (p == 0.0) continue;
      const double n0 = basis.occupation(k, 0);
      const double n1 = basis.occupation(k, 1);
      const double w = c * n0 + s * n1;
      const double wp = s * n0 - c * n1;
      m += p * w;
      m2 += p * w * w;
      mp += p * wp;
      mp2 += p * wp * wp;
    }
    const double var = std::max(0.0, m2 - m * m);
    rows.push_back({z, 4.0 * var, var, std::max(0.0, mp2 - mp * mp)});
  }
  return rows;
}

}  // namespace

Eigen::MatrixXd number_covariance(const PureState& state, std::span<const std::size_t> modes) {
  return covariance_from_probs(state.basis(), state.amplitudes().cwiseAbs2(), modes);
}

Eigen::MatrixXd number_covariance(const MixedState& state, std::span<const std::size_t> modes) {
  return covariance_from_probs(state.basis(), state.matrix().diagonal().real(), modes);
}

ZetaResult optimal_zeta(const PureState& state) {
  require_two_modes(state, "optimal_zeta");
  const std::size_t modes[2] = {0, 1};
  return zeta_from_covariance(number_covariance(state, modes));
}

ZetaResult optimal_zeta(const MixedState& state) {
  require_two_modes(state, "optimal_zeta");
  const std::size_t modes[2] = {0, 1};
  return zeta_from_covariance(number_covariance(state, modes));
}

WeightResult optimal_weights(const PureState& state, std::span<const std::size_t> modes) {
  if (modes.empty()) throw std::invalid_argument("optimal_weights: no modes");
  return weights_from_covariance(number_covariance(state, modes));
}

WeightResult optimal_weights(const MixedState& state, std::span<const std::size_t> modes) {
  if (modes.empty()) throw std::invalid_argument("optimal_weights: no modes");
  return weights_from_covariance(number_covariance(state, modes));
}

double estimated_parameter_map(double zeta, double theta13, double theta23) {
  const double c = std::cos(zeta);
  const double s = std::sin(zeta);
  const double theta = theta13 * c + theta23 * s;
  if (std::abs(theta13 - theta * c) > 1e-10 || std::abs(theta23 - theta * s) > 1e-10) {
    throw std::invalid_argument("estimated_parameter_map: (theta13, theta23) is not along (cos zeta, sin zeta)");
  }
  return theta;
}

MixedState lossy_probe(const PureState& state, std::size_t probe_mode, double kappa) {
  const LossCoupling c{probe_mode, kappa};
  return lossy_probe(state, std::span<const LossCoupling>(&c, 1));
}

MixedState lossy_probe(const PureState& state, std::span<const LossCoupling> couplings) {
  if (state.basis().num_modes() != 4) throw std::invalid_argument("lossy_probe: expects a 4-mode state");
  PureState psi = state;
  for (const LossCoupling& c : couplings) {
    if (c.probe_mode > 2) throw std::invalid_argument("lossy_probe: probe mode must be 0, 1 or 2");
    psi = apply_rotation(psi, PairAxis(c.probe_mode, 3, c.beta, c.phi), c.kappa);
  }
  const std::size_t keep[3] = {0, 1, 2};
  return partial_trace(psi, keep);
}

std::vector<ZetaSample> sweep_qfi_vs_zeta(const PureState& state, std::span<const double> zetas) {
  return sweep_probs(state.basis(), state.amplitudes().cwiseAbs2(), zetas);
}

std::vector<ZetaSample> sweep_qfi_vs_zeta(const MixedState& state, std::span<const double> zetas) {
  return sweep_probs(state.basis(), state.matrix().diagonal().real(), zetas);
}

}  // namespace metrolab
