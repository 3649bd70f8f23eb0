#include "metrolab/metrology.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "metrolab/error.hpp"

namespace metrolab {

namespace {

using Idx = Eigen::Index;

double clamp_variance(double v, const char* context) {
  if (v < -tol::kVarianceClamp) {
    std::ostringstream msg;
    msg << context << ": negative variance " << v;
    throw NumericError(msg.str());
  }
  return std::max(v, 0.0);
}

// Spectral data of a generator, shared by every kappa evaluation.
struct Spectrum {
  RealVector values;
  Matrix vectors;
};

Spectrum diagonalize(const Matrix& h, const char* context) {
  require_dense_dim(static_cast<std::size_t>(h.rows()), context);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw NumericError(std::string(context) + ": eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

Vector phases(const RealVector& h, double kappa) {
  Vector d(h.size());
  for (Idx k = 0; k < h.size(); ++k) d[k] = std::polar(1.0, kappa * h[k]);
  return d;
}

// Probability model P_x(kappa) with rho and the POVM expressed in the
// generator eigenbasis, so each evaluation costs only diagonal phases.
class ProbabilityModel {
 public:
  ProbabilityModel(const HermitianOp& generator, const Povm& povm) : spec_(diagonalize(generator.matrix(), "fisher_information")) {
    if (povm.is_projective()) {
      vectors_ = spec_.vectors.adjoint() * povm.vectors();
    } else {
      for (const Matrix& e : povm.elements()) elements_.push_back(spec_.vectors.adjoint() * e * spec_.vectors);
    }
  }

  void set_pure(const Vector& psi) { psi_ = spec_.vectors.adjoint() * psi; pure_ = true; }
  void set_mixed(const Matrix& rho) { rho_ = spec_.vectors.adjoint() * rho * spec_.vectors; pure_ = false; }

  std::size_t outcomes() const { return vectors_.size() ? static_cast<std::size_t>(vectors_.cols()) : elements_.size(); }

  RealVector probabilities(double kappa) const {
    const Vector d = phases(spec_.values, kappa);
    RealVector p(static_cast<Idx>(outcomes()));
    if (pure_) {
      const Vector psi = d.asDiagonal() * psi_;
      if (vectors_.size()) {
        p = (vectors_.adjoint() * psi).cwiseAbs2();
      } else {
        for (std::size_t x = 0; x < elements_.size(); ++x) p[static_cast<Idx>(x)] = psi.dot(elements_[x] * psi).real();
      }
    } else {
      const Matrix rho = d.asDiagonal() * rho_ * d.conjugate().asDiagonal();
      fill_mixed(rho, p);
    }
    return p;
  }

  // d/dkappa of every probability via Tr[Pi i[H, rho_kappa]].
  RealVector derivatives(double kappa) const {
    const Vector d = phases(spec_.values, kappa);
    Matrix rho;
    if (pure_) {
      const Vector psi = d.asDiagonal() * psi_;
      rho = psi * psi.adjoint();
    } else {
      rho = d.asDiagonal() * rho_ * d.conjugate().asDiagonal();
    }
    const Vector h = spec_.values.cast<Complex>();
    const Matrix drho = kI * (h.asDiagonal() * rho - rho * h.asDiagonal());
    RealVector p(static_cast<Idx>(outcomes()));
    fill_mixed(drho, p);
    return p;
  }

 private:
  void fill_mixed(const Matrix& rho, RealVector& p) const {
    if (vectors_.size()) {
      const Matrix t = rho * vectors_;
      for (Idx x = 0; x < vectors_.cols(); ++x) p[x] = vectors_.col(x).dot(t.col(x)).real();
    } else {
      for (std::size_t x = 0; x < elements_.size(); ++x) p[static_cast<Idx>(x)] = (elements_[x] * rho).trace().real();
    }
  }

  Spectrum spec_;
  Matrix vectors_;
  std::vector<Matrix> elements_;
  Vector psi_;
  Matrix rho_;
  bool pure_ = true;
};

FisherResult fisher_from_model(const ProbabilityModel& model, double kappa0, const FisherOptions& opt) {
  if (!(opt.step > 0.0)) throw std::invalid_argument("fisher_information: step must be > 0");
  const RealVector p0 = model.probabilities(kappa0);
  RealVector dp;
  auto central = [&](double h) {
    return RealVector((model.probabilities(kappa0 + h) - model.probabilities(kappa0 - h)) / (2.0 * h));
  };
  switch (opt.derivative) {
    case Derivative::Central:
      dp = central(opt.step);
      break;
    case Derivative::Richardson:
      dp = (4.0 * central(0.5 * opt.step) - central(opt.step)) / 3.0;
      break;
    case Derivative::Analytic:
      dp = model.derivatives(kappa0);
      break;
  }
  FisherResult result;
  for (Idx x = 0; x < p0.size(); ++x) {
    if (p0[x] < opt.probability_floor) {
      ++result.skipped_outcomes;
      if (dp[x] * dp[x] > opt.probability_floor) result.divergent = true;
      continue;
    }
    result.value += dp[x] * dp[x] / p0[x];
  }
  if (result.divergent) result.value = std::numeric_limits<double>::infinity();
  return result;
}

Matrix sld_eigenvectors(const Matrix& sld) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (sld + sld.adjoint()));
  if (es.info() != Eigen::Success) throw NumericError("optimal_povm: SLD eigendecomposition failed");
  return es.eigenvectors();
}

}  // namespace

// ---------------------------------------------------------------- QFIReport

QFIReport QFIReport::with_repetitions(std::uint64_t nu) const {
  if (nu == 0) throw std::invalid_argument("QFIReport: nu must be >= 1");
  QFIReport r = *this;
  r.crb = CramerRao{nu, 1.0 / std::sqrt(static_cast<double>(nu) * qfi)};
  return r;
}

// --------------------------------------------------------------------- Povm

Povm Povm::projective(FockBasis basis, Matrix vectors) {
  const auto n = static_cast<Idx>(basis.dim());
  if (vectors.rows() != n || vectors.cols() != n) {
    throw std::invalid_argument("Povm::projective: need dim orthonormal columns");
  }
  const double defect = (vectors.adjoint() * vectors - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (defect > tol::kPovm) throw std::invalid_argument("Povm::projective: columns are not orthonormal");
  return Povm(std::move(basis), std::move(vectors), {});
}

Povm Povm::general(FockBasis basis, std::vector<Matrix> elements) {
  if (elements.empty()) throw std::invalid_argument("Povm::general: no elements");
  const auto n = static_cast<Idx>(basis.dim());
  Matrix sum = Matrix::Zero(n, n);
  for (const Matrix& e : elements) {
    if (e.rows() != n || e.cols() != n) throw std::invalid_argument("Povm::general: element has wrong shape");
    if (hermiticity_defect(e) > tol::kPovm) throw std::invalid_argument("Povm::general: element is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(e, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol::kPovm) throw std::invalid_argument("Povm::general: element is not PSD");
    sum += e;
  }
  if ((sum - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol::kPovm) {
    throw std::invalid_argument("Povm::general: elements do not sum to identity");
  }
  return Povm(std::move(basis), Matrix(), std::move(elements));
}

std::size_t Povm::size() const {
  return is_projective() ? static_cast<std::size_t>(vectors_.cols()) : elements_.size();
}

Matrix Povm::element(std::size_t k) const {
  if (k >= size()) throw std::out_of_range("Povm::element");
  if (!is_projective()) return elements_[k];
  const auto v = vectors_.col(static_cast<Idx>(k));
  return v * v.adjoint();
}

// -------------------------------------------------------- moments and QFI

double expectation(const PureState& state, const HermitianOp& op) {
  require_same_basis(state.basis(), op.basis(), "expectation");
  const Vector& v = state.amplitudes();
  return v.dot(op.matrix() * v).real();
}

double expectation(const MixedState& state, const HermitianOp& op) {
  require_same_basis(state.basis(), op.basis(), "expectation");
  return (state.matrix() * op.matrix()).trace().real();
}

double variance(const PureState& state, const HermitianOp& op) {
  require_same_basis(state.basis(), op.basis(), "variance");
  const Vector& v = state.amplitudes();
  const Vector hv = op.matrix() * v;
  const double mean = v.dot(hv).real();
  return clamp_variance(hv.squaredNorm() - mean * mean, "variance");
}

double variance(const MixedState& state, const HermitianOp& op) {
  require_same_basis(state.basis(), op.basis(), "variance");
  const Matrix rh = state.matrix() * op.matrix();
  const double mean = rh.trace().real();
  const double second = (rh * op.matrix()).trace().real();
  return clamp_variance(second - mean * mean, "variance");
}

QFIReport qfi_pure(const PureState& state, const HermitianOp& generator) {
  return {4.0 * variance(state, generator), generator.label(), std::nullopt};
}

QFIReport qfi_mixed(const MixedState& rho, const HermitianOp& generator, double eigenvalue_floor) {
  require_same_basis(rho.basis(), generator.basis(), "qfi_mixed");
  if (eigenvalue_floor < 0.0) throw std::invalid_argument("qfi_mixed: eigenvalue_floor must be >= 0");
  const Spectrum s = diagonalize(rho.matrix(), "qfi_mixed");
  if (s.values.minCoeff() < -tol::kNegativeEigen) throw NumericError("qfi_mixed: density matrix is not PSD");
  const RealVector lambda = s.values.cwiseMax(0.0);
  const Matrix h = s.vectors.adjoint() * generator.matrix() * s.vectors;
  double q = 0.0;
  for (Idx k = 0; k < lambda.size(); ++k) {
    for (Idx l = 0; l < lambda.size(); ++l) {
      const double sum = lambda[k] + lambda[l];
      if (sum <= eigenvalue_floor) continue;
      const double diff = lambda[k] - lambda[l];
      q += std::norm(h(k, l)) * diff * diff / sum;
    }
  }
  return {2.0 * q, generator.label(), std::nullopt};
}

// ------------------------------------------------------ closed-form variances

double analytic_variance_Jn(const CoeffProfile& coeffs, std::uint32_t n_total, double beta, double phi) {
  if (coeffs.size() != n_total + 1) throw std::invalid_argument("analytic_variance_Jn: need N+1 coefficients");
  const double N = n_total;
  const double nbar = coeffs.mean();
  const double n2bar = coeffs.second_moment();
  const double var_n = n2bar - nbar * nbar;
  const Complex e1 = std::polar(1.0, -phi);
  const Complex e2 = std::polar(1.0, -2.0 * phi);

  // sum Re{c_n c*_{n+1} e^{-i phi}} sqrt((n+1)(N-n)), plain and weighted by (2n - 2 nbar + 1).
  double nearest = 0.0;
  double nearest_weighted = 0.0;
  for (std::uint32_t n = 0; n < n_total; ++n) {
    const double re = (coeffs[n] * std::conj(coeffs[n + 1]) * e1).real() * std::sqrt((n + 1.0) * (N - n));
    nearest += re;
    nearest_weighted += re * (2.0 * n - 2.0 * nbar + 1.0);
  }
  double next_nearest = 0.0;
  for (std::uint32_t n = 0; n + 1 < n_total; ++n) {
    next_nearest += (coeffs[n] * std::conj(coeffs[n + 2]) * e2).real() *
                    std::sqrt((N - n) * (N - n - 1.0) * (n + 1.0) * (n + 2.0));
  }

  const double s2 = std::sin(beta) * std::sin(beta);
  const double c2 = std::cos(beta) * std::cos(beta);
  const double cs = std::cos(beta) * std::sin(beta);
  const double v = N / 4.0 * s2 + 0.5 * (N * nbar - n2bar) * s2 + var_n * c2 - nearest * nearest * s2 +
                   0.5 * next_nearest * s2 + nearest_weighted * cs;
  return clamp_variance(v, "analytic_variance_Jn");
}

double cv_variance_Jy(const CoeffProfile& coeffs, std::uint32_t n_total) {
  if (coeffs.size() != n_total + 1) throw std::invalid_argument("cv_variance_Jy: need N+1 coefficients");
  const double N = n_total;
  const double nbar = coeffs.mean();
  const double n2bar = coeffs.second_moment();
  double mean_jy = 0.0;
  for (std::uint32_t n = 0; n < n_total; ++n) {
    mean_jy += (-kI * coeffs[n] * std::conj(coeffs[n + 1])).real() * std::sqrt((n + 1.0) * (N - n));
  }
  double pair = 0.0;
  for (std::uint32_t n = 0; n + 1 < n_total; ++n) {
    pair += (coeffs[n] * std::conj(coeffs[n + 2])).real() * std::sqrt((N - n) * (N - n - 1.0) * (n + 1.0) * (n + 2.0));
  }
  const double v = N / 4.0 + 0.5 * (N * nbar - n2bar) - mean_jy * mean_jy - 0.5 * pair;
  return clamp_variance(v, "cv_variance_Jy");
}

// ----------------------------------------------------- displacement bound

namespace {
double bound_from_variance(double var_p, std::uint64_t nu) {
  if (nu == 0) throw std::invalid_argument("displacement_bound: nu must be >= 1");
  return 1.0 / std::sqrt(4.0 * static_cast<double>(nu) * var_p);
}
}  // namespace

double displacement_bound(const PureState& state, std::uint64_t nu, std::size_t mode, double tail_limit) {
  require_small_boundary_mass(boundary_mass(state), tail_limit, "displacement_bound");
  return bound_from_variance(variance(state, quadrature_p(state.basis(), mode)), nu);
}

double displacement_bound(const MixedState& state, std::uint64_t nu, std::size_t mode, double tail_limit) {
  require_small_boundary_mass(boundary_mass(state), tail_limit, "displacement_bound");
  return bound_from_variance(variance(state, quadrature_p(state.basis(), mode)), nu);
}

// -------------------------------------------------------- Fisher information

FisherResult fisher_information(const PureState& state, const HermitianOp& generator, const Povm& povm,
                                double kappa0, const FisherOptions& options) {
  require_same_basis(state.basis(), generator.basis(), "fisher_information");
  require_same_basis(state.basis(), povm.basis(), "fisher_information");
  ProbabilityModel model(generator, povm);
  model.set_pure(state.amplitudes());
  return fisher_from_model(model, kappa0, options);
}

FisherResult fisher_information(const MixedState& state, const HermitianOp& generator, const Povm& povm,
                                double kappa0, const FisherOptions& options) {
  require_same_basis(state.basis(), generator.basis(), "fisher_information");
  require_same_basis(state.basis(), povm.basis(), "fisher_information");
  ProbabilityModel model(generator, povm);
  model.set_mixed(state.matrix());
  return fisher_from_model(model, kappa0, options);
}

Povm optimal_povm(const PureState& state, const HermitianOp& generator, double kappa0) {
  require_same_basis(state.basis(), generator.basis(), "optimal_povm");
  const Spectrum s = diagonalize(generator.matrix(), "optimal_povm");
  const Vector psi = s.vectors * (phases(s.values, kappa0).asDiagonal() * (s.vectors.adjoint() * state.amplitudes()));
  const Vector dpsi = kI * (generator.matrix() * psi);
  // For rank-1 rho the SLD is 2 d(rho) = 2(|dpsi><psi| + |psi><dpsi|).
  const Matrix sld = 2.0 * (dpsi * psi.adjoint() + psi * dpsi.adjoint());
  return Povm::projective(state.basis(), sld_eigenvectors(sld));
}

Povm optimal_povm(const MixedState& rho, const HermitianOp& generator, double kappa0, double eigenvalue_floor) {
  require_same_basis(rho.basis(), generator.basis(), "optimal_povm");
  const Spectrum gen = diagonalize(generator.matrix(), "optimal_povm");
  const Vector d = phases(gen.values, kappa0);
  const Matrix u = gen.vectors * d.asDiagonal() * gen.vectors.adjoint();
  const Matrix rho_k = u * rho.matrix() * u.adjoint();

  const Spectrum s = diagonalize(0.5 * (rho_k + rho_k.adjoint()), "optimal_povm");
  const RealVector lambda = s.values.cwiseMax(0.0);
  const Matrix h = s.vectors.adjoint() * generator.matrix() * s.vectors;
  const auto n = lambda.size();
  Matrix sld = Matrix::Zero(n, n);
  for (Idx k = 0; k < n; ++k) {
    for (Idx l = 0; l < n; ++l) {
      const double sum = lambda[k] + lambda[l];
      if (sum <= eigenvalue_floor) continue;
      // <k| i[H, rho] |l> = i (lambda_l - lambda_k) H_kl
      sld(k, l) = 2.0 * kI * (lambda[l] - lambda[k]) * h(k, l) / sum;
    }
  }
  return Povm::projective(rho.basis(), s.vectors * sld_eigenvectors(sld));
}

}  // namespace metrolab
