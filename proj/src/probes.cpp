#include "metrolab/probes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "metrolab/error.hpp"

namespace metrolab {

namespace {

using Idx = Eigen::Index;
Idx idx(std::size_t k) { return static_cast<Idx>(k); }

void require_unit_norm(double norm_sq, const char* context) {
  if (!std::isfinite(norm_sq) || std::abs(std::sqrt(norm_sq) - 1.0) > tol::kInputNorm) {
    std::ostringstream msg;
    msg << context << ": coefficients not normalized (sum |c|^2 = " << norm_sq << ")";
    throw std::invalid_argument(msg.str());
  }
}

// x^k for integer k >= 0, with 0^0 = 1.
double int_pow(double x, std::uint32_t k) {
  if (k == 0) return 1.0;
  return std::pow(x, static_cast<double>(k));
}

// sqrt(C(n, k)) a^(n-k) b^k evaluated in log space to avoid overflow.
double binomial_amplitude(std::uint32_t n, std::uint32_t k, double a, double b) {
  const double la = std::abs(a);
  const double lb = std::abs(b);
  if ((la == 0.0 && n - k > 0) || (lb == 0.0 && k > 0)) return 0.0;
  double log_mag = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
  if (n - k > 0) log_mag += (n - k) * std::log(la);
  if (k > 0) log_mag += k * std::log(lb);
  const double sign = int_pow(a < 0 ? -1.0 : 1.0, n - k) * int_pow(b < 0 ? -1.0 : 1.0, k);
  return sign * std::exp(log_mag);
}

std::size_t two_mode_index(const FockBasis& basis, std::uint32_t n0, std::uint32_t n1) {
  const std::uint32_t occ[2] = {n0, n1};
  return basis.rank(occ);
}

}  // namespace

// -------------------------------------------------------------- CoeffProfile

CoeffProfile::CoeffProfile(Vector coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() == 0) throw std::invalid_argument("CoeffProfile: empty coefficient list");
  const double n2 = coeffs_.squaredNorm();
  require_unit_norm(n2, "CoeffProfile");
  coeffs_ /= std::sqrt(n2);
}

CoeffProfile CoeffProfile::normalized(Vector coeffs) {
  const double norm = coeffs.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw std::invalid_argument("CoeffProfile: zero or non-finite vector");
  return CoeffProfile(coeffs / norm);
}

double CoeffProfile::mean() const {
  double m = 0.0;
  for (Idx n = 0; n < coeffs_.size(); ++n) m += std::norm(coeffs_[n]) * static_cast<double>(n);
  return m;
}

double CoeffProfile::second_moment() const {
  double m = 0.0;
  for (Idx n = 0; n < coeffs_.size(); ++n) m += std::norm(coeffs_[n]) * static_cast<double>(n) * static_cast<double>(n);
  return m;
}

TwoIndexCoeffs::TwoIndexCoeffs(std::uint32_t n_total, Matrix coeffs) : n_total_(n_total), coeffs_(std::move(coeffs)) {
  const auto n = idx(n_total_ + 1);
  if (coeffs_.rows() != n || coeffs_.cols() != n) {
    throw std::invalid_argument("TwoIndexCoeffs: matrix must be (N+1) x (N+1)");
  }
  for (Idx a = 0; a < n; ++a)
    for (Idx b = 0; b < n; ++b)
      if (a + b > idx(n_total_) && coeffs_(a, b) != Complex{}) {
        throw std::invalid_argument("TwoIndexCoeffs: non-zero coefficient with n1 + n2 > N");
      }
  const double n2 = coeffs_.squaredNorm();
  require_unit_norm(n2, "TwoIndexCoeffs");
  coeffs_ /= std::sqrt(n2);
}

TwoIndexCoeffs TwoIndexCoeffs::normalized(std::uint32_t n_total, Matrix coeffs) {
  const double norm = coeffs.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("TwoIndexCoeffs: zero matrix");
  return TwoIndexCoeffs(n_total, coeffs / norm);
}

// ---------------------------------------------------------------- factories

PureState two_mode_ssrc(const CoeffProfile& coeffs, std::uint32_t n_total) {
  if (coeffs.size() != n_total + 1) throw std::invalid_argument("two_mode_ssrc: need N+1 coefficients");
  const FockBasis basis(2, static_cast<int>(n_total));
  Vector v = Vector::Zero(idx(basis.dim()));
  for (std::uint32_t n = 0; n <= n_total; ++n) v[idx(two_mode_index(basis, n, n_total - n))] = coeffs[n];
  return PureState(basis, std::move(v));
}

PureState noon(std::uint32_t n_total) {
  if (n_total == 0) throw std::invalid_argument("noon: N must be >= 1");
  Vector c = Vector::Zero(idx(n_total + 1));
  c[0] = c[idx(n_total)] = std::numbers::sqrt2 / 2.0;
  return two_mode_ssrc(CoeffProfile(c), n_total);
}

PureState rotated_fock(std::uint32_t n_total, double theta, double phi) {
  const FockBasis basis(2, static_cast<int>(n_total));
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  Vector v = Vector::Zero(idx(basis.dim()));
  for (std::uint32_t k = 0; k <= n_total; ++k) {
    v[idx(two_mode_index(basis, k, n_total - k))] =
        binomial_amplitude(n_total, k, c, s) * std::polar(1.0, static_cast<double>(k) * phi);
  }
  return PureState::normalized(basis, std::move(v));
}

double theta_for_amplitude(double alpha_abs, std::uint32_t n_total) {
  if (n_total == 0 || alpha_abs < 0.0 || alpha_abs * alpha_abs > n_total) {
    throw std::invalid_argument("theta_for_amplitude: need 0 <= |alpha|^2 <= N");
  }
  return 2.0 * std::asin(alpha_abs / std::sqrt(static_cast<double>(n_total)));
}

PureState cat_ssrc(std::uint32_t n_total, double theta, double phi) {
  if (n_total == 0) throw std::invalid_argument("cat_ssrc: N must be >= 1");
  const PureState rotated = rotated_fock(n_total, theta, phi);
  Vector v = rotated.amplitudes();
  v[idx(two_mode_index(rotated.basis(), 0, n_total))] += 1.0;
  return PureState::normalized(rotated.basis(), std::move(v));
}

double poisson_tail(double mean, std::uint32_t cutoff) {
  if (mean < 0.0) throw std::invalid_argument("poisson_tail: negative mean");
  if (mean == 0.0) return 0.0;
  double tail = 0.0;
  for (std::uint64_t n = cutoff + 1ULL;; ++n) {
    const double term = std::exp(-mean + static_cast<double>(n) * std::log(mean) - std::lgamma(n + 1.0));
    tail += term;
    if (static_cast<double>(n) > mean && term < 1e-20 * std::max(tail, 1e-300)) break;
    if (static_cast<double>(n) > mean && term == 0.0) break;
  }
  return tail;
}

std::uint32_t coherent_cutoff(Complex alpha, double tail) {
  const double mean = std::norm(alpha);
  std::uint32_t cutoff = 0;
  while (poisson_tail(mean, cutoff) >= tail) ++cutoff;
  return cutoff;
}

PureState coherent_truncated(Complex alpha, std::uint32_t cutoff) {
  const double mean = std::norm(alpha);
  const double tail = poisson_tail(mean, cutoff);
  if (tail >= 1e-12) {
    std::ostringstream msg;
    msg << "coherent_truncated: cutoff " << cutoff << " leaves Poisson tail " << tail << " (need < 1e-12, cutoff >= "
        << coherent_cutoff(alpha) << ")";
    throw std::invalid_argument(msg.str());
  }
  const FockBasis basis(1, static_cast<int>(cutoff));
  Vector v = Vector::Zero(idx(cutoff + 1));
  const double r = std::abs(alpha);
  const double arg = std::arg(alpha);
  v[0] = std::exp(-0.5 * mean);
  for (std::uint32_t n = 1; n <= cutoff && r > 0.0; ++n) {
    const double mag = std::exp(-0.5 * mean + n * std::log(r) - 0.5 * std::lgamma(n + 1.0));
    v[idx(n)] = std::polar(mag, n * arg);
  }
  return PureState::normalized(basis, std::move(v));
}

PureState cv_cat(Complex alpha, std::uint32_t cutoff) {
  const PureState coherent = coherent_truncated(alpha, cutoff);
  Vector v = coherent.amplitudes();
  v[0] += 1.0;
  return PureState::normalized(coherent.basis(), std::move(v));
}

PureState correlated_three_mode(const CoeffProfile& coeffs, std::uint32_t n_total) {
  if (coeffs.size() != n_total / 2 + 1) {
    throw std::invalid_argument("correlated_three_mode: need floor(N/2)+1 coefficients");
  }
  const FockBasis basis(3, static_cast<int>(n_total));
  Vector v = Vector::Zero(idx(basis.dim()));
  for (std::uint32_t n = 0; 2 * n <= n_total; ++n) {
    const std::uint32_t occ[3] = {n, n, n_total - 2 * n};
    v[idx(basis.rank(occ))] = coeffs[n];
  }
  return PureState(basis, std::move(v));
}

PureState general_probe(const TwoIndexCoeffs& coeffs, std::span<const Gate> gates, std::uint32_t env_occupation) {
  const std::uint32_t n = coeffs.n_total();
  const FockBasis basis(4, static_cast<int>(n + env_occupation));
  for (const Gate& g : gates) {
    if (g.axis.i >= 4 || g.axis.j >= 4) throw std::invalid_argument("general_probe: gate acts outside modes 0..3");
  }
  Vector v = Vector::Zero(idx(basis.dim()));
  for (std::uint32_t n1 = 0; n1 <= n; ++n1)
    for (std::uint32_t n2 = 0; n1 + n2 <= n; ++n2) {
      const std::uint32_t occ[4] = {n1, n2, n - n1 - n2, env_occupation};
      v[idx(basis.rank(occ))] = coeffs.coeffs()(idx(n1), idx(n2));
    }
  PureState psi(basis, std::move(v));
  for (const Gate& g : gates) {
    psi = g.kind == GateKind::Rotation ? apply_rotation(psi, g.axis, g.angle)
                                       : apply_spin_squeeze(psi, g.axis, g.angle);
  }
  return psi;
}

PureState cv_image(const PureState& two_mode, std::uint32_t min_cutoff) {
  const FockBasis& basis = two_mode.basis();
  if (basis.num_modes() != 2) throw std::invalid_argument("cv_image: expects a two-mode state");
  const std::uint32_t n = basis.n_total();
  const auto weights = two_mode.sector_weights();
  if (1.0 - weights[n] > 1e-12) throw std::invalid_argument("cv_image: state has support outside the N sector");
  const std::uint32_t cutoff = std::max(n, min_cutoff);
  Vector v = Vector::Zero(idx(cutoff + 1));
  for (std::uint32_t k = 0; k <= n; ++k) v[idx(k)] = two_mode.amplitudes()[idx(two_mode_index(basis, k, n - k))];
  return PureState::normalized(FockBasis(1, static_cast<int>(cutoff)), std::move(v));
}

PureState ssrc_embed(const PureState& single_mode, std::uint32_t n_total, double max_dropped) {
  if (single_mode.basis().num_modes() != 1) throw std::invalid_argument("ssrc_embed: expects a single-mode state");
  const FockBasis basis(2, static_cast<int>(n_total));
  const auto& a = single_mode.amplitudes();
  Vector v = Vector::Zero(idx(basis.dim()));
  double dropped = 0.0;
  for (Idx k = 0; k < a.size(); ++k) {
    if (k <= idx(n_total)) {
      v[idx(two_mode_index(basis, static_cast<std::uint32_t>(k), n_total - static_cast<std::uint32_t>(k)))] = a[k];
    } else {
      dropped += std::norm(a[k]);
    }
  }
  if (dropped > max_dropped) {
    std::ostringstream msg;
    msg << "ssrc_embed: N = " << n_total << " drops mass " << dropped;
    throw NumericError(msg.str());
  }
  return PureState::normalized(basis, std::move(v));
}

double cv_limit_ratio(const PureState& two_mode) {
  const FockBasis& basis = two_mode.basis();
  if (basis.num_modes() != 2 || basis.n_total() == 0) throw std::invalid_argument("cv_limit_ratio: expects a two-mode state with N >= 1");
  double mean = 0.0;
  for (std::size_t k = 0; k < basis.dim(); ++k) mean += std::norm(two_mode.amplitudes()[idx(k)]) * basis.occupation(k, 0);
  return mean / (0.5 * basis.n_total());
}

}  // namespace metrolab
