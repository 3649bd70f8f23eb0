#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "metrolab/operators.hpp"
#include "metrolab/state.hpp"
#include "metrolab/types.hpp"

namespace metrolab {

// Normalized coefficient list c_0..c_K.
class CoeffProfile {
 public:
  // Throws std::invalid_argument when empty or when sum |c|^2 deviates from 1
  // by more than tol::kInputNorm.
  explicit CoeffProfile(Vector coeffs);
  static CoeffProfile normalized(Vector coeffs);

  const Vector& coeffs() const { return coeffs_; }
  std::size_t size() const { return static_cast<std::size_t>(coeffs_.size()); }
  Complex operator[](std::size_t n) const { return coeffs_[static_cast<Eigen::Index>(n)]; }

  double mean() const;         // sum |c_n|^2 n
  double second_moment() const;  // sum |c_n|^2 n^2

 private:
  Vector coeffs_;
};

// Coefficients c_{n1,n2} over n1 + n2 <= N, stored as an (N+1) x (N+1) matrix
// that must vanish below the anti-diagonal boundary.
class TwoIndexCoeffs {
 public:
  TwoIndexCoeffs(std::uint32_t n_total, Matrix coeffs);
  static TwoIndexCoeffs normalized(std::uint32_t n_total, Matrix coeffs);

  std::uint32_t n_total() const { return n_total_; }
  const Matrix& coeffs() const { return coeffs_; }

 private:
  std::uint32_t n_total_;
  Matrix coeffs_;
};

enum class GateKind { Rotation, SpinSqueeze };

// exp(i angle J_n) or exp(i angle J_n^2) on one mode pair.
struct Gate {
  PairAxis axis;
  double angle = 0.0;
  GateKind kind = GateKind::Rotation;
};

// sum_n c_n |n>_0 |N-n>_1 on a 2-mode basis with cutoff N.
PureState two_mode_ssrc(const CoeffProfile& coeffs, std::uint32_t n_total);

// (|N,0> + |0,N>)/sqrt 2. Throws for N == 0.
PureState noon(std::uint32_t n_total);

// All N photons in the rotated mode cos(theta/2) a_1^dag + e^{i phi} sin(theta/2) a_0^dag:
// sum_k sqrt(C(N,k)) cos^{N-k}(theta/2) (e^{i phi} sin(theta/2))^k |k, N-k>.
PureState rotated_fock(std::uint32_t n_total, double theta, double phi);

// Polar angle theta with sin(theta/2) = |alpha| / sqrt(N), the rotated Fock
// state that approaches |alpha> in mode 0. Throws when |alpha|^2 > N.
double theta_for_amplitude(double alpha_abs, std::uint32_t n_total);

// Normalized |0,N> + rotated_fock(N, theta, phi). Throws for N == 0.
PureState cat_ssrc(std::uint32_t n_total, double theta, double phi);

// Poisson mass above `cutoff` for mean `mean`.
double poisson_tail(double mean, std::uint32_t cutoff);
// Smallest cutoff whose Poisson tail is below `tail`.
std::uint32_t coherent_cutoff(Complex alpha, double tail = 1e-12);

// Single-mode coherent state truncated at `cutoff` and renormalized.
// Throws std::invalid_argument when the discarded Poisson tail is >= 1e-12.
PureState coherent_truncated(Complex alpha, std::uint32_t cutoff);

// (|0> + |alpha>)/K with K^2 = 2 + 2 Re<0|alpha>.
PureState cv_cat(Complex alpha, std::uint32_t cutoff);

// sum_n c_n |n, n, N-2n> on a 3-mode basis; coeffs has floor(N/2)+1 entries.
PureState correlated_three_mode(const CoeffProfile& coeffs, std::uint32_t n_total);

// Applies `gates` in list order (first entry acts first) to
//   sum c_{n1,n2} |n1, n2, N - n1 - n2, env_occupation>
// on a 4-mode basis with cutoff N + env_occupation.
PureState general_probe(const TwoIndexCoeffs& coeffs, std::span<const Gate> gates,
                        std::uint32_t env_occupation = 0);

// Single-mode image sum_n c_n |n> of a two-mode state sum_n c_n |n>_0 |N-n>_1,
// obtained by letting mode 1 act as the phase reference. The result lives on
// a single-mode basis with cutoff max(N, min_cutoff). Throws when the input
// has support outside the N sector.
PureState cv_image(const PureState& two_mode, std::uint32_t min_cutoff = 0);

// Inverse of cv_image: |n> -> |n>_0 |N-n>_1. Amplitudes above N are dropped;
// throws when the dropped mass exceeds `max_dropped`.
PureState ssrc_embed(const PureState& single_mode, std::uint32_t n_total, double max_dropped = 1e-10);

// Mean mode-0 population over n_max = N/2 for a two-mode fixed-N state.
// Small values mark the continuous-variable regime.
double cv_limit_ratio(const PureState& two_mode);

}  // namespace metrolab
