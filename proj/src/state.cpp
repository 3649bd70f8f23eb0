#include "metrolab/state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "metrolab/error.hpp"

namespace metrolab {

namespace {

std::vector<std::size_t> canonical_keep(std::span<const std::size_t> keep, std::size_t num_modes) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  std::vector<std::size_t> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("partial_trace: keep set has duplicate modes");
  }
  if (sorted.back() >= num_modes) throw std::invalid_argument("partial_trace: mode index out of range");
  return sorted;
}

struct TraceLayout {
  FockBasis reduced;
  // buckets[t] lists (reduced index, full index) pairs sharing traced occupation t.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> buckets;
};

TraceLayout trace_layout(const FockBasis& full, const std::vector<std::size_t>& keep) {
  const std::size_t m = full.num_modes();
  const int n = static_cast<int>(full.n_total());
  std::vector<std::size_t> traced;
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::binary_search(keep.begin(), keep.end(), i)) traced.push_back(i);
  }
  TraceLayout layout{FockBasis(static_cast<int>(keep.size()), n), {}};
  if (traced.empty()) {
    layout.buckets.resize(1);
    for (std::size_t k = 0; k < full.dim(); ++k) layout.buckets[0].emplace_back(k, k);
    return layout;
  }
  const FockBasis traced_basis(static_cast<int>(traced.size()), n);
  layout.buckets.resize(traced_basis.dim());
  OccupationVector kept_occ(keep.size());
  OccupationVector traced_occ(traced.size());
  for (std::size_t k = 0; k < full.dim(); ++k) {
    auto occ = full.occupation(k);
    for (std::size_t i = 0; i < keep.size(); ++i) kept_occ[i] = occ[keep[i]];
    for (std::size_t i = 0; i < traced.size(); ++i) traced_occ[i] = occ[traced[i]];
    layout.buckets[traced_basis.rank(traced_occ)].emplace_back(layout.reduced.rank(kept_occ), k);
  }
  return layout;
}

std::vector<double> weights_by_sector(const FockBasis& basis, const RealVector& probs) {
  std::vector<double> w(basis.n_total() + 1, 0.0);
  for (std::uint32_t s = 0; s <= basis.n_total(); ++s) {
    for (std::size_t k = basis.sector_begin(s); k < basis.sector_end(s); ++k) w[s] += probs[k];
  }
  return w;
}

Matrix psd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw NumericError("psd_sqrt: eigendecomposition failed");
  const RealVector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<std::size_t> cutoff_map(const FockBasis& from, const FockBasis& to) {
  std::vector<std::size_t> map(from.dim());
  for (std::size_t k = 0; k < from.dim(); ++k) map[k] = to.rank(from.occupation(k));
  return map;
}

}  // namespace

// ---------------------------------------------------------------- PureState

PureState::PureState(FockBasis basis, Vector amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != basis_.dim()) {
    throw std::invalid_argument("PureState: amplitude count does not match basis dimension");
  }
  const double norm = amplitudes_.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > tol::kInputNorm) {
    std::ostringstream msg;
    msg << "PureState: amplitudes not normalized (norm = " << norm << ")";
    throw std::invalid_argument(msg.str());
  }
  amplitudes_ /= norm;
}

PureState PureState::normalized(FockBasis basis, Vector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("PureState::normalized: zero or non-finite vector");
  }
  amplitudes /= norm;
  return PureState(std::move(basis), std::move(amplitudes));
}

PureState PureState::fock(FockBasis basis, std::span<const std::uint32_t> occ) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
  v[static_cast<Eigen::Index>(basis.rank(occ))] = 1.0;
  return PureState(std::move(basis), std::move(v));
}

std::vector<double> PureState::sector_weights() const {
  return weights_by_sector(basis_, amplitudes_.cwiseAbs2());
}

// --------------------------------------------------------------- MixedState

MixedState::MixedState(FockBasis basis, Matrix matrix, Trusted)
    : basis_(std::move(basis)), matrix_(std::move(matrix)) {
  matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
}

MixedState::MixedState(FockBasis basis, Matrix matrix) : basis_(std::move(basis)), matrix_(std::move(matrix)) {
  const auto n = static_cast<Eigen::Index>(basis_.dim());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw std::invalid_argument("MixedState: matrix shape does not match basis dimension");
  }
  if (hermiticity_defect(matrix_) > tol::kHermitian) {
    throw std::invalid_argument("MixedState: matrix is not Hermitian");
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr - 1.0) > tol::kTrace) throw std::invalid_argument("MixedState: trace is not 1");
  require_dense_dim(basis_.dim(), "MixedState");
  matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("MixedState: eigendecomposition failed");
  if (es.eigenvalues().minCoeff() < -tol::kNegativeEigen) {
    throw std::invalid_argument("MixedState: matrix is not positive semidefinite");
  }
}

MixedState MixedState::from_pure(const PureState& psi) {
  const Vector& v = psi.amplitudes();
  return MixedState(psi.basis(), v * v.adjoint(), Trusted{});
}

MixedState MixedState::maximally_mixed(FockBasis basis) {
  const auto n = static_cast<Eigen::Index>(basis.dim());
  return MixedState(std::move(basis), Matrix::Identity(n, n) / static_cast<double>(n), Trusted{});
}

double MixedState::purity() const { return (matrix_ * matrix_).trace().real(); }

std::vector<double> MixedState::sector_weights() const {
  return weights_by_sector(basis_, matrix_.diagonal().real());
}

// ----------------------------------------------------------------- fidelity

double fidelity(const PureState& a, const PureState& b) {
  require_same_basis(a.basis(), b.basis(), "fidelity");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

double fidelity(const PureState& a, const MixedState& b) {
  require_same_basis(a.basis(), b.basis(), "fidelity");
  const Vector& v = a.amplitudes();
  return std::clamp(v.dot(b.matrix() * v).real(), 0.0, 1.0);
}

double fidelity(const MixedState& a, const PureState& b) { return fidelity(b, a); }

double fidelity(const MixedState& a, const MixedState& b) {
  require_same_basis(a.basis(), b.basis(), "fidelity");
  require_dense_dim(a.basis().dim(), "fidelity");
  const Matrix sa = psd_sqrt(a.matrix());
  const Matrix inner = sa * b.matrix() * sa;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("fidelity: eigendecomposition failed");
  const double root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(root * root, 0.0, 1.0);
}

// ------------------------------------------------------------ partial trace

MixedState partial_trace(const PureState& state, std::span<const std::size_t> keep) {
  const auto kept = canonical_keep(keep, state.basis().num_modes());
  const TraceLayout layout = trace_layout(state.basis(), kept);
  const auto n = static_cast<Eigen::Index>(layout.reduced.dim());
  Matrix rho = Matrix::Zero(n, n);
  const Vector& psi = state.amplitudes();
  for (const auto& bucket : layout.buckets) {
    for (const auto& [ri, ki] : bucket) {
      const Complex ai = psi[static_cast<Eigen::Index>(ki)];
      if (ai == Complex{}) continue;
      for (const auto& [rj, kj] : bucket) {
        rho(static_cast<Eigen::Index>(ri), static_cast<Eigen::Index>(rj)) +=
            ai * std::conj(psi[static_cast<Eigen::Index>(kj)]);
      }
    }
  }
  return MixedState(layout.reduced, std::move(rho), MixedState::Trusted{});
}

MixedState partial_trace(const MixedState& state, std::span<const std::size_t> keep) {
  const auto kept = canonical_keep(keep, state.basis().num_modes());
  const TraceLayout layout = trace_layout(state.basis(), kept);
  const auto n = static_cast<Eigen::Index>(layout.reduced.dim());
  Matrix rho = Matrix::Zero(n, n);
  const Matrix& full = state.matrix();
  for (const auto& bucket : layout.buckets) {
    for (const auto& [ri, ki] : bucket) {
      for (const auto& [rj, kj] : bucket) {
        rho(static_cast<Eigen::Index>(ri), static_cast<Eigen::Index>(rj)) +=
            full(static_cast<Eigen::Index>(ki), static_cast<Eigen::Index>(kj));
      }
    }
  }
  return MixedState(layout.reduced, std::move(rho), MixedState::Trusted{});
}

// ----------------------------------------------------------- tensor product

namespace {

std::vector<std::size_t> product_index(const FockBasis& a, const FockBasis& b, const FockBasis& ab) {
  std::vector<std::size_t> index(a.dim() * b.dim());
  OccupationVector occ(ab.num_modes());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    auto oa = a.occupation(i);
    std::copy(oa.begin(), oa.end(), occ.begin());
    for (std::size_t j = 0; j < b.dim(); ++j) {
      auto ob = b.occupation(j);
      std::copy(ob.begin(), ob.end(), occ.begin() + static_cast<std::ptrdiff_t>(a.num_modes()));
      index[i * b.dim() + j] = ab.rank(occ);
    }
  }
  return index;
}

FockBasis product_basis(const FockBasis& a, const FockBasis& b) {
  return FockBasis(static_cast<int>(a.num_modes() + b.num_modes()), static_cast<int>(a.n_total() + b.n_total()));
}

}  // namespace

PureState tensor_product(const PureState& a, const PureState& b) {
  const FockBasis ab = product_basis(a.basis(), b.basis());
  const auto index = product_index(a.basis(), b.basis(), ab);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(ab.dim()));
  const std::size_t nb = b.basis().dim();
  for (std::size_t i = 0; i < a.basis().dim(); ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      v[static_cast<Eigen::Index>(index[i * nb + j])] =
          a.amplitudes()[static_cast<Eigen::Index>(i)] * b.amplitudes()[static_cast<Eigen::Index>(j)];
    }
  }
  return PureState(ab, std::move(v));
}

MixedState tensor_product(const MixedState& a, const MixedState& b) {
  const FockBasis ab = product_basis(a.basis(), b.basis());
  require_dense_dim(ab.dim(), "tensor_product");
  const auto index = product_index(a.basis(), b.basis(), ab);
  const std::size_t na = a.basis().dim();
  const std::size_t nb = b.basis().dim();
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(ab.dim()), static_cast<Eigen::Index>(ab.dim()));
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      for (std::size_t k = 0; k < na; ++k)
        for (std::size_t l = 0; l < nb; ++l) {
          m(static_cast<Eigen::Index>(index[i * nb + j]), static_cast<Eigen::Index>(index[k * nb + l])) =
              a.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) *
              b.matrix()(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l));
        }
  return MixedState(ab, std::move(m), MixedState::Trusted{});
}

// ----------------------------------------------------------- cutoff changes

PureState extend_cutoff(const PureState& state, std::uint32_t n_total) {
  if (n_total < state.basis().n_total()) throw std::invalid_argument("extend_cutoff: cutoff would shrink");
  const FockBasis target(static_cast<int>(state.basis().num_modes()), static_cast<int>(n_total));
  const auto map = cutoff_map(state.basis(), target);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(target.dim()));
  for (std::size_t k = 0; k < map.size(); ++k) {
    v[static_cast<Eigen::Index>(map[k])] = state.amplitudes()[static_cast<Eigen::Index>(k)];
  }
  return PureState(target, std::move(v));
}

MixedState extend_cutoff(const MixedState& state, std::uint32_t n_total) {
  if (n_total < state.basis().n_total()) throw std::invalid_argument("extend_cutoff: cutoff would shrink");
  const FockBasis target(static_cast<int>(state.basis().num_modes()), static_cast<int>(n_total));
  require_dense_dim(target.dim(), "extend_cutoff");
  const auto map = cutoff_map(state.basis(), target);
  const auto n = static_cast<Eigen::Index>(target.dim());
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < map.size(); ++i)
    for (std::size_t j = 0; j < map.size(); ++j)
      m(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j])) =
          state.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return MixedState(target, std::move(m));
}

// ------------------------------------------------------------ boundary mass

namespace {
double top_sectors(const std::vector<double>& w) {
  double mass = w.back();
  if (w.size() >= 2) mass += w[w.size() - 2];
  return mass;
}
}  // namespace

double boundary_mass(const PureState& state) { return top_sectors(state.sector_weights()); }
double boundary_mass(const MixedState& state) { return top_sectors(state.sector_weights()); }

void require_small_boundary_mass(double mass, double limit, const char* context) {
  if (mass > limit) {
    std::ostringstream msg;
    msg << context << ": boundary-sector mass " << mass << " exceeds " << limit
        << "; raise the photon cutoff";
    throw NumericError(msg.str());
  }
}

}  // namespace metrolab
