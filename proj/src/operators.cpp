#include "metrolab/operators.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "metrolab/error.hpp"

namespace metrolab {

namespace {

constexpr double kPi = std::numbers::pi;

using Idx = Eigen::Index;

Idx idx(std::size_t k) { return static_cast<Idx>(k); }

void require_mode(const FockBasis& basis, std::size_t mode, const char* context) {
  if (mode >= basis.num_modes()) {
    throw std::invalid_argument(std::string(context) + ": mode index out of range");
  }
}

void require_pair(const FockBasis& basis, const PairAxis& pair, const char* context) {
  require_mode(basis, pair.i, context);
  require_mode(basis, pair.j, context);
}

std::string pair_label(const PairAxis& p) {
  std::ostringstream os;
  os << "J(" << p.i << "," << p.j << ";beta=" << p.beta << ",phi=" << p.phi << ")";
  return os.str();
}

// Block of J_n^{(i,j)} inside total-photon sector s.
Matrix pair_block(const FockBasis& basis, const PairAxis& pair, std::uint32_t s) {
  const std::size_t begin = basis.sector_begin(s);
  const std::size_t n = basis.sector_dim(s);
  Matrix block = Matrix::Zero(idx(n), idx(n));
  const double cz = std::cos(pair.beta);
  const Complex raise = 0.5 * std::sin(pair.beta) * std::polar(1.0, -pair.phi);
  OccupationVector occ;
  for (std::size_t k = 0; k < n; ++k) {
    occ = basis.unrank(begin + k);
    const double ni = occ[pair.i];
    const double nj = occ[pair.j];
    block(idx(k), idx(k)) += cz * 0.5 * (ni - nj);
    if (occ[pair.j] > 0 && raise != Complex{}) {
      // J_+ = a_i^dag a_j moves one photon from j to i.
      ++occ[pair.i];
      --occ[pair.j];
      const std::size_t target = basis.rank(occ) - begin;
      const Complex elem = raise * std::sqrt((ni + 1.0) * nj);
      block(idx(target), idx(k)) += elem;
      block(idx(k), idx(target)) += std::conj(elem);
    }
  }
  return block;
}

// exp(i f(lambda)) for every eigenvalue lambda of a Hermitian block.
template <class F>
Matrix hermitian_function_exp(const Matrix& h, F&& phase) {
  if (h.rows() == 0) return h;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw NumericError("eigendecomposition of generator block failed");
  Vector d(h.rows());
  for (Idx k = 0; k < h.rows(); ++k) d[k] = std::polar(1.0, phase(es.eigenvalues()[k]));
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

template <class F>
UnitaryOp pair_unitary(const FockBasis& basis, const PairAxis& pair, F&& phase) {
  std::vector<Matrix> blocks;
  blocks.reserve(basis.n_total() + 1);
  for (std::uint32_t s = 0; s <= basis.n_total(); ++s) {
    blocks.push_back(hermitian_function_exp(pair_block(basis, pair, s), phase));
  }
  return UnitaryOp(basis, std::move(blocks));
}

Matrix diagonal_number(const FockBasis& basis, std::span<const double> weights, std::span<const std::size_t> modes) {
  const std::size_t n = basis.dim();
  Matrix m = Matrix::Zero(idx(n), idx(n));
  for (std::size_t k = 0; k < n; ++k) {
    double v = 0.0;
    for (std::size_t q = 0; q < modes.size(); ++q) v += weights[q] * basis.occupation(k, modes[q]);
    m(idx(k), idx(k)) = v;
  }
  return m;
}

}  // namespace

// ----------------------------------------------------------------- PairAxis

PairAxis::PairAxis(std::size_t i_, std::size_t j_, double beta_, double phi_) : i(i_), j(j_) {
  if (i == j) throw std::invalid_argument("PairAxis: modes must differ");
  if (!std::isfinite(beta_) || !std::isfinite(phi_)) throw std::invalid_argument("PairAxis: non-finite angle");
  double b = std::fmod(beta_, 2.0 * kPi);
  if (b < 0.0) b += 2.0 * kPi;
  double p = phi_;
  if (b > kPi) {
    b = 2.0 * kPi - b;
    p += kPi;
  }
  p = std::fmod(p, 2.0 * kPi);
  if (p < 0.0) p += 2.0 * kPi;
  if (p >= 2.0 * kPi) p = 0.0;
  if (b == 0.0 || b == kPi) p = 0.0;
  beta = b;
  phi = p;
}

PairAxis PairAxis::x(std::size_t i, std::size_t j) { return PairAxis(i, j, kPi / 2, 0.0); }
PairAxis PairAxis::y(std::size_t i, std::size_t j) { return PairAxis(i, j, kPi / 2, kPi / 2); }
PairAxis PairAxis::z(std::size_t i, std::size_t j) { return PairAxis(i, j, 0.0, 0.0); }

// -------------------------------------------------------------- HermitianOp

HermitianOp::HermitianOp(FockBasis basis, Matrix matrix, std::string label)
    : basis_(std::move(basis)), matrix_(std::move(matrix)), label_(std::move(label)) {
  const auto n = idx(basis_.dim());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw std::invalid_argument("HermitianOp: matrix shape does not match basis dimension");
  }
  if (hermiticity_defect(matrix_) > tol::kHermitian) {
    throw std::invalid_argument("HermitianOp: matrix is not Hermitian");
  }
}

HermitianOp HermitianOp::scaled(double factor, std::string label) const {
  return HermitianOp(basis_, factor * matrix_, label.empty() ? label_ : std::move(label));
}

HermitianOp operator+(const HermitianOp& a, const HermitianOp& b) {
  require_same_basis(a.basis_, b.basis_, "HermitianOp::operator+");
  return HermitianOp(a.basis_, a.matrix_ + b.matrix_, a.label_ + "+" + b.label_);
}

HermitianOp operator-(const HermitianOp& a, const HermitianOp& b) {
  require_same_basis(a.basis_, b.basis_, "HermitianOp::operator-");
  return HermitianOp(a.basis_, a.matrix_ - b.matrix_, a.label_ + "-" + b.label_);
}

bool HermitianOp::conserves_number(double tol) const {
  for (Idx r = 0; r < matrix_.rows(); ++r) {
    const auto sr = basis_.total(static_cast<std::size_t>(r));
    for (Idx c = 0; c < matrix_.cols(); ++c) {
      if (std::abs(matrix_(r, c)) > tol && basis_.total(static_cast<std::size_t>(c)) != sr) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- UnitaryOp

UnitaryOp::UnitaryOp(FockBasis basis, std::vector<Matrix> sector_blocks)
    : basis_(std::move(basis)), blocks_(std::move(sector_blocks)) {
  if (blocks_.size() != basis_.n_total() + 1) {
    throw std::invalid_argument("UnitaryOp: need one block per photon-number sector");
  }
  for (std::uint32_t s = 0; s <= basis_.n_total(); ++s) {
    const auto n = idx(basis_.sector_dim(s));
    if (blocks_[s].rows() != n || blocks_[s].cols() != n) {
      throw std::invalid_argument("UnitaryOp: sector block has wrong shape");
    }
  }
  if (unitarity_defect() > tol::kUnitary) throw NumericError("UnitaryOp: matrix is not unitary");
}

UnitaryOp UnitaryOp::identity(FockBasis basis) {
  std::vector<Matrix> blocks;
  for (std::uint32_t s = 0; s <= basis.n_total(); ++s) {
    const auto n = idx(basis.sector_dim(s));
    blocks.push_back(Matrix::Identity(n, n));
  }
  return UnitaryOp(std::move(basis), std::move(blocks));
}

Matrix UnitaryOp::matrix() const {
  const auto n = idx(basis_.dim());
  Matrix m = Matrix::Zero(n, n);
  for (std::uint32_t s = 0; s <= basis_.n_total(); ++s) {
    const auto b = idx(basis_.sector_begin(s));
    const auto d = idx(basis_.sector_dim(s));
    m.block(b, b, d, d) = blocks_[s];
  }
  return m;
}

UnitaryOp UnitaryOp::adjoint() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) blocks.push_back(b.adjoint());
  return UnitaryOp(basis_, std::move(blocks));
}

double UnitaryOp::unitarity_defect() const {
  double worst = 0.0;
  for (const auto& b : blocks_) {
    if (b.size() == 0) continue;
    const Matrix d = b.adjoint() * b - Matrix::Identity(b.rows(), b.cols());
    worst = std::max(worst, d.cwiseAbs().maxCoeff());
  }
  return worst;
}

UnitaryOp operator*(const UnitaryOp& a, const UnitaryOp& b) {
  require_same_basis(a.basis_, b.basis_, "UnitaryOp::operator*");
  std::vector<Matrix> blocks;
  blocks.reserve(a.blocks_.size());
  for (std::size_t s = 0; s < a.blocks_.size(); ++s) blocks.push_back(a.blocks_[s] * b.blocks_[s]);
  return UnitaryOp(a.basis_, std::move(blocks));
}

PureState apply(const UnitaryOp& u, const PureState& psi) {
  require_same_basis(u.basis(), psi.basis(), "apply");
  const FockBasis& basis = u.basis();
  Vector out(psi.amplitudes().size());
  for (std::uint32_t s = 0; s <= basis.n_total(); ++s) {
    const auto b = idx(basis.sector_begin(s));
    const auto d = idx(basis.sector_dim(s));
    out.segment(b, d) = u.blocks()[s] * psi.amplitudes().segment(b, d);
  }
  return PureState::normalized(basis, std::move(out));
}

MixedState apply(const UnitaryOp& u, const MixedState& rho) {
  require_same_basis(u.basis(), rho.basis(), "apply");
  const FockBasis& basis = u.basis();
  Matrix out(rho.matrix().rows(), rho.matrix().cols());
  for (std::uint32_t s = 0; s <= basis.n_total(); ++s) {
    const auto bs = idx(basis.sector_begin(s));
    const auto ds = idx(basis.sector_dim(s));
    for (std::uint32_t t = 0; t <= basis.n_total(); ++t) {
      const auto bt = idx(basis.sector_begin(t));
      const auto dt = idx(basis.sector_dim(t));
      out.block(bs, bt, ds, dt) = u.blocks()[s] * rho.matrix().block(bs, bt, ds, dt) * u.blocks()[t].adjoint();
    }
  }
  out = (0.5 * (out + out.adjoint())).eval();
  out /= out.trace().real();
  return MixedState(basis, std::move(out));
}

// ---------------------------------------------------------------- operators

LinearOp annihilation(const FockBasis& basis, std::size_t mode) {
  require_mode(basis, mode, "annihilation");
  const auto n = idx(basis.dim());
  Matrix m = Matrix::Zero(n, n);
  OccupationVector occ;
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    occ = basis.unrank(k);
    if (occ[mode] == 0) continue;
    const double amp = std::sqrt(static_cast<double>(occ[mode]));
    --occ[mode];
    m(idx(basis.rank(occ)), idx(k)) = amp;
  }
  return {basis, std::move(m)};
}

LinearOp creation(const FockBasis& basis, std::size_t mode) {
  LinearOp a = annihilation(basis, mode);
  a.matrix = a.matrix.adjoint().eval();
  return a;
}

HermitianOp number_op(const FockBasis& basis, std::size_t mode) {
  require_mode(basis, mode, "number_op");
  const double one = 1.0;
  return HermitianOp(basis, diagonal_number(basis, {&one, 1}, {&mode, 1}), "n" + std::to_string(mode));
}

HermitianOp total_number(const FockBasis& basis, std::span<const std::size_t> modes) {
  std::string label = "n(";
  for (auto m : modes) {
    require_mode(basis, m, "total_number");
    label += std::to_string(m) + (m == modes.back() ? "" : "+");
  }
  const std::vector<double> ones(modes.size(), 1.0);
  return HermitianOp(basis, diagonal_number(basis, ones, modes), label + ")");
}

HermitianOp schwinger_J(const FockBasis& basis, const PairAxis& pair) {
  require_pair(basis, pair, "schwinger_J");
  const auto n = idx(basis.dim());
  Matrix m = Matrix::Zero(n, n);
  for (std::uint32_t s = 0; s <= basis.n_total(); ++s) {
    const auto b = idx(basis.sector_begin(s));
    const auto d = idx(basis.sector_dim(s));
    m.block(b, b, d, d) = pair_block(basis, pair, s);
  }
  return HermitianOp(basis, std::move(m), pair_label(pair));
}

UnitaryOp rotation_unitary(const FockBasis& basis, const PairAxis& pair, double xi) {
  require_pair(basis, pair, "rotation_unitary");
  return pair_unitary(basis, pair, [xi](double lambda) { return xi * lambda; });
}

namespace {

template <class F>
PureState apply_pair_function(const PureState& psi, const PairAxis& pair, F&& phase) {
  const FockBasis& basis = psi.basis();
  Vector out = psi.amplitudes();
  for (std::uint32_t s = 0; s <= basis.n_total(); ++s) {
    const auto b = idx(basis.sector_begin(s));
    const auto d = idx(basis.sector_dim(s));
    if (out.segment(b, d).squaredNorm() == 0.0) continue;
    out.segment(b, d) = hermitian_function_exp(pair_block(basis, pair, s), phase) * out.segment(b, d);
  }
  return PureState::normalized(basis, std::move(out));
}

}  // namespace

PureState apply_rotation(const PureState& psi, const PairAxis& pair, double xi) {
  require_pair(psi.basis(), pair, "apply_rotation");
  return apply_pair_function(psi, pair, [xi](double lambda) { return xi * lambda; });
}

PureState apply_spin_squeeze(const PureState& psi, const PairAxis& pair, double gamma) {
  require_pair(psi.basis(), pair, "apply_spin_squeeze");
  return apply_pair_function(psi, pair, [gamma](double lambda) { return gamma * lambda * lambda; });
}

UnitaryOp spin_squeeze_unitary(const FockBasis& basis, const PairAxis& pair, double gamma) {
  require_pair(basis, pair, "spin_squeeze_unitary");
  return pair_unitary(basis, pair, [gamma](double lambda) { return gamma * lambda * lambda; });
}

HermitianOp quadrature_p(const FockBasis& basis, std::size_t mode) {
  const LinearOp a = annihilation(basis, mode);
  Matrix p = 0.5 * kI * (a.matrix - a.matrix.adjoint());
  return HermitianOp(basis, std::move(p), "p" + std::to_string(mode));
}

std::pair<HermitianOp, HermitianOp> weighted_number(const FockBasis& basis, double zeta) {
  if (basis.num_modes() < 2) throw std::invalid_argument("weighted_number: basis needs at least 2 modes");
  const std::size_t modes[2] = {0, 1};
  const double w[2] = {std::cos(zeta), std::sin(zeta)};
  const double w_perp[2] = {std::sin(zeta), -std::cos(zeta)};
  return {HermitianOp(basis, diagonal_number(basis, w, modes), "n_zeta"),
          HermitianOp(basis, diagonal_number(basis, w_perp, modes), "n_zeta_perp")};
}

HermitianOp weighted_number(const FockBasis& basis, std::span<const double> weights,
                            std::span<const std::size_t> modes) {
  if (weights.size() != modes.size()) throw std::invalid_argument("weighted_number: weights/modes size mismatch");
  for (auto m : modes) require_mode(basis, m, "weighted_number");
  return HermitianOp(basis, diagonal_number(basis, weights, modes), "n_w");
}

Matrix sector_block(const FockBasis& basis, const Matrix& m, std::uint32_t row_sector, std::uint32_t col_sector) {
  return m.block(idx(basis.sector_begin(row_sector)), idx(basis.sector_begin(col_sector)),
                 idx(basis.sector_dim(row_sector)), idx(basis.sector_dim(col_sector)));
}

}  // namespace metrolab
