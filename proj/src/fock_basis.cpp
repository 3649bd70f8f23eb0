#include "metrolab/fock_basis.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

#include "metrolab/error.hpp"

namespace metrolab {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays exact because C(n-k+i, i) is an integer.
    const std::uint64_t num = n - k + i;
    if (result > std::numeric_limits<std::uint64_t>::max() / num) {
      throw std::overflow_error("binomial coefficient overflows 64 bits");
    }
    result = result * num / i;
  }
  return result;
}

std::uint64_t sector_size(std::uint64_t modes, std::uint64_t photons) {
  if (modes == 0) return photons == 0 ? 1 : 0;
  return binomial(photons + modes - 1, modes - 1);
}

namespace {

void enumerate_sector(std::size_t modes, std::uint32_t remaining, std::vector<std::uint32_t>& prefix,
                      std::vector<std::uint32_t>& out) {
  if (prefix.size() + 1 == modes) {
    out.insert(out.end(), prefix.begin(), prefix.end());
    out.push_back(remaining);
    return;
  }
  for (std::uint32_t v = 0; v <= remaining; ++v) {
    prefix.push_back(v);
    enumerate_sector(modes, remaining - v, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

FockBasis::FockBasis(int num_modes, int n_total) {
  if (num_modes < 1) throw std::invalid_argument("FockBasis: num_modes must be >= 1");
  if (n_total < 0) throw std::invalid_argument("FockBasis: n_total must be >= 0");

  auto impl = std::make_shared<Impl>();
  impl->num_modes = static_cast<std::size_t>(num_modes);
  impl->n_total = static_cast<std::uint32_t>(n_total);

  const std::uint64_t total_dim = binomial(impl->n_total + impl->num_modes, impl->num_modes);
  if (total_dim > kMaxTableDim) {
    std::ostringstream msg;
    msg << "FockBasis: dimension " << total_dim << " exceeds table limit " << kMaxTableDim;
    throw std::invalid_argument(msg.str());
  }

  const std::size_t top = impl->n_total + impl->num_modes;
  impl->binom.assign(top + 1, std::vector<std::uint64_t>(impl->num_modes + 1, 0));
  for (std::size_t n = 0; n <= top; ++n) {
    for (std::size_t k = 0; k <= impl->num_modes; ++k) impl->binom[n][k] = binomial(n, k);
  }

  impl->table.reserve(total_dim * impl->num_modes);
  impl->sector_offsets.push_back(0);
  std::vector<std::uint32_t> prefix;
  for (std::uint32_t s = 0; s <= impl->n_total; ++s) {
    enumerate_sector(impl->num_modes, s, prefix, impl->table);
    impl->sector_offsets.push_back(impl->table.size() / impl->num_modes);
  }
  impl_ = std::move(impl);
}

std::size_t FockBasis::rank(std::span<const std::uint32_t> occ) const {
  const Impl& b = *impl_;
  if (occ.size() != b.num_modes) {
    throw std::invalid_argument("FockBasis::rank: occupation has wrong mode count");
  }
  std::uint64_t s = 0;
  for (auto v : occ) s += v;
  if (s > b.n_total) throw std::invalid_argument("FockBasis::rank: occupation exceeds cutoff");

  std::size_t index = b.sector_offsets[s];
  std::uint64_t remaining = s;
  for (std::size_t i = 0; i + 1 < b.num_modes; ++i) {
    // Vectors whose i-th entry is below occ[i], summed by hockey stick:
    // sum_{v < a} C(r - v + k - 1, k - 1) = C(r + k, k) - C(r - a + k, k).
    const std::size_t k = b.num_modes - 1 - i;
    const std::uint64_t a = occ[i];
    index += b.binom[remaining + k][k] - b.binom[remaining - a + k][k];
    remaining -= a;
  }
  return index;
}

OccupationVector FockBasis::unrank(std::size_t index) const {
  auto view = occupation(index);
  return OccupationVector(view.begin(), view.end());
}

std::span<const std::uint32_t> FockBasis::occupation(std::size_t index) const {
  if (index >= dim()) throw std::out_of_range("FockBasis::unrank: index out of range");
  return {impl_->table.data() + index * impl_->num_modes, impl_->num_modes};
}

std::uint32_t FockBasis::total(std::size_t index) const {
  std::uint32_t s = 0;
  for (auto v : occupation(index)) s += v;
  return s;
}

std::size_t FockBasis::sector_begin(std::uint32_t sector) const {
  if (sector > impl_->n_total) throw std::out_of_range("FockBasis: sector above cutoff");
  return impl_->sector_offsets[sector];
}

std::size_t FockBasis::sector_end(std::uint32_t sector) const {
  if (sector > impl_->n_total) throw std::out_of_range("FockBasis: sector above cutoff");
  return impl_->sector_offsets[sector + 1];
}

std::string FockBasis::describe() const {
  std::ostringstream os;
  os << "FockBasis(M=" << num_modes() << ", N=" << n_total() << ", dim=" << dim() << ")";
  return os.str();
}

void require_same_basis(const FockBasis& a, const FockBasis& b, const char* context) {
  if (!(a == b)) {
    throw BasisMismatch(std::string(context) + ": " + a.describe() + " vs " + b.describe());
  }
}

}  // namespace metrolab
