#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "metrolab/error.hpp"

namespace metrolab {

// Photons per mode. Entries are non-negative by construction.
using OccupationVector = std::vector<std::uint32_t>;

// Enumeration of all M-mode occupation vectors with total photon number
// at most `n_total`.
//
// Ordering is graded lexicographic: ascending total photon number, then
// ascending lexicographic order within one sector. Every sector therefore
// occupies a contiguous block [sector_begin(s), sector_end(s)), and the vacuum
// has index 0.
//
// The object is an immutable value; copies share the underlying table.
class FockBasis {
 public:
  // Throws std::invalid_argument for num_modes == 0, negative cutoff, or a
  // dimension beyond kMaxTableDim.
  FockBasis(int num_modes, int n_total);

  static constexpr std::size_t kMaxTableDim = 1'000'000;

  std::size_t num_modes() const { return impl_->num_modes; }
  std::uint32_t n_total() const { return impl_->n_total; }
  std::size_t dim() const { return impl_->table.size() / impl_->num_modes; }

  // Combinatorial ranking, O(M). Throws std::invalid_argument for a wrong
  // mode count or an occupation above the cutoff.
  std::size_t rank(std::span<const std::uint32_t> occ) const;
  // Table lookup. Throws std::out_of_range for index >= dim.
  OccupationVector unrank(std::size_t index) const;
  // Zero-copy view of the occupation vector at `index`.
  std::span<const std::uint32_t> occupation(std::size_t index) const;
  std::uint32_t occupation(std::size_t index, std::size_t mode) const {
    return impl_->table[index * impl_->num_modes + mode];
  }
  std::uint32_t total(std::size_t index) const;

  std::size_t sector_begin(std::uint32_t sector) const;
  std::size_t sector_end(std::uint32_t sector) const;
  std::size_t sector_dim(std::uint32_t sector) const {
    return sector_end(sector) - sector_begin(sector);
  }

  std::string describe() const;

  friend bool operator==(const FockBasis& a, const FockBasis& b) {
    return a.impl_ == b.impl_ ||
           (a.impl_->num_modes == b.impl_->num_modes && a.impl_->n_total == b.impl_->n_total);
  }

 private:
  struct Impl {
    std::size_t num_modes = 0;
    std::uint32_t n_total = 0;
    std::vector<std::uint32_t> table;         // dim * num_modes, row-major
    std::vector<std::size_t> sector_offsets;  // n_total + 2 entries
    std::vector<std::vector<std::uint64_t>> binom;
  };
  std::shared_ptr<const Impl> impl_;
};

// Binomial coefficient C(n, k) as an exact integer; 0 when k > n.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Number of occupation vectors over `modes` modes with total exactly `photons`.
std::uint64_t sector_size(std::uint64_t modes, std::uint64_t photons);

// Throws BasisMismatch with `context` in the message when a != b.
void require_same_basis(const FockBasis& a, const FockBasis& b, const char* context);

}  // namespace metrolab
