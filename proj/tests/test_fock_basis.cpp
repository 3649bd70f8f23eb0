#include <algorithm>
#include <stdexcept>

#include <gtest/gtest.h>

#include "metrolab/fock_basis.hpp"
#include "test_support.hpp"

using namespace metrolab;
using metrolab::testing::brute_force_occupations;

TEST(FockBasis, DimensionMatchesStarsAndBars) {
  EXPECT_EQ(FockBasis(1, 5).dim(), 6u);
  EXPECT_EQ(FockBasis(2, 4).dim(), 15u);
  EXPECT_EQ(FockBasis(4, 3).dim(), 35u);
  EXPECT_EQ(FockBasis(4, 3).dim(), brute_force_occupations(4, 3).size());
  EXPECT_EQ(FockBasis(2, 4).dim(), brute_force_occupations(2, 4).size());
}

TEST(FockBasis, SectorSizesSumToDimension) {
  for (int m = 1; m <= 5; ++m) {
    for (int n = 0; n <= 8; ++n) {
      FockBasis basis(m, n);
      std::uint64_t sum = 0;
      for (int s = 0; s <= n; ++s) {
        EXPECT_EQ(basis.sector_dim(static_cast<std::uint32_t>(s)), binomial(s + m - 1, m - 1));
        sum += binomial(s + m - 1, m - 1);
      }
      EXPECT_EQ(sum, basis.dim());
      EXPECT_EQ(basis.dim(), binomial(n + m, m));
    }
  }
}

TEST(FockBasis, OrderingIsGradedLexicographic) {
  for (int m = 1; m <= 4; ++m) {
    FockBasis basis(m, 4);
    auto expected = brute_force_occupations(m, 4);
    std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) {
      std::uint32_t sa = 0, sb = 0;
      for (auto v : a) sa += v;
      for (auto v : b) sb += v;
      return sa != sb ? sa < sb : a < b;
    });
    ASSERT_EQ(expected.size(), basis.dim());
    for (std::size_t k = 0; k < basis.dim(); ++k) {
      EXPECT_EQ(basis.unrank(k), expected[k]) << "index " << k;
      EXPECT_EQ(basis.rank(expected[k]), k);
    }
  }
}

TEST(FockBasis, VacuumRanksToZero) {
  FockBasis basis(4, 6);
  OccupationVector vac(4, 0);
  EXPECT_EQ(basis.rank(vac), 0u);
}

TEST(FockBasis, RoundTripRandomIndices) {
  FockBasis basis(4, 13);
  metrolab::testing::Random rng(7);
  for (int t = 0; t < 1000; ++t) {
    const auto k = static_cast<std::size_t>(rng.integer(0, static_cast<int>(basis.dim()) - 1));
    EXPECT_EQ(basis.rank(basis.unrank(k)), k);
  }
}

TEST(FockBasis, SectorOneHasDistinctIndices) {
  FockBasis basis(2, 2);
  const std::size_t a = basis.rank(OccupationVector{1, 0});
  const std::size_t b = basis.rank(OccupationVector{0, 1});
  EXPECT_NE(a, b);
  for (std::size_t k : {a, b}) {
    EXPECT_GE(k, basis.sector_begin(1));
    EXPECT_LT(k, basis.sector_end(1));
  }
  EXPECT_EQ(basis.sector_begin(1), 1u);
  EXPECT_EQ(basis.sector_end(1), 3u);
}

TEST(FockBasis, SectorsAreContiguous) {
  FockBasis basis(3, 5);
  for (std::uint32_t s = 0; s <= 5; ++s) {
    for (std::size_t k = basis.sector_begin(s); k < basis.sector_end(s); ++k) EXPECT_EQ(basis.total(k), s);
  }
}

TEST(FockBasis, RejectsInvalidInput) {
  EXPECT_THROW(FockBasis(0, 3), std::invalid_argument);
  EXPECT_THROW(FockBasis(2, -1), std::invalid_argument);
  FockBasis basis(2, 3);
  EXPECT_THROW(basis.rank(OccupationVector{2, 2}), std::invalid_argument);
  EXPECT_THROW(basis.rank(OccupationVector{1, 0, 0}), std::invalid_argument);
  EXPECT_THROW(basis.unrank(basis.dim()), std::out_of_range);
}

TEST(FockBasis, EqualityComparesShape) {
  EXPECT_EQ(FockBasis(3, 4), FockBasis(3, 4));
  EXPECT_FALSE(FockBasis(3, 4) == FockBasis(3, 5));
  EXPECT_THROW(require_same_basis(FockBasis(2, 1), FockBasis(1, 1), "test"), BasisMismatch);
}

TEST(Binomial, SmallValuesAndEdges) {
  EXPECT_EQ(binomial(7, 4), 35u);
  EXPECT_EQ(binomial(5, 0), 1u);
  EXPECT_EQ(binomial(3, 5), 0u);
  EXPECT_EQ(binomial(60, 30), 118264581564861424ull);
  EXPECT_EQ(sector_size(4, 3), 20u);
}
