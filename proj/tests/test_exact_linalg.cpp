#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace rotohull;
using rotohull::testing::random_matrix;

namespace {

// gcd of all k x k minors, by brute force over row and column subsets.
Int determinantal_divisor(const IntMatrix& A, std::size_t k) {
  Int g = 0;
  for (const auto& rows : detail::subsets(A.rows(), k))
    for (const auto& cols : detail::subsets(A.cols(), k)) g = gcd(g, determinant(detail::minor_matrix(A, rows, cols)));
  return g;
}

bool is_unimodular(const IntMatrix& m) {
  const Int d = determinant(m);
  return d == 1 || d == -1;
}

}  // namespace

TEST(Smith, RoundTripOnRandomMatrices) {
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = dim(rng), c = dim(rng);
    const IntMatrix A = random_matrix(rng, r, c, trial % 3 == 0 ? 40 : 6);
    const SmithForm S = smith_normal_form(A);
    ASSERT_TRUE(is_unimodular(S.U));
    ASSERT_TRUE(is_unimodular(S.V));
    const IntMatrix D = S.U * A * S.V;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        if (i != j) {
          ASSERT_EQ(D(i, j), 0);
        } else if (i < S.rank()) {
          ASSERT_EQ(abs_value(D(i, i)), S.invariant_factors[i]);
        } else {
          ASSERT_EQ(D(i, i), 0);
        }
      }
    for (std::size_t i = 0; i + 1 < S.rank(); ++i) ASSERT_TRUE(divides(S.invariant_factors[i], S.invariant_factors[i + 1]));
    ASSERT_EQ(S.rank(), rational_rank(A));
  }
}

TEST(Smith, InvariantFactorsMatchDeterminantalDivisors) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const IntMatrix A = random_matrix(rng, 4, 4, 5);
    const auto f = invariant_factors(A);
    Int prefix = 1;
    for (std::size_t k = 1; k <= 4; ++k) {
      const Int dk = determinantal_divisor(A, k);
      if (k <= f.size()) {
        prefix *= f[k - 1];
        ASSERT_EQ(dk, prefix) << A;
      } else {
        ASSERT_EQ(dk, 0) << A;
      }
    }
  }
}

TEST(Smith, CokernelOfKnownMatrices) {
  EXPECT_EQ(cokernel(IntMatrix{{2, 0}, {0, 3}}), FGAbelianGroup(0, {6}));
  EXPECT_EQ(cokernel(IntMatrix{{2, 4}, {6, 8}}), FGAbelianGroup(0, {2, 4}));
  EXPECT_EQ(cokernel(IntMatrix{{1, 0, 0}}), FGAbelianGroup(0, std::vector<Int>{}));
  EXPECT_EQ(cokernel(IntMatrix(3, 1)), FGAbelianGroup::free(3));
}

TEST(Smith, LargeEntriesStayExact) {
  IntMatrix A{{1, 0}, {0, 1}};
  A(0, 0) = Int("340282366920938463463374607431768211456");  // 2^128
  A(1, 1) = Int("6");
  const auto f = invariant_factors(A);
  ASSERT_EQ(f.size(), 2U);
  EXPECT_EQ(f[0], 2);
  EXPECT_EQ(f[1], Int("1020847100762815390390123822295304634368"));  // 3 * 2^128
}

TEST(AbelianGroup, RenderingAndParsing) {
  const FGAbelianGroup g(2, {2, 4});
  EXPECT_EQ(g.to_string(), "Z^2 + Z/2 + Z/4");
  EXPECT_EQ(FGAbelianGroup(0, {48, 48, 16, 16}).to_compact(), "16^2+48^2");
  EXPECT_EQ(FGAbelianGroup(0, {12}).to_string(true), "Z/4 + Z/3");
  EXPECT_EQ(FGAbelianGroup(0, {6, 2}), FGAbelianGroup(0, {2, 2, 3}));
  EXPECT_EQ(parse_compact_group("2+4^2"), FGAbelianGroup(0, {2, 4, 4}));
  EXPECT_EQ(parse_compact_group("Z^4"), FGAbelianGroup::free(4));
  EXPECT_EQ(g.p_rank(2), 2U);
  EXPECT_EQ(g.tensor_dimension(2), 4U);
  EXPECT_EQ(FGAbelianGroup::free(0).to_string(), "0");
}

TEST(Lattice, KernelIsSaturatedAndComplete) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 80; ++trial) {
    const IntMatrix A = random_matrix(rng, 3, 6, 4);
    const IntMatrix K = kernel_basis(A);
    ASSERT_TRUE((A * K).is_zero());
    ASSERT_EQ(K.cols(), 6 - rational_rank(A));
    // Saturation: the kernel basis extends to a basis of Z^6, so its invariant factors are all one.
    for (const auto& f : invariant_factors(K)) ASSERT_EQ(f, 1);
  }
}

TEST(Lattice, HermiteKernelAgreesWithPivotKernel) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const IntMatrix A = random_matrix(rng, 2, 5, 7);
    const IntMatrix K1 = kernel_basis(A);
    const auto rows = detail::hermite_kernel(A);
    ASSERT_EQ(rows.size(), K1.cols());
    for (const auto& v : rows) ASSERT_TRUE(lattice_membership(K1, v).has_value());
    for (std::size_t j = 0; j < K1.cols(); ++j) ASSERT_TRUE(lattice_membership(IntMatrix::from_columns(rows, 5), K1.column(j)).has_value());
  }
}

TEST(Lattice, MembershipRejectsNonLatticeVectors) {
  const IntMatrix B{{2, 0}, {0, 3}};
  EXPECT_TRUE(lattice_membership(B, IntVector{Int(4), Int(-3)}).has_value());
  EXPECT_FALSE(lattice_membership(B, IntVector{Int(1), Int(0)}).has_value());
}

TEST(Ranks, ModularAndRationalRanks) {
  const IntMatrix A{{2, 0}, {0, 3}};
  EXPECT_EQ(rational_rank(A), 2U);
  EXPECT_EQ(rank_mod_p(A, 2), 1U);
  EXPECT_EQ(rank_mod_p(A, 3), 1U);
  EXPECT_EQ(rank_mod_p(A, 5), 2U);
  EXPECT_TRUE(is_prime(97));
  EXPECT_FALSE(is_prime(91));
}

TEST(ChainComplex, UniversalCoefficientsOnRandomComplexes) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    // d1 d0 = 0 by taking d1 from the left kernel of d0.
    const IntMatrix d0 = random_matrix(rng, 4, 2, 3) * random_matrix(rng, 2, 3, 3);
    const IntMatrix left = kernel_basis(d0.transpose()).transpose();
    const IntMatrix d1 = random_matrix(rng, 3, left.rows(), 3) * left;
    const IntChainComplex C({3, 4, 3}, {d0, d1});
    C.check_composites();
    const auto H = complex_cohomology(C);
    for (long p : {2L, 3L, 5L}) {
      const auto dims = complex_cohomology_mod_p(C, p);
      for (std::size_t n = 0; n < 3; ++n) ASSERT_EQ(dims[n], universal_coefficient_dimension(H, n, p));
    }
  }
}

TEST(ChainComplex, RejectsBadShapes) {
  EXPECT_THROW(IntChainComplex({2, 2}, {IntMatrix(3, 2)}), ValidationError);
  const IntChainComplex C({1, 1, 1}, {IntMatrix{{1}}, IntMatrix{{1}}});
  EXPECT_THROW(C.check_composites(), ValidationError);
}
