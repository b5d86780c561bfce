#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace rotohull;

TEST(Groups, BuiltinOrders) {
  EXPECT_EQ(shared_group("2O")->order(), 48U);
  EXPECT_EQ(shared_group("O")->order(), 24U);
  EXPECT_EQ(shared_group("C_6")->order(), 6U);
  EXPECT_EQ(shared_group("trivial")->order(), 1U);
  EXPECT_EQ(shared_group("pm")->order(), 2U);
  EXPECT_EQ(shared_group("2C_4")->order(), 8U);
  EXPECT_THROW(builtin_group("Q_8"), ValidationError);
  EXPECT_THROW(builtin_group("2C_3"), ValidationError);
}

TEST(Groups, MultiplicationTablesAreGroups) {
  for (const std::string name : {"2O", "O", "C_5", "pm_3", "2C_2"}) {
    const GroupPtr G = shared_group(name);
    G->validate();
    for (std::size_t a = 0; a < G->order(); ++a)
      for (std::size_t b = 0; b < G->order(); ++b)
        for (std::size_t c = 0; c < G->order(); c += 5) {
          const int ia = static_cast<int>(a), ib = static_cast<int>(b), ic = static_cast<int>(c);
          ASSERT_EQ(G->mul(G->mul(ia, ib), ic), G->mul(ia, G->mul(ib, ic)));
        }
  }
}

TEST(Groups, BinaryOctahedralGeneratorsActAsCubeRotations) {
  const GroupPtr G = shared_group("2O");
  const auto& rot = *G->rotation_image;
  EXPECT_EQ(rot[static_cast<std::size_t>(G->generators[0])], (IntMatrix{{0, -1, 0}, {1, 0, 0}, {0, 0, 1}}));
  EXPECT_EQ(rot[static_cast<std::size_t>(G->generators[1])], (IntMatrix{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}));
  // The kernel of 2O -> O is the center {+1, -1}.
  std::size_t kernel = 0;
  for (std::size_t g = 0; g < G->order(); ++g) kernel += G->quotient->map[g] == G->quotient->target->identity();
  EXPECT_EQ(kernel, 2U);
  EXPECT_EQ(G->element_order(G->generators[0]), 8);
  EXPECT_EQ(G->element_order(G->generators[1]), 6);
  EXPECT_FALSE(G->is_abelian());
}

TEST(Groups, QuaternionArithmetic) {
  const Quaternion i{0, 1, 0, 0}, j{0, 0, 1, 0}, k{0, 0, 0, 1};
  EXPECT_EQ(i * j, k);
  EXPECT_EQ(j * i, -k);
  EXPECT_EQ(i * i, -Quaternion::one());
  for (const auto& q : binary_octahedral_generators()) EXPECT_TRUE(q.is_unit());
  EXPECT_THROW((Quaternion{QSqrt2(mpq_class(3, 5)), QSqrt2(mpq_class(4, 5)), 0, 0}.integer_rotation()),
               ValidationError);
}

TEST(Modules, RejectsInconsistentActions) {
  const GroupPtr C4 = shared_group("C_4");
  EXPECT_THROW(GModule(C4, 1, {IntMatrix{{-1}}, IntMatrix{{1}}}), ValidationError);
  // A generator of order 4 cannot act by an element of order 3.
  EXPECT_THROW(GModule(C4, 2, {IntMatrix{{0, -1}, {1, -1}}}), ValidationError);
  EXPECT_THROW(GModule(C4, 1, {IntMatrix{{2}}}), ValidationError);
}

TEST(Modules, ExteriorSquareOfStandardIsHodgeDual) {
  // Some signed permutation P conjugates the standard action of 2O to its exterior square.
  const GroupPtr G = shared_group("2O");
  const GModule V = GModule::standard(G);
  const GModule W = exterior_power(V, 2);
  bool found = false;
  const auto signed_perms = *builtin_group("2O").quotient->target->rotation_image;
  std::vector<IntMatrix> candidates = signed_perms;
  for (const auto& m : signed_perms) candidates.push_back(-m);
  for (const auto& P : candidates) {
    bool ok = true;
    for (std::size_t i = 0; i < G->generator_count(); ++i) ok = ok && P * V.generator_matrix(i) == W.generator_matrix(i) * P;
    if (ok) {
      found = true;
      EXPECT_EQ(abs_value(determinant(P)), 1);
    }
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(exterior_power(V, 3).generator_matrix(0), IntMatrix::identity(1));
}

TEST(Modules, InvariantAndCoinvariantRationalRanksAgree) {
  for (const auto& [name, M] : rotohull::testing::builtin_modules()) {
    const auto inv = invariants(M, Ring::rationals());
    EXPECT_EQ(inv.rank, coinvariants(M).free_rank()) << name;
    EXPECT_EQ(coinvariants(M), coinvariants(M, true)) << name;
    // The invariant lattice is fixed by every group element.
    const auto Zinv = invariants(M);
    for (std::size_t g = 0; g < M.group()->order(); ++g)
      ASSERT_EQ(M.element_matrix(static_cast<int>(g)) * Zinv.basis, Zinv.basis) << name;
  }
}

TEST(Modules, CoinvariantsOfCubeRotations) {
  const GModule V = GModule::standard(shared_group("O"));
  EXPECT_EQ(coinvariants(V), FGAbelianGroup(0, {2}));
  EXPECT_EQ(invariants(V).rank, 0U);
  EXPECT_EQ(coinvariant_dimension_mod_p(V, 2), 1U);
  EXPECT_EQ(coinvariant_dimension_mod_p(V, 3), 0U);
  const GModule P = pullback_module(V, shared_group("2O"));
  EXPECT_EQ(P, GModule::standard(shared_group("2O")));
  EXPECT_EQ(direct_sum(V, V).rank(), 6U);
  EXPECT_EQ(coinvariants(direct_sum(V, V)), FGAbelianGroup(0, {2, 2}));
}

TEST(Modules, ReductionModP) {
  const GModule V = reduce_mod_p(GModule::standard(shared_group("C_4")), 3);
  EXPECT_EQ(V.ring().name(), "F3");
  EXPECT_EQ(V.generator_matrix(0), (IntMatrix{{0, 2}, {1, 0}}));
  EXPECT_THROW(reduce_mod_p(V, 4), ValidationError);
}
