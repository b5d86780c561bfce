#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace rotohull;
using namespace rotohull::testing;

TEST(Presentations, TextRoundTrip) {
  const auto P = parse_presentation("# torus knot\ngenerators: a b\na a a B B\nb^2 A^-3\n");
  EXPECT_EQ(P.generators, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(P.relators[1], (Word{2, 2, 1, 1, 1}));
  const auto Q = parse_presentation(P.to_text());
  EXPECT_EQ(Q.relators, P.relators);
  EXPECT_THROW(parse_presentation("a b\n"), ValidationError);
  EXPECT_THROW(parse_presentation("generators: a\nb\n"), ValidationError);
  EXPECT_THROW(parse_presentation("generators: A\n"), ValidationError);
}

TEST(Presentations, CosetEnumerationFindsGroupOrders) {
  // <a, b | a^2, b^3, (ab)^4> is the octahedral rotation group.
  EXPECT_EQ(enumerate_cosets(2, {{1, 1}, {2, 2, 2}, {1, 2, 1, 2, 1, 2, 1, 2}}), std::optional<std::size_t>(24));
  EXPECT_EQ(enumerate_cosets(1, {{1, 1, 1, 1, 1}}), std::optional<std::size_t>(5));
  EXPECT_FALSE(enumerate_cosets(2, {{1, 2, -1, -2}}, 500).has_value());
}

TEST(Presentations, FiniteGroupPresentationsDefineTheGroup) {
  for (const std::string name : {"O", "2O", "C_6", "pm_3", "2C_4"}) {
    const GroupPtr G = shared_group(name);
    const auto P = finite_group_presentation(*G);
    EXPECT_EQ(enumerate_cosets(P.generator_count(), P.relators), std::optional<std::size_t>(G->order())) << name;
    EXPECT_EQ(abelianization(P), finite_abelianization(*G)) << name;
  }
  const auto S3 = symmetric_group_3();
  EXPECT_EQ(finite_abelianization(*S3), FGAbelianGroup::cyclic(2));
}

TEST(CountHoms, FreeGroupIntoCyclic) {
  GroupPresentation F2;
  F2.generators = {"a", "b"};
  EXPECT_EQ(count_homs(F2, *shared_group("C_2")), 4U);
  EXPECT_EQ(count_homs(F2, *symmetric_group_3()), 36U);
}

TEST(CountHoms, MatchesBruteForceOnRandomPresentations) {
  std::mt19937 rng(1234);
  const std::vector<GroupPtr> targets{shared_group("C_2"), shared_group("C_3"), shared_group("C_4"), shared_group("C_5"),
                                      shared_group("C_6"), symmetric_group_3()};
  for (int trial = 0; trial < 5; ++trial) {
    const auto P = random_presentation(rng);
    for (const auto& S : targets) EXPECT_EQ(count_homs(P, *S), brute_force_homs(P, *S)) << P.to_text() << S->name;
  }
}

TEST(CountHoms, BudgetIsEnforced) {
  GroupPresentation P;
  for (int i = 0; i < 6; ++i) P.generators.push_back(std::string(1, static_cast<char>('a' + i)));
  EXPECT_THROW(count_homs(P, *shared_group("2O")), ValidationError);
  EXPECT_EQ(count_homs(P, *shared_group("C_2"), 64), 64U);
}

TEST(Extensions, SturmianCubeAbelianization) {
  const auto P = extension_presentation(sturmian_cube_extension());
  EXPECT_EQ(P.generator_count(), 8U);
  EXPECT_TRUE(P.quotient_map_is_homomorphism());
  // Kernel abelianization Z^6 = H_1 of three circles-wedges, coinvariants over O, plus O^ab.
  const GModule Z6 = builtin_model("sturmian-cube").degree(1);
  const FGAbelianGroup expected = coinvariants(Z6) + finite_abelianization(*shared_group("O"));
  EXPECT_EQ(abelianization(P), expected);
  EXPECT_EQ(expected, FGAbelianGroup(0, {2, 2, 2}));
}

TEST(Extensions, CubeLatticeSemidirectProduct) {
  const auto P = extension_presentation(lattice_extension(shared_group("O")));
  EXPECT_EQ(abelianization(P), coinvariants(GModule::standard(shared_group("O"))) + finite_abelianization(*shared_group("O")));
  EXPECT_EQ(count_homs(P, *shared_group("C_2")), 4U);
}

TEST(Extensions, CocyclesProduceNonSplitGroups) {
  // Z by C_2 with a^2 = t: the infinite cyclic group.
  const GroupPtr C2 = shared_group("C_2");
  std::vector<std::vector<IntVector>> f(2, std::vector<IntVector>(2, IntVector(1)));
  f[1][1][0] = 1;
  const auto Z = asg_presentation(1, C2, {IntMatrix{{1}}}, f);
  EXPECT_EQ(abelianization(Z), FGAbelianGroup::free(1));
  // Klein bottle group: Z^2 by C_2 acting by diag(1, -1) with a^2 = t1.
  std::vector<std::vector<IntVector>> g(2, std::vector<IntVector>(2, IntVector(2)));
  g[1][1][0] = 1;
  const auto K = asg_presentation(2, C2, {IntMatrix{{1, 0}, {0, -1}}}, g);
  EXPECT_EQ(abelianization(K), FGAbelianGroup(1, {2}));
  // f(a, a) = t2 is not a cocycle for this action.
  std::vector<std::vector<IntVector>> h(2, std::vector<IntVector>(2, IntVector(2)));
  h[1][1][1] = 1;
  EXPECT_THROW(asg_presentation(2, C2, {IntMatrix{{1, 0}, {0, -1}}}, h), ValidationError);
}

TEST(Extensions, RejectsInconsistentActions) {
  ExtensionSpec s = lattice_extension(shared_group("O"));
  s.matrices[0] = IntMatrix::identity(3);
  EXPECT_THROW(extension_presentation(s), ValidationError);
  ExtensionSpec t = sturmian_cube_extension();
  t.free_images[1][0] = {1};
  EXPECT_THROW(extension_presentation(t), ValidationError);
}

TEST(Extensions, CodimensionOneFamily) {
  EXPECT_EQ(abelianization(codim1_space_group(2)), FGAbelianGroup(0, {2, 2, 2, 2}));
  EXPECT_EQ(abelianization(codim1_space_group(3)), FGAbelianGroup::free(4));
}

TEST(Pullback, SectionCocycleIdentityOnOctahedralTriples) {
  const GroupPtr cover = shared_group("2O");
  const auto c = section_cocycle(*cover);
  const FiniteGroup& G = *cover->quotient->target;
  for (std::size_t g = 0; g < G.order(); ++g)
    for (std::size_t h = 0; h < G.order(); ++h)
      for (std::size_t k = 0; k < G.order(); ++k) {
        const auto gh = static_cast<std::size_t>(G.mul(static_cast<int>(g), static_cast<int>(h)));
        const auto hk = static_cast<std::size_t>(G.mul(static_cast<int>(h), static_cast<int>(k)));
        ASSERT_EQ(c[g][h] * c[gh][k], c[h][k] * c[g][hk]);
      }
}

TEST(Pullback, DoubleCoverOfCubeLatticeGroup) {
  const auto P = extension_presentation(lattice_extension(shared_group("O")));
  const auto Q = central_pullback(P, shared_group("2O"));
  EXPECT_TRUE(Q.quotient_map_is_homomorphism());
  EXPECT_EQ(Q.generators.back(), "z");
  // Z^3 by 2O: coinvariants Z/2 plus 2O^ab = Z/2.
  EXPECT_EQ(abelianization(Q), FGAbelianGroup(0, {2, 2}));
  // Homomorphisms to C_2 factor through the abelianization.
  EXPECT_EQ(count_homs(Q, *shared_group("C_2")), 4U);
}

TEST(Pullback, TrivialPointGroupGivesDirectProduct) {
  const auto Q = central_pullback(codim1_space_group(3), shared_group("2C_1"));
  EXPECT_EQ(abelianization(Q), FGAbelianGroup(4, {2}));
  EXPECT_THROW(central_pullback(codim1_space_group(2), shared_group("2O")), ValidationError);
  GroupPresentation bare;
  bare.generators = {"a"};
  EXPECT_THROW(central_pullback(bare, shared_group("2O")), ValidationError);
}

TEST(Extensions, JsonSpecs) {
  const auto j = nlohmann::json::parse(R"({"quotient": "C_2",
                                           "kernel": {"type": "free-abelian", "rank": 2},
                                           "action": {"a": [[1, 0], [0, -1]]},
                                           "cocycle": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]})");
  EXPECT_EQ(abelianization(extension_presentation(extension_from_json(j))), FGAbelianGroup(1, {2}));
  nlohmann::json f{{"quotient", "C_2"}, {"kernel", {{"type", "free-product-of-free"}, {"ranks", {2}}}}};
  f["action"]["a"] = {{"a1", "A1"}, {"b1", "B1"}};
  const auto P = extension_presentation(extension_from_json(f));
  EXPECT_EQ(abelianization(P), FGAbelianGroup(0, {2, 2, 2}));
  EXPECT_THROW(extension_from_json(nlohmann::json{{"quotient", "C_2"}, {"kernel", {{"type", "nilpotent"}}}}), ValidationError);
}
