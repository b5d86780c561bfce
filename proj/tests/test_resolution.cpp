#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "oracles.hpp"

using namespace rotohull;
using namespace rotohull::testing;

TEST(Resolution, BinaryOctahedralDepthFiveIsExact) {
  const FreeResolution& R = cached_resolution(shared_group("2O"), 5);
  EXPECT_TRUE(R.certificate.passed) << R.certificate.message;
  EXPECT_TRUE(certify_resolution(R).passed);
  for (std::size_t i = 1; i + 1 <= R.max_degree(); ++i) EXPECT_TRUE((R.expanded_boundary(i) * R.expanded_boundary(i + 1)).is_zero());
}

TEST(Resolution, CertificateDetectsBrokenResolution) {
  FreeResolution R = build_resolution(shared_group("C_2"), 3);
  R.images[1][0][0] += 1;
  const auto cert = certify_resolution(R);
  EXPECT_FALSE(cert.passed);
  ASSERT_TRUE(cert.failing_degree.has_value());
}

TEST(Resolution, RejectsLargeGroupsAndZeroDepth) {
  EXPECT_THROW(build_resolution(shared_group("C_50"), 2), ValidationError);
  EXPECT_THROW(build_resolution(shared_group("C_2"), 0), ValidationError);
}

TEST(Resolution, AgreesWithBarResolutionForOrdersTwoAndThree) {
  for (const auto& M : small_group_modules()) {
    const auto bar = complex_cohomology(bar_complex(M, 4));
    const auto col = group_cohomology(M, 4);
    for (std::size_t n = 0; n <= 4; ++n) EXPECT_EQ(col.integral[n], bar[n]) << M.group()->name << " rank " << M.rank() << " degree " << n;
    const auto bar2 = complex_cohomology_mod_p(bar_complex(M, 4), 2);
    const auto col2 = group_cohomology(M, 4, Ring::prime_field(2));
    for (std::size_t n = 0; n <= 4; ++n) EXPECT_EQ(col2.dimensions[n], bar2[n]);
  }
}

TEST(Resolution, KnownCohomologyOfCyclicAndBinaryOctahedralGroups) {
  const auto c = group_cohomology(GModule::trivial(shared_group("C_4"), 1), 4);
  EXPECT_EQ(c.integral[0], FGAbelianGroup::free(1));
  EXPECT_EQ(c.integral[1], FGAbelianGroup());
  EXPECT_EQ(c.integral[2], FGAbelianGroup::cyclic(4));
  EXPECT_EQ(c.integral[4], FGAbelianGroup::cyclic(4));
  const auto o = group_cohomology(GModule::trivial(shared_group("2O"), 1), 4);
  EXPECT_EQ(o.integral[2], FGAbelianGroup::cyclic(2));
  EXPECT_EQ(o.integral[4], FGAbelianGroup::cyclic(48));
  const auto q = group_cohomology(GModule::trivial(shared_group("2O"), 1), 4, Ring::rationals());
  EXPECT_EQ(q.dimensions, (std::vector<std::size_t>{1, 0, 0, 0, 0}));
}

TEST(Resolution, BinaryOctahedralCohomologyIsFourPeriodic) {
  for (const auto& [name, M] : rotohull::testing::builtin_modules()) {
    if (M.group()->name != "2O") continue;
    // Depth 6 reaches H^5, which must repeat H^1.
    const auto deep = group_cohomology(cached_resolution(M.group(), 6), M, 5);
    EXPECT_EQ(deep.integral[5], deep.integral[1]) << name;
    EXPECT_EQ(deep.integral[4].free_rank(), 0U) << name;
  }
}

TEST(Resolution, UniversalCoefficientsHoldForEveryBuiltinModule) {
  for (const auto& [name, M] : rotohull::testing::builtin_modules()) {
    if (M.group()->order() > kMaxResolutionGroupOrder) continue;
    const auto Z = group_cohomology(M, 4).integral;
    for (long p : {2L, 3L}) {
      const auto F = group_cohomology(M, 4, Ring::prime_field(p)).dimensions;
      // The top computed degree lacks its Tor partner, so compare below it.
      for (std::size_t n = 0; n < 4; ++n) EXPECT_EQ(F[n], universal_coefficient_dimension(Z, n, p)) << name << " F" << p << " n=" << n;
    }
  }
}

TEST(Resolution, SpaceFormCohomologySatisfiesDuality) {
  const auto c = spaceform_cohomology(GModule::trivial(shared_group("2O"), 1));
  EXPECT_EQ(c.integral[0], FGAbelianGroup::free(1));
  EXPECT_EQ(c.integral[1], FGAbelianGroup());
  EXPECT_EQ(c.integral[2], FGAbelianGroup::cyclic(2));
  EXPECT_EQ(c.integral[3], FGAbelianGroup::free(1));
  EXPECT_THROW(spaceform_cohomology(GModule::trivial(shared_group("O"), 1)), ValidationError);
}

TEST(Resolution, JsonRoundTripAndDiskCache) {
  const GroupPtr G = shared_group("C_4");
  const FreeResolution R = build_resolution(G, 4);
  const FreeResolution S = resolution_from_json(nlohmann::json::parse(resolution_to_json(R).dump()), G);
  EXPECT_EQ(S.ranks, R.ranks);
  EXPECT_EQ(S.images, R.images);
  EXPECT_THROW(resolution_from_json(resolution_to_json(R), shared_group("C_2")), ValidationError);
  auto broken = resolution_to_json(R);
  broken["images"][1][0].push_back({0, 5});
  EXPECT_THROW(resolution_from_json(broken, G), ValidationError);

  const auto dir = std::filesystem::temp_directory_path() / "rotohull-cache-test";
  std::filesystem::remove_all(dir);
  ::setenv("ROTOHULL_CACHE", dir.c_str(), 1);
  const FreeResolution& C = cached_resolution(shared_group("C_6"), 3);
  ::unsetenv("ROTOHULL_CACHE");
  EXPECT_TRUE(C.certificate.passed);
  EXPECT_TRUE(std::filesystem::exists(detail::resolution_cache_file(dir, "C_6", 3)));
  std::filesystem::remove_all(dir);
}
