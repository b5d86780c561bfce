#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "test_support.hpp"

using namespace rotohull;

TEST(TilingModels, BuiltinRanksAndGroups) {
  const TilingModel cube = builtin_model("cube-lattice");
  EXPECT_EQ(cube.cohomology.ranks(), (std::vector<std::size_t>{1, 3, 3, 1}));
  EXPECT_EQ(cube.cover->name, "2O");
  EXPECT_EQ(cube.point_group->name, "O");
  const TilingModel st = builtin_model("sturmian-cube");
  EXPECT_EQ(st.cohomology.ranks(), (std::vector<std::size_t>{1, 6, 12, 8}));
  EXPECT_EQ(builtin_model("punctured-torus-d2").cohomology.ranks(), (std::vector<std::size_t>{1, 3, 3}));
  EXPECT_EQ(builtin_model("punctured-torus-d3").cohomology.ranks(), (std::vector<std::size_t>{1, 4, 6, 4}));
  for (const auto& name : builtin_model_names()) EXPECT_NO_THROW(builtin_model(name).validate());
  EXPECT_THROW(builtin_model("penrose"), ValidationError);
  EXPECT_THROW(punctured_torus_model(4), ValidationError);
}

TEST(TilingModels, WedgeBasisAndSigns) {
  EXPECT_EQ(wedge_basis_labels(1), (std::vector<std::string>{"x11", "x12", "x21", "x22", "x31", "x32"}));
  EXPECT_EQ(wedge_basis_labels(3).size(), 8U);
  // The quarter turn about the third axis sends x1j to x2j and x2j to -x1j.
  const IntMatrix r = (*shared_group("2O")->rotation_image)[static_cast<std::size_t>(shared_group("2O")->generators[0])];
  const IntMatrix a1 = detail::wedge_action(r, 1);
  EXPECT_EQ(a1(2, 0), 1);
  EXPECT_EQ(a1(0, 2), -1);
  EXPECT_EQ(a1(4, 4), 1);
  // x11 x21 -> x21 (-x11) = x11 x21.
  const IntMatrix a2 = detail::wedge_action(r, 2);
  const auto labels = wedge_basis_labels(2);
  const auto at = [&](const std::string& s) { return static_cast<std::size_t>(std::find(labels.begin(), labels.end(), s) - labels.begin()); };
  EXPECT_EQ(a2(at("x11x21"), at("x11x21")), 1);
  // The degree-one module is two copies of the standard module.
  const TilingModel st = builtin_model("sturmian-cube");
  EXPECT_EQ(coinvariants(st.degree(1)), FGAbelianGroup(0, {2, 2}));
}

TEST(TilingModels, JsonRoundTrip) {
  for (const auto& name : builtin_model_names()) {
    const TilingModel m = builtin_model(name);
    const TilingModel back = model_from_json(nlohmann::json::parse(model_to_json(m).dump()));
    EXPECT_EQ(back.name, m.name);
    EXPECT_EQ(back.dimension, m.dimension);
    ASSERT_EQ(back.cohomology.degrees.size(), m.cohomology.degrees.size());
    for (std::size_t k = 0; k < m.cohomology.degrees.size(); ++k) EXPECT_EQ(back.degree(k), m.degree(k));
  }
}

TEST(TilingModels, CustomModelFilesAndErrors) {
  auto j = model_to_json(builtin_model("cube-lattice"));
  j["name"] = "custom-cube";
  const auto path = std::filesystem::temp_directory_path() / "rotohull-custom-model.json";
  std::ofstream(path) << j.dump();
  EXPECT_EQ(resolve_model(path.string()).name, "custom-cube");
  std::filesystem::remove(path);
  auto bad = j;
  bad.erase("degrees");
  EXPECT_THROW(model_from_json(bad), ValidationError);
  auto wrong_action = j;
  wrong_action["degrees"][1]["action"]["r"] = nlohmann::json{{1, 0, 0}, {0, 1, 0}, {0, 0, 2}};
  EXPECT_ANY_THROW(model_from_json(wrong_action));
  EXPECT_THROW(resolve_model("/nonexistent/model.json"), ValidationError);
}

TEST(TilingModels, TorusModelsFromGroups) {
  const TilingModel sq = torus_model(2, shared_group("C_4"));
  EXPECT_EQ(sq.dimension, 2U);
  EXPECT_EQ(sq.cohomology.ranks(), (std::vector<std::size_t>{1, 2, 1}));
  EXPECT_THROW(torus_model(3, shared_group("C_4")), ValidationError);
}
