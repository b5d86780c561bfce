#ifndef ROTOHULL_TEST_SUPPORT_HPP
#define ROTOHULL_TEST_SUPPORT_HPP

#include <random>
#include <string>
#include <vector>

#include "rotohull/rotohull.hpp"

namespace rotohull::testing {

struct NamedModule {
  std::string name;
  GModule module;
};

/// Every module reachable from the built-in groups and models.
inline std::vector<NamedModule> builtin_modules() {
  std::vector<NamedModule> out;
  for (const std::string g : {"2O", "O", "C_2", "C_4", "pm", "pm_3", "2C_1", "2C_2", "2C_4"}) {
    const GroupPtr G = shared_group(g);
    out.push_back({g + "/trivial", GModule::trivial(G, 1)});
    out.push_back({g + "/standard", GModule::standard(G)});
  }
  for (const auto& name : builtin_model_names()) {
    const TilingModel m = builtin_model(name);
    for (std::size_t k = 0; k <= m.top_degree(); ++k) out.push_back({name + "/H" + std::to_string(k), m.degree(k)});
  }
  return out;
}

inline IntMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, long bound) {
  std::uniform_int_distribution<long> dist(-bound, bound);
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

/// Symmetric group on three letters as permutation matrices.
inline GroupPtr symmetric_group_3() {
  static const GroupPtr S3 = std::make_shared<FiniteGroup>(
      generate_group("S_3", {IntMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}, IntMatrix{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}}, {"s", "t"}));
  return S3;
}

/// Cyclic group of order three permuting coordinates of Z^3.
inline GroupPtr cyclic_permutation_3() {
  static const GroupPtr C3 = std::make_shared<FiniteGroup>(generate_group("C_3perm", {IntMatrix{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}}, {"t"}));
  return C3;
}

}  // namespace rotohull::testing

#endif  // ROTOHULL_TEST_SUPPORT_HPP
