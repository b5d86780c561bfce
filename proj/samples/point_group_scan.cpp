// Empirical point groups of a custom striped coloring and of the built-in systems.
#include <iostream>

#include "rotohull/rotohull.hpp"

int main() {
  using namespace rotohull;
  const auto stripes = patch_system_from_json(
      nlohmann::json{{"name", "stripes"}, {"dimension", 2}, {"kind", "periodic-coloring"}, {"period", {2, 1}}, {"table", {0, 1}}});
  std::cout << render_markdown(point_group_scan(stripes, 4)) << '\n';
  for (const auto& name : builtin_patch_system_names())
    std::cout << name << ": " << point_group_scan(builtin_patch_system(name), 4).verdict_text() << '\n';
}
