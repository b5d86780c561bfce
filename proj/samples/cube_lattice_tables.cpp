// E2 pages and assembled cohomology for the cubical lattice.
#include <iostream>

#include "rotohull/rotohull.hpp"

int main() {
  using namespace rotohull;
  const TilingModel model = builtin_model("cube-lattice");
  std::cout << render_markdown(borel_e2_page(model, 4)) << '\n';
  std::cout << render_markdown(e2_page_3d(model, Ring::prime_field(2))) << '\n';
  std::cout << render_markdown(assemble_3d(model));
}
