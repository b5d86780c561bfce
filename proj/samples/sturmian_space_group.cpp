// Presentation of (F2 x F2 x F2) semidirect O, its abelianization and its double cover.
#include <iostream>

#include "rotohull/rotohull.hpp"

int main() {
  using namespace rotohull;
  const GroupPresentation P = extension_presentation(sturmian_cube_extension());
  std::cout << P.to_text() << "abelianization: " << abelianization(P) << "\n\n";
  const GroupPresentation Q = central_pullback(P, shared_group("2O"));
  std::cout << "double cover has " << Q.relators.size() << " relators, abelianization " << abelianization(Q) << '\n';
  std::cout << "homomorphisms to C_2: " << count_homs(P, *shared_group("C_2")) << '\n';
}
