// Twisted cohomology of the quarter-turn group on Z^2 and of 2O on the exterior square of Z^3.
#include <iostream>

#include "rotohull/rotohull.hpp"

int main() {
  using namespace rotohull;
  const GModule plane = GModule::standard(shared_group("C_4"));
  const auto col = group_cohomology(plane, 6);
  for (std::size_t n = 0; n < col.integral.size(); ++n) std::cout << "H^" << n << "(C_4; Z^2) = " << col.integral[n] << '\n';
  const GModule wedge = exterior_power(GModule::standard(shared_group("2O")), 2);
  const auto sf = spaceform_cohomology(wedge);
  for (std::size_t n = 0; n < sf.integral.size(); ++n) std::cout << "H^" << n << "(S^3/2O; L^2 Z^3) = " << sf.integral[n] << '\n';
}
