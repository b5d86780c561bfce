#ifndef ROTOHULL_ROTOHULL_HPP
#define ROTOHULL_ROTOHULL_HPP

#include "rotohull/abelian_group.hpp"
#include "rotohull/chain_complex.hpp"
#include "rotohull/finite_group.hpp"
#include "rotohull/gmodule.hpp"
#include "rotohull/int_matrix.hpp"
#include "rotohull/lattice.hpp"
#include "rotohull/point_group.hpp"
#include "rotohull/quaternion.hpp"
#include "rotohull/ranks.hpp"
#include "rotohull/resolution.hpp"
#include "rotohull/rot_cohomology.hpp"
#include "rotohull/smith.hpp"
#include "rotohull/space_groups.hpp"
#include "rotohull/tiling_models.hpp"

#endif  // ROTOHULL_ROTOHULL_HPP
