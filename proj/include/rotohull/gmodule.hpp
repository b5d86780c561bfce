#ifndef ROTOHULL_GMODULE_HPP
#define ROTOHULL_GMODULE_HPP

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "rotohull/abelian_group.hpp"
#include "rotohull/chain_complex.hpp"
#include "rotohull/finite_group.hpp"
#include "rotohull/lattice.hpp"
#include "rotohull/ranks.hpp"
#include "rotohull/smith.hpp"

namespace rotohull {

/// Free module of rank r over Z G (or Q G, F_p G) given by one matrix per designated generator.
class GModule {
 public:
  GModule() = default;
  GModule(GroupPtr group, std::size_t rank, std::vector<IntMatrix> generator_matrices, Ring ring = Ring::integers())
      : group_(std::move(group)), rank_(rank), gens_(std::move(generator_matrices)), ring_(ring) {
    if (!group_) throw ValidationError("GModule: missing group");
    if (gens_.size() != group_->generator_count())
      throw ValidationError("GModule: expected " + std::to_string(group_->generator_count()) + " generator matrices, got " +
                            std::to_string(gens_.size()));
    for (auto& m : gens_) {
      if (m.rows() != rank_ || m.cols() != rank_) throw ValidationError("GModule: action matrix has wrong size");
      if (ring_.kind == Ring::Kind::Fp) reduce_entries(m, ring_.p);
    }
    build_element_matrices();
    validate();
  }

  static GModule trivial(GroupPtr group, std::size_t rank, Ring ring = Ring::integers()) {
    std::vector<IntMatrix> gens(group->generator_count(), IntMatrix::identity(rank));
    return GModule(std::move(group), rank, std::move(gens), ring);
  }

  /// The rank-d module given by the group's integer rotation image.
  static GModule standard(GroupPtr group) {
    if (!group->rotation_image) throw ValidationError(group->name + ": no integral rotation image");
    std::vector<IntMatrix> gens;
    for (int g : group->generators) gens.push_back((*group->rotation_image)[static_cast<std::size_t>(g)]);
    const std::size_t d = group->rotation_image->front().rows();
    return GModule(std::move(group), d, std::move(gens));
  }

  const GroupPtr& group() const { return group_; }
  std::size_t rank() const { return rank_; }
  const Ring& ring() const { return ring_; }
  const std::vector<IntMatrix>& generator_matrices() const { return gens_; }
  const IntMatrix& generator_matrix(std::size_t i) const { return gens_.at(i); }
  /// rho(g) for group element index g.
  const IntMatrix& element_matrix(int g) const { return elements_.at(static_cast<std::size_t>(g)); }

  bool is_trivial_action() const {
    const IntMatrix one = IntMatrix::identity(rank_);
    return std::all_of(gens_.begin(), gens_.end(), [&](const IntMatrix& m) { return m == one; });
  }

  friend bool operator==(const GModule& a, const GModule& b) {
    return a.group_->name == b.group_->name && a.rank_ == b.rank_ && a.gens_ == b.gens_ && a.ring_ == b.ring_;
  }

 private:
  static void reduce_entries(IntMatrix& m, long p) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) mpz_fdiv_r_ui(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), static_cast<unsigned long>(p));
  }

  void build_element_matrices() {
    elements_.clear();
    for (const auto& word : group_->words) {
      IntMatrix m = IntMatrix::identity(rank_);
      for (int letter : word) m = m * gens_[static_cast<std::size_t>(letter)];
      if (ring_.kind == Ring::Kind::Fp) reduce_entries(m, ring_.p);
      elements_.push_back(std::move(m));
    }
  }

  // rho(a) rho(b) = rho(ab) over the whole table, plus invertibility of the generators.
  void validate() const {
    const std::size_t n = group_->order(), r = rank_;
    const long p = ring_.kind == Ring::Kind::Fp ? ring_.p : 0;
    std::vector<std::vector<long>> small(n, std::vector<long>(r * r));
    for (std::size_t g = 0; g < n; ++g)
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
          const Int& v = elements_[g](i, j);
          if (!v.fits_slong_p()) throw ValidationError("GModule: action entries too large");
          small[g][i * r + j] = v.get_si();
        }
    std::vector<long> prod(r * r);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        std::fill(prod.begin(), prod.end(), 0);
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t k = 0; k < r; ++k) {
            const long x = small[a][i * r + k];
            if (x == 0) continue;
            for (std::size_t j = 0; j < r; ++j) prod[i * r + j] += x * small[b][k * r + j];
          }
        if (p)
          for (auto& v : prod) v = ((v % p) + p) % p;
        if (prod != small[static_cast<std::size_t>(group_->mul(static_cast<int>(a), static_cast<int>(b)))])
          throw ValidationError("GModule: action over " + group_->name + " violates a group relation (elements " +
                                std::to_string(a) + ", " + std::to_string(b) + ")");
      }
    for (const auto& m : gens_) {
      const Int det = determinant(m);
      const bool ok = ring_.kind == Ring::Kind::Z    ? (det == 1 || det == -1)
                      : ring_.kind == Ring::Kind::Q ? det != 0
                                                     : !divides(Int(p), det);
      if (!ok) throw ValidationError("GModule: action matrix is not invertible over " + ring_.name());
    }
  }

  GroupPtr group_;
  std::size_t rank_ = 0;
  std::vector<IntMatrix> gens_;
  Ring ring_;
  std::vector<IntMatrix> elements_;
};

/// Cohomology-like graded module: degree k carries a GModule; degree 0 is the trivial rank-1 module.
struct GradedGModule {
  std::vector<GModule> degrees;
  std::string provenance;

  std::size_t top_degree() const { return degrees.empty() ? 0 : degrees.size() - 1; }
  std::vector<std::size_t> ranks() const {
    std::vector<std::size_t> out;
    for (const auto& m : degrees) out.push_back(m.rank());
    return out;
  }
  void validate() const {
    if (degrees.empty()) throw ValidationError("graded module: missing degree 0");
    if (degrees[0].rank() != 1 || !degrees[0].is_trivial_action())
      throw ValidationError("graded module: degree 0 must be trivial of rank 1");
    for (const auto& m : degrees)
      if (m.group()->name != degrees[0].group()->name) throw ValidationError("graded module: mixed groups");
  }
};

namespace detail {

// Sorted k-subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

inline IntMatrix minor_matrix(const IntMatrix& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  IntMatrix s(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = m(rows[i], cols[j]);
  return s;
}

/// rho(g) - I for the designated generators (or all elements), stacked vertically (tall) or
/// side by side (wide).
inline IntMatrix stacked_differences(const GModule& M, bool all_elements, bool wide = false) {
  const std::size_t r = M.rank();
  std::vector<IntMatrix> blocks;
  const IntMatrix one = IntMatrix::identity(r);
  if (all_elements) {
    for (std::size_t g = 0; g < M.group()->order(); ++g) blocks.push_back(M.element_matrix(static_cast<int>(g)) - one);
  } else {
    for (const auto& m : M.generator_matrices()) blocks.push_back(m - one);
  }
  return wide ? hstack(blocks, r) : vstack(blocks, r);
}

}  // namespace detail

/// k-th exterior power: basis = sorted index subsets, action by k x k minors.
inline GModule exterior_power(const GModule& M, std::size_t k) {
  if (k > M.rank()) throw ValidationError("exterior_power: degree exceeds rank");
  const auto basis = detail::subsets(M.rank(), k);
  std::vector<IntMatrix> gens;
  for (const auto& m : M.generator_matrices()) {
    IntMatrix e(basis.size(), basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j) e(i, j) = determinant(detail::minor_matrix(m, basis[i], basis[j]));
    gens.push_back(std::move(e));
  }
  return GModule(M.group(), basis.size(), std::move(gens), M.ring());
}

struct InvariantLattice {
  std::size_t rank = 0;
  /// Columns span the invariant sublattice (saturated over Z); over a field only `rank` is meaningful.
  IntMatrix basis;
};

/// M^G: simultaneous kernel of rho(g) - I over the designated generators.
inline InvariantLattice invariants(const GModule& M, Ring ring = Ring::integers()) {
  const IntMatrix stacked = detail::stacked_differences(M, false);
  InvariantLattice out;
  if (ring.kind == Ring::Kind::Fp) {
    out.rank = M.rank() - rank_mod_p(stacked, ring.p);
    return out;
  }
  out.basis = kernel_basis(stacked);
  out.rank = out.basis.cols();
  return out;
}

/// M_G: cokernel of the block row [rho(g) - I] over the designated generators.
inline FGAbelianGroup coinvariants(const GModule& M, bool all_elements = false) {
  return cokernel(detail::stacked_differences(M, all_elements, true));
}

/// dim_{F_p} of (M tensor F_p)_G.
inline std::size_t coinvariant_dimension_mod_p(const GModule& M, long p) {
  return M.rank() - rank_mod_p(detail::stacked_differences(M, false, true), p);
}

inline GModule reduce_mod_p(const GModule& M, long p) {
  if (!is_prime(p)) throw ValidationError("reduce_mod_p: " + std::to_string(p) + " is not prime");
  return GModule(M.group(), M.rank(), M.generator_matrices(), Ring::prime_field(p));
}

/// Restriction of M along the cover's quotient map (the cover acts through the quotient).
inline GModule pullback_module(const GModule& M, const GroupPtr& cover) {
  if (!cover->quotient || cover->quotient->target->order() != M.group()->order())
    throw ValidationError("pullback_module: " + cover->name + " has no quotient onto " + M.group()->name);
  std::vector<IntMatrix> gens;
  for (int g : cover->generators) gens.push_back(M.element_matrix(cover->quotient->map[static_cast<std::size_t>(g)]));
  return GModule(cover, M.rank(), std::move(gens), M.ring());
}

/// Direct sum of two modules over the same group.
inline GModule direct_sum(const GModule& a, const GModule& b) {
  if (a.group()->name != b.group()->name) throw ValidationError("direct_sum: different groups");
  std::vector<IntMatrix> gens;
  for (std::size_t i = 0; i < a.generator_matrices().size(); ++i) {
    IntMatrix m(a.rank() + b.rank(), a.rank() + b.rank());
    m.set_block(0, 0, a.generator_matrix(i));
    m.set_block(a.rank(), a.rank(), b.generator_matrix(i));
    gens.push_back(std::move(m));
  }
  return GModule(a.group(), a.rank() + b.rank(), std::move(gens), a.ring());
}

}  // namespace rotohull

#endif  // ROTOHULL_GMODULE_HPP
