#ifndef ROTOHULL_RESOLUTION_HPP
#define ROTOHULL_RESOLUTION_HPP

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rotohull/chain_complex.hpp"
#include "rotohull/finite_group.hpp"
#include "rotohull/gmodule.hpp"
#include "rotohull/lattice.hpp"
#include "rotohull/smith.hpp"

namespace rotohull {

inline constexpr std::size_t kMaxResolutionGroupOrder = 48;

/// Outcome of the exactness check on the expanded integer complex.
struct ResolutionCertificate {
  bool passed = false;
  /// Degree of the first failing check (0 stands for the augmentation).
  std::optional<std::size_t> failing_degree;
  std::string message;
};

/// Free resolution ... -> ZG^{r_2} -> ZG^{r_1} -> ZG -> Z of the trivial module.
///
/// images[i][j] is the image of the j-th free generator of degree i+1, a vector of length
/// |G| * r_i whose block l holds the group-ring coefficients on the l-th generator of degree i.
struct FreeResolution {
  GroupPtr group;
  std::vector<std::size_t> ranks;
  std::vector<std::vector<IntVector>> images;
  ResolutionCertificate certificate;

  std::size_t max_degree() const { return images.size(); }

  /// g * v for v in ZG^r (left multiplication permutes coefficients within each block).
  static IntVector left_multiply(const FiniteGroup& G, int g, const IntVector& v) {
    const std::size_t n = G.order();
    IntVector out(v.size());
    for (std::size_t base = 0; base < v.size(); base += n)
      for (std::size_t h = 0; h < n; ++h)
        if (v[base + h] != 0) out[base + static_cast<std::size_t>(G.mul(g, static_cast<int>(h)))] = v[base + h];
    return out;
  }

  /// Integer matrix of d_i : ZG^{r_i} -> ZG^{r_{i-1}}; column (j, g) sits at j*|G| + g.
  IntMatrix expanded_boundary(std::size_t i) const {
    const std::size_t n = group->order();
    IntMatrix D(n * ranks.at(i - 1), n * ranks.at(i));
    for (std::size_t j = 0; j < ranks[i]; ++j)
      for (std::size_t g = 0; g < n; ++g) {
        const IntVector col = left_multiply(*group, static_cast<int>(g), images[i - 1][j]);
        for (std::size_t r = 0; r < col.size(); ++r)
          if (col[r] != 0) D(r, j * n + g) = col[r];
      }
    return D;
  }
};

namespace detail {

inline std::size_t support_size(const IntVector& v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](const Int& x) { return x != 0; }));
}

inline Int norm_squared(const IntVector& v) {
  Int s = 0;
  for (const auto& x : v) s += x * x;
  return s;
}

// Greedy choice of ZG-generators for a saturated lattice K: shortest kernel vectors first,
// each added with its whole G-orbit until the orbit lattice reaches K.
inline std::vector<IntVector> choose_module_generators(const FiniteGroup& G, const KernelLattice& K) {
  std::vector<std::size_t> order(K.rank());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> support(K.rank());
  std::vector<Int> norm(K.rank());
  for (std::size_t i = 0; i < K.rank(); ++i) {
    support[i] = support_size(K.basis[i]);
    norm[i] = norm_squared(K.basis[i]);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (support[a] != support[b]) return support[a] < support[b];
    return norm[a] < norm[b];
  });
  // Work in kernel coordinates when they are available: K = Z^k there.
  const bool coords = K.unimodular;
  const std::size_t width = coords ? K.rank() : K.ambient;
  auto project = [&](const IntVector& v) {
    if (!coords) return v;
    IntVector out(K.free_columns.size());
    for (std::size_t t = 0; t < K.free_columns.size(); ++t) out[t] = v[K.free_columns[t]];
    return out;
  };
  HermiteBasis target(width);
  if (coords) {
    for (std::size_t t = 0; t < width; ++t) {
      IntVector e(width);
      e[t] = 1;
      target.insert(std::move(e));
    }
  } else {
    for (const auto& c : K.basis) target.insert(c);
  }
  HermiteBasis span(width);
  std::vector<IntVector> chosen;
  auto complete = [&] { return span.rank() == target.rank() && span == target; };
  for (std::size_t idx : order) {
    if (span.rank() == target.rank() && complete()) break;
    const IntVector& c = K.basis[idx];
    if (span.contains(project(c))) continue;
    chosen.push_back(c);
    for (std::size_t g = 0; g < G.order(); ++g)
      span.insert(project(FreeResolution::left_multiply(G, static_cast<int>(g), c)));
  }
  if (!complete()) throw std::logic_error("resolution builder: orbit lattice does not reach the kernel");
  return chosen;
}

}  // namespace detail

/// Exactness certificate: composites vanish, H_0 = Z via the augmentation, H_i = 0 below the top.
inline ResolutionCertificate certify_resolution(const FreeResolution& R) {
  ResolutionCertificate cert;
  const std::size_t n = R.group->order();
  const std::size_t D = R.max_degree();
  std::vector<IntMatrix> d(D + 1);
  for (std::size_t i = 1; i <= D; ++i) d[i] = R.expanded_boundary(i);
  auto fail = [&](std::size_t degree, std::string msg) {
    cert.passed = false;
    cert.failing_degree = degree;
    cert.message = std::move(msg);
    return cert;
  };
  if (R.ranks.empty() || R.ranks[0] != 1) return fail(0, "degree 0 must be ZG");
  if (D >= 1) {
    IntMatrix aug(1, n);
    for (std::size_t g = 0; g < n; ++g) aug(0, g) = 1;
    if (!(aug * d[1]).is_zero()) return fail(0, "augmentation does not kill the image of d_1");
  }
  for (std::size_t i = 1; i < D; ++i)
    if (!(d[i] * d[i + 1]).is_zero()) return fail(i, "d_" + std::to_string(i) + " d_" + std::to_string(i + 1) + " != 0");
  std::vector<std::vector<Int>> factors(D + 1);
  for (std::size_t i = 1; i <= D; ++i) factors[i] = invariant_factors(d[i]);
  auto torsion_free = [](const std::vector<Int>& f) {
    return std::all_of(f.begin(), f.end(), [](const Int& x) { return x == 1; });
  };
  // H_0: coker d_1 must be Z (image saturated of corank one).
  {
    const std::size_t rank1 = D >= 1 ? factors[1].size() : 0;
    if (n - rank1 != 1 || (D >= 1 && !torsion_free(factors[1]))) return fail(0, "H_0 is not Z");
  }
  for (std::size_t i = 1; i + 1 <= D; ++i) {
    const std::size_t kernel_rank = n * R.ranks[i] - factors[i].size();
    if (factors[i + 1].size() != kernel_rank || !torsion_free(factors[i + 1]))
      return fail(i, "H_" + std::to_string(i) + " is nonzero");
  }
  cert.passed = true;
  cert.message = "exact through degree " + std::to_string(D == 0 ? 0 : D - 1);
  return cert;
}

/// Builds a free resolution to the given depth by saturated kernels and greedy ZG-generators.
inline FreeResolution build_resolution(const GroupPtr& G, std::size_t max_degree) {
  if (max_degree < 1) throw ValidationError("build_resolution: max_degree must be at least 1");
  if (G->order() > kMaxResolutionGroupOrder)
    throw ValidationError("build_resolution: group order " + std::to_string(G->order()) + " exceeds " +
                          std::to_string(kMaxResolutionGroupOrder));
  const std::size_t n = G->order();
  FreeResolution R;
  R.group = G;
  R.ranks.push_back(1);
  // Degree 1: g - 1 for each designated generator.
  std::vector<IntVector> first;
  for (int g : G->generators) {
    IntVector v(n);
    v[static_cast<std::size_t>(g)] += 1;
    v[0] -= 1;
    first.push_back(std::move(v));
  }
  R.ranks.push_back(first.size());
  R.images.push_back(std::move(first));
  for (std::size_t i = 1; i < max_degree; ++i) {
    const KernelLattice K = integer_kernel(R.expanded_boundary(i));
    auto gens = detail::choose_module_generators(*G, K);
    R.ranks.push_back(gens.size());
    R.images.push_back(std::move(gens));
  }
  (void)n;
  R.certificate = certify_resolution(R);
  if (!R.certificate.passed) throw std::logic_error("build_resolution: certificate failed: " + R.certificate.message);
  return R;
}

/// Process-wide cache of certified resolutions keyed by (group name, depth).
/// Sparse JSON form: {"group", "ranks", "images": [[[[index, coeff], ...] per generator] per degree]}.
inline nlohmann::json resolution_to_json(const FreeResolution& R) {
  nlohmann::json images = nlohmann::json::array();
  for (const auto& degree : R.images) {
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& v : degree) {
      nlohmann::json entries = nlohmann::json::array();
      for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) entries.push_back({i, v[i].get_si()});
      gens.push_back(std::move(entries));
    }
    images.push_back(std::move(gens));
  }
  return {{"group", R.group->name}, {"order", R.group->order()}, {"ranks", R.ranks}, {"images", images}};
}

/// Reads a resolution and re-runs the exactness certificate; throws when it fails.
inline FreeResolution resolution_from_json(const nlohmann::json& j, const GroupPtr& G) {
  if (j.at("group").get<std::string>() != G->name || j.at("order").get<std::size_t>() != G->order())
    throw ValidationError("resolution file is for group " + j.at("group").get<std::string>() + ", not " + G->name);
  FreeResolution R;
  R.group = G;
  R.ranks = j.at("ranks").get<std::vector<std::size_t>>();
  const auto& images = j.at("images");
  if (images.size() + 1 != R.ranks.size()) throw ValidationError("resolution file: ranks and images disagree");
  for (std::size_t i = 0; i < images.size(); ++i) {
    std::vector<IntVector> gens;
    if (images[i].size() != R.ranks[i + 1]) throw ValidationError("resolution file: wrong generator count");
    for (const auto& entries : images[i]) {
      IntVector v(G->order() * R.ranks[i]);
      for (const auto& e : entries) {
        const auto idx = e.at(0).get<std::size_t>();
        if (idx >= v.size()) throw ValidationError("resolution file: coefficient index out of range");
        v[idx] = e.at(1).get<long>();
      }
      gens.push_back(std::move(v));
    }
    R.images.push_back(std::move(gens));
  }
  R.certificate = certify_resolution(R);
  if (!R.certificate.passed) throw ValidationError("resolution file fails certification: " + R.certificate.message);
  return R;
}

namespace detail {

inline std::optional<std::filesystem::path> resolution_cache_dir() {
  const char* dir = std::getenv("ROTOHULL_CACHE");
  if (!dir || !*dir) return std::nullopt;
  return std::filesystem::path(dir);
}

inline std::filesystem::path resolution_cache_file(const std::filesystem::path& dir, const std::string& group, std::size_t depth) {
  std::string safe = group;
  for (auto& c : safe)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  return dir / ("resolution-" + safe + "-" + std::to_string(depth) + ".json");
}

}  // namespace detail

/// Memoized resolution of at least the given depth; ROTOHULL_CACHE names an optional on-disk cache.
inline const FreeResolution& cached_resolution(const GroupPtr& G, std::size_t depth) {
  static std::mutex mu;
  static std::map<std::pair<std::string, std::size_t>, FreeResolution> cache;
  std::lock_guard<std::mutex> lock(mu);
  for (auto& [key, R] : cache)
    if (key.first == G->name && key.second >= depth) return R;
  const auto dir = detail::resolution_cache_dir();
  if (dir && std::filesystem::is_directory(*dir)) {
    for (std::size_t d = depth; d <= depth + 8; ++d) {
      const auto file = detail::resolution_cache_file(*dir, G->name, d);
      if (!std::filesystem::exists(file)) continue;
      try {
        std::ifstream in(file);
        auto R = resolution_from_json(nlohmann::json::parse(in), G);
        auto [it, _] = cache.emplace(std::make_pair(G->name, d), std::move(R));
        return it->second;
      } catch (const std::exception&) {
        // A stale or corrupt entry is rebuilt below.
      }
    }
  }
  auto [it, _] = cache.emplace(std::make_pair(G->name, depth), build_resolution(G, depth));
  if (dir) {
    std::error_code ec;
    std::filesystem::create_directories(*dir, ec);
    std::ofstream out(detail::resolution_cache_file(*dir, G->name, depth));
    if (out) out << resolution_to_json(it->second).dump() << "\n";
  }
  return it->second;
}

/// Cochain complex Hom_G(R_*, M) = M^{r_0} -> M^{r_1} -> ..., truncated after degree top+1.
inline IntChainComplex hom_complex(const FreeResolution& R, const GModule& M, std::size_t top) {
  if (M.group()->name != R.group->name || M.group()->order() != R.group->order())
    throw ValidationError("group_cohomology: module is over " + M.group()->name + ", resolution over " + R.group->name);
  if (R.max_degree() < top + 1)
    throw ValidationError("group_cohomology: resolution depth " + std::to_string(R.max_degree()) + " < " + std::to_string(top + 1));
  const std::size_t n = R.group->order(), m = M.rank();
  IntChainComplex C;
  for (std::size_t k = 0; k <= top + 1; ++k) C.dims.push_back(m * R.ranks[k]);
  for (std::size_t k = 0; k <= top; ++k) {
    IntMatrix delta(m * R.ranks[k + 1], m * R.ranks[k]);
    for (std::size_t j = 0; j < R.ranks[k + 1]; ++j) {
      const IntVector& img = R.images[k][j];
      for (std::size_t l = 0; l < R.ranks[k]; ++l) {
        IntMatrix block(m, m);
        for (std::size_t h = 0; h < n; ++h) {
          const Int& c = img[l * n + h];
          if (c == 0) continue;
          const IntMatrix& rho = M.element_matrix(static_cast<int>(h));
          for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
              if (rho(a, b) != 0) block(a, b) += c * rho(a, b);
        }
        delta.set_block(j * m, l * m, block);
      }
    }
    C.coboundaries.push_back(std::move(delta));
  }
  return C;
}

/// One column H^0..H^top of group cohomology; integral groups, or F_p dimensions.
struct CohomologyColumn {
  std::string group;
  Ring ring;
  std::vector<FGAbelianGroup> integral;
  std::vector<std::size_t> dimensions;

  std::size_t size() const { return ring.is_field() ? dimensions.size() : integral.size(); }
};

/// H^n(G; M) for n = 0..top using the given resolution. For F_p, M is read mod p.
inline CohomologyColumn group_cohomology(const FreeResolution& R, const GModule& M, std::size_t top,
                                         Ring ring = Ring::integers()) {
  const IntChainComplex C = hom_complex(R, M, top);
  CohomologyColumn col;
  col.group = R.group->name;
  col.ring = ring;
  if (ring.kind == Ring::Kind::Fp) {
    auto dims = complex_cohomology_mod_p(C, ring.p);
    dims.resize(top + 1);
    col.dimensions = std::move(dims);
  } else if (ring.kind == Ring::Kind::Q) {
    auto groups = complex_cohomology(C);
    for (std::size_t k = 0; k <= top; ++k) col.dimensions.push_back(groups[k].free_rank());
  } else {
    auto groups = complex_cohomology(C);
    groups.resize(top + 1);
    col.integral = std::move(groups);
  }
  return col;
}

inline CohomologyColumn group_cohomology(const GModule& M, std::size_t top, Ring ring = Ring::integers()) {
  return group_cohomology(cached_resolution(M.group(), top + 1), M, top, ring);
}

/// H^n(S^3/Q; M) for n = 0..3. Degrees 0-2 agree with group cohomology; degree 3 is the
/// coinvariants M_Q by Poincare duality on the closed orientable 3-manifold S^3/Q.
inline CohomologyColumn spaceform_cohomology(const GModule& M, Ring ring = Ring::integers()) {
  const GroupPtr& Q = M.group();
  if (!Q->quaternions) throw ValidationError("spaceform_cohomology: " + Q->name + " is not given as a subgroup of S^3");
  CohomologyColumn col;
  col.group = Q->name;
  col.ring = ring;
  if (Q->order() == 1) {
    // S^3 itself.
    if (ring.is_field()) {
      col.dimensions = {M.rank(), 0, 0, M.rank()};
    } else {
      col.integral = {FGAbelianGroup::free(M.rank()), {}, {}, FGAbelianGroup::free(M.rank())};
    }
    return col;
  }
  const CohomologyColumn low = group_cohomology(M, 4, ring);
  if (ring.kind == Ring::Kind::Fp) {
    col.dimensions = {low.dimensions[0], low.dimensions[1], low.dimensions[2], coinvariant_dimension_mod_p(M, ring.p)};
  } else if (ring.kind == Ring::Kind::Q) {
    col.dimensions = {low.dimensions[0], low.dimensions[1], low.dimensions[2], coinvariants(M).free_rank()};
  } else {
    const FGAbelianGroup top = coinvariants(M);
    // Four-term sequence 0 -> H^3(Q) -> H^3(S^3/Q) -> H^0(Q) -> H^4(Q) -> 0 at the level of ranks.
    if (top.free_rank() != low.integral[3].free_rank() + low.integral[0].free_rank() || !low.integral[4].is_finite())
      throw std::logic_error("spaceform_cohomology: duality rank check failed for " + Q->name);
    col.integral = {low.integral[0], low.integral[1], low.integral[2], top};
  }
  return col;
}

}  // namespace rotohull

#endif  // ROTOHULL_RESOLUTION_HPP
