#ifndef ROTOHULL_ROT_COHOMOLOGY_HPP
#define ROTOHULL_ROT_COHOMOLOGY_HPP

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rotohull/resolution.hpp"
#include "rotohull/tiling_models.hpp"

namespace rotohull {

/// Grid E_2^{n,k} = H^n(base; H^k(fibre)), stored row-major by fibre degree k.
struct E2Page {
  std::string model;
  std::string base;
  Ring ring;
  std::size_t n_max = 0;
  std::size_t k_max = 0;
  std::vector<std::vector<FGAbelianGroup>> integral;
  std::vector<std::vector<std::size_t>> dims;

  bool is_integral() const { return ring.kind == Ring::Kind::Z; }
  const FGAbelianGroup& group(std::size_t n, std::size_t k) const { return integral.at(k).at(n); }
  std::size_t dimension(std::size_t n, std::size_t k) const { return dims.at(k).at(n); }
  /// Rendered cell; Q and F_p cells are dimensions.
  std::string cell(std::size_t n, std::size_t k, bool primary = false) const {
    return is_integral() ? group(n, k).to_compact(primary) : std::to_string(dimension(n, k));
  }
};

namespace detail {

inline void store_column(E2Page& page, std::size_t k, const CohomologyColumn& col) {
  if (page.is_integral())
    page.integral[k] = col.integral;
  else
    page.dims[k] = col.dimensions;
}

inline E2Page empty_page(const TilingModel& model, std::string base, Ring ring, std::size_t n_max) {
  E2Page page;
  page.model = model.name;
  page.base = std::move(base);
  page.ring = ring;
  page.n_max = n_max;
  page.k_max = model.top_degree();
  page.integral.resize(page.k_max + 1);
  page.dims.resize(page.k_max + 1);
  return page;
}

}  // namespace detail

/// E_2 page of Omega_t -> Omega_r -> S^3/cover: entry (n, k) = H^n(S^3/cover; H^k(Omega_t)).
inline E2Page e2_page_3d(const TilingModel& model, Ring ring = Ring::integers()) {
  if (model.dimension != 3) throw ValidationError("e2_page_3d: model " + model.name + " is not three-dimensional");
  E2Page page = detail::empty_page(model, "S^3/" + model.cover->name, ring, 3);
  for (std::size_t k = 0; k <= page.k_max; ++k) detail::store_column(page, k, spaceform_cohomology(model.degree(k), ring));
  return page;
}

/// Page of Omega_t -> Omega_G -> BG (G the acting group) truncated at n_max; no assembly.
inline E2Page borel_e2_page(const TilingModel& model, std::size_t n_max, Ring ring = Ring::integers(),
                            std::size_t max_depth = 16) {
  if (n_max + 1 > max_depth)
    throw ValidationError("borel_e2_page: n_max " + std::to_string(n_max) + " exceeds the resolution depth " + std::to_string(max_depth));
  E2Page page = detail::empty_page(model, "B" + model.acting_group()->name, ring, n_max);
  for (std::size_t k = 0; k <= page.k_max; ++k) detail::store_column(page, k, group_cohomology(model.degree(k), n_max, ring));
  return page;
}

/// One degree the F_p counts could not certify.
struct Ambiguity {
  std::size_t degree = 0;
  FGAbelianGroup candidate;
  std::string constraint;
};

/// Assembled H^n(Omega_r) with certification status and F_p comparison data.
struct CohomologyTable {
  std::string model;
  std::vector<FGAbelianGroup> groups;
  std::map<long, std::vector<std::size_t>> fp_dims;
  std::vector<Ambiguity> ambiguities;
  std::vector<std::string> provenance;

  bool certified() const { return ambiguities.empty(); }
  std::string status() const { return certified() ? "certified" : "ambiguous"; }
};

namespace detail {

inline void collect_primes(const FGAbelianGroup& g, std::set<long>& out) {
  for (Int x : g.torsion()) {
    for (long p = 2; Int(p) * p <= x; ++p)
      while (divides(Int(p), x)) {
        out.insert(p);
        x /= p;
      }
    if (x > 1) out.insert(x.get_si());
  }
}

}  // namespace detail

/// Collapsed spectral sequence with trivial extensions, certified against F_p pages.
///
/// Needs a cover-invariant skeletal filtration on the fibre (model.has_invariant_skeleton);
/// `force` overrides that with a provenance warning.
inline CohomologyTable assemble_3d(const TilingModel& model, bool force = false) {
  if (model.dimension != 3) throw ValidationError("assemble_3d: model " + model.name + " is not three-dimensional");
  CohomologyTable table;
  table.model = model.name;
  if (!model.has_invariant_skeleton) {
    if (!force) throw ValidationError("assemble_3d: model " + model.name + " does not declare an invariant skeleton; collapse is not justified");
    table.provenance.push_back("warning: collapse assumed without an invariant skeleton");
  }
  const E2Page page = e2_page_3d(model);
  const std::size_t top = 3 + page.k_max;
  table.groups.assign(top + 1, FGAbelianGroup{});
  std::set<long> primes;
  for (std::size_t k = 0; k <= page.k_max; ++k)
    for (std::size_t n = 0; n <= 3; ++n) {
      table.groups[n + k] = table.groups[n + k] + page.group(n, k);
      detail::collect_primes(page.group(n, k), primes);
    }
  if (primes.empty()) primes.insert(2);
  for (long p : primes) {
    const E2Page fp = e2_page_3d(model, Ring::prime_field(p));
    std::vector<std::size_t> diag(top + 1, 0);
    for (std::size_t k = 0; k <= fp.k_max; ++k)
      for (std::size_t n = 0; n <= 3; ++n) diag[n + k] += fp.dimension(n, k);
    table.fp_dims[p] = diag;
    table.provenance.push_back("F" + std::to_string(p) + " page compared by universal coefficients");
    for (std::size_t m = 0; m <= top; ++m) {
      const std::size_t predicted = universal_coefficient_dimension(table.groups, m, p);
      if (predicted != diag[m]) {
        std::ostringstream os;
        os << "dim H^" << m << "(F" << p << ") = " << diag[m] << " but the trivial extension predicts " << predicted;
        table.ambiguities.push_back({m, table.groups[m], os.str()});
      }
    }
  }
  return table;
}

/// Walton's sequence for d = 2: H^n(Omega_r) is an extension of H^n(Omega_t)^G by
/// H^{n-1}(Omega_t)_G, split whenever the invariant part is free.
inline CohomologyTable planar_cohomology(const TilingModel& model) {
  if (model.dimension != 2) throw ValidationError("planar_cohomology: model " + model.name + " is not two-dimensional");
  const GroupPtr& G = model.acting_group();
  if (!G->is_abelian()) throw ValidationError("planar_cohomology: point group " + G->name + " is not cyclic");
  CohomologyTable table;
  table.model = model.name;
  const std::size_t top = model.top_degree() + 1;
  for (std::size_t n = 0; n <= top; ++n) {
    FGAbelianGroup inv, coinv;
    if (n <= model.top_degree()) inv = FGAbelianGroup::free(invariants(model.degree(n)).rank);
    if (n >= 1) coinv = coinvariants(model.degree(n - 1));
    table.groups.push_back(inv + coinv);
    if (!inv.is_free()) {
      table.ambiguities.push_back({n, inv + coinv,
                                   "extension of " + inv.to_string() + " by " + coinv.to_string() + " is not determined"});
    }
  }
  table.provenance.push_back("extensions split: invariant quotients are free");
  return table;
}

/// Rational Betti numbers: invariant ranks convolved with the Poincare polynomial of SO(d).
inline std::vector<std::size_t> rational_cohomology(const TilingModel& model) {
  std::vector<std::size_t> so;
  if (model.dimension == 2)
    so = {1, 1};
  else if (model.dimension == 3)
    so = {1, 0, 0, 1};
  else
    throw ValidationError("rational_cohomology: unsupported dimension " + std::to_string(model.dimension));
  std::vector<std::size_t> inv;
  for (const auto& M : model.cohomology.degrees) inv.push_back(invariants(M, Ring::rationals()).rank);
  std::vector<std::size_t> out(inv.size() + so.size() - 1, 0);
  for (std::size_t a = 0; a < inv.size(); ++a)
    for (std::size_t b = 0; b < so.size(); ++b) out[a + b] += inv[a] * so[b];
  return out;
}

// ---------------------------------------------------------------------------------------------
// Rendering

inline std::string render_markdown(const E2Page& page, bool primary = false) {
  std::ostringstream os;
  os << "E2 page of " << page.model << " over " << page.base << ", coefficients " << page.ring.name() << "\n\n";
  os << "| k \\ n |";
  for (std::size_t n = 0; n <= page.n_max; ++n) os << ' ' << n << " |";
  os << "\n|---|";
  for (std::size_t n = 0; n <= page.n_max; ++n) os << "---|";
  os << '\n';
  for (std::size_t k = page.k_max + 1; k-- > 0;) {
    os << "| " << k << " |";
    for (std::size_t n = 0; n <= page.n_max; ++n) os << ' ' << page.cell(n, k, primary) << " |";
    os << '\n';
  }
  return os.str();
}

inline nlohmann::json group_to_json(const FGAbelianGroup& g) {
  nlohmann::json torsion = nlohmann::json::array();
  for (const auto& t : g.torsion()) torsion.push_back(t.get_str());
  return {{"free_rank", g.free_rank()}, {"torsion", torsion}};
}

inline FGAbelianGroup group_from_json(const nlohmann::json& j) {
  std::vector<Int> orders;
  for (const auto& t : j.at("torsion")) orders.emplace_back(t.is_string() ? t.get<std::string>() : std::to_string(t.get<long>()));
  return FGAbelianGroup(j.at("free_rank").get<std::size_t>(), orders);
}

inline nlohmann::json to_json(const E2Page& page) {
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t k = 0; k <= page.k_max; ++k)
    for (std::size_t n = 0; n <= page.n_max; ++n) {
      nlohmann::json c{{"n", n}, {"k", k}};
      if (page.is_integral())
        c["group"] = group_to_json(page.group(n, k));
      else
        c["dimension"] = page.dimension(n, k);
      cells.push_back(std::move(c));
    }
  return {{"model", page.model}, {"base", page.base}, {"ring", page.ring.name()}, {"cells", cells}};
}

inline std::string render_markdown(const CohomologyTable& t, bool primary = false) {
  std::ostringstream os;
  os << "Cohomology of the rotational hull of " << t.model << "\n\n| n | H^n |";
  for (const auto& [p, _] : t.fp_dims) os << " dim F" << p << " |";
  os << "\n|---|---|";
  for (std::size_t i = 0; i < t.fp_dims.size(); ++i) os << "---|";
  os << '\n';
  for (std::size_t n = 0; n < t.groups.size(); ++n) {
    os << "| " << n << " | " << t.groups[n].to_string(primary) << " |";
    for (const auto& [p, dims] : t.fp_dims) os << ' ' << dims[n] << " |";
    os << '\n';
  }
  os << "\nstatus: " << t.status() << '\n';
  for (const auto& a : t.ambiguities) os << "ambiguous degree " << a.degree << ": candidate " << a.candidate.to_string(primary) << "; " << a.constraint << '\n';
  return os.str();
}

inline nlohmann::json to_json(const CohomologyTable& t) {
  nlohmann::json groups = nlohmann::json::array();
  for (std::size_t n = 0; n < t.groups.size(); ++n) groups.push_back({{"n", n}, {"group", group_to_json(t.groups[n])}});
  nlohmann::json fp = nlohmann::json::object();
  for (const auto& [p, dims] : t.fp_dims) fp["F" + std::to_string(p)] = dims;
  nlohmann::json amb = nlohmann::json::array();
  for (const auto& a : t.ambiguities)
    amb.push_back({{"degree", a.degree}, {"candidate", group_to_json(a.candidate)}, {"constraint", a.constraint}});
  return {{"model", t.model}, {"groups", groups}, {"fp_dimensions", fp}, {"status", t.status()}, {"ambiguities", amb}, {"provenance", t.provenance}};
}

}  // namespace rotohull

#endif  // ROTOHULL_ROT_COHOMOLOGY_HPP
