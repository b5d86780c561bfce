#ifndef ROTOHULL_TILING_MODELS_HPP
#define ROTOHULL_TILING_MODELS_HPP

#include <algorithm>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rotohull/finite_group.hpp"
#include "rotohull/gmodule.hpp"

namespace rotohull {

/// Coefficient data H*(Omega_t) of a tiling family with its point-group action.
///
/// For d = 3 the graded module lives over the double cover (the group acting in the
/// fibration over S^3/cover); for d = 2 it lives over the point group itself.
struct TilingModel {
  std::string name;
  std::size_t dimension = 0;
  GroupPtr point_group;
  GroupPtr cover;
  GradedGModule cohomology;
  bool has_invariant_skeleton = false;
  std::string provenance;

  const GroupPtr& acting_group() const { return cohomology.degrees.at(0).group(); }
  std::size_t top_degree() const { return cohomology.top_degree(); }
  const GModule& degree(std::size_t k) const { return cohomology.degrees.at(k); }

  void validate() const {
    cohomology.validate();
    if (dimension != 2 && dimension != 3) throw ValidationError(name + ": dimension must be 2 or 3");
    if (!point_group) throw ValidationError(name + ": missing point group");
    if (dimension == 3 && !cover) throw ValidationError(name + ": three-dimensional models need a double cover");
    const GroupPtr expected = dimension == 3 ? cover : point_group;
    if (acting_group()->name != expected->name)
      throw ValidationError(name + ": coefficients must be modules over " + expected->name);
  }
};

inline const char* kActionConvention = "H^1 action = rotation image rho(g) (inverse-transpose coincides for orthogonal matrices)";

/// The d-torus R^d/Z^d: degree k is the k-th exterior power of the standard module of `acting`.
inline TilingModel torus_model(std::size_t d, const GroupPtr& acting) {
  if (!acting->rotation_image) throw ValidationError("torus_model: " + acting->name + " has no integral rotation image");
  const GModule standard = GModule::standard(acting);
  if (standard.rank() != d) throw ValidationError("torus_model: rotation image of " + acting->name + " is not " + std::to_string(d) + "-dimensional");
  TilingModel m;
  m.name = "torus-" + std::to_string(d) + "/" + acting->name;
  m.dimension = d;
  if (d == 3) {
    if (!acting->quotient) throw ValidationError("torus_model: d = 3 needs a group in S^3 with quotient onto SO(3)");
    m.cover = acting;
    m.point_group = acting->quotient->target;
  } else {
    m.point_group = acting;
  }
  for (std::size_t k = 0; k <= d; ++k) m.cohomology.degrees.push_back(exterior_power(standard, k));
  m.has_invariant_skeleton = true;
  m.cohomology.provenance = m.provenance = std::string("exterior powers of the lattice; ") + kActionConvention;
  return m;
}

namespace detail {

// Square-free monomials x_{ij} in the cube W x W x W of wedges of two circles: one factor per
// distinct axis i, each factor one of the two loops j.
struct WedgeMonomial {
  std::vector<std::size_t> axes;
  std::vector<std::size_t> loops;
  friend bool operator==(const WedgeMonomial&, const WedgeMonomial&) = default;
};

inline std::vector<WedgeMonomial> wedge_basis(std::size_t degree) {
  std::vector<WedgeMonomial> out;
  for (const auto& axes : subsets(3, degree))
    for (std::size_t mask = 0; mask < (std::size_t{1} << degree); ++mask) {
      WedgeMonomial m{axes, std::vector<std::size_t>(degree)};
      for (std::size_t t = 0; t < degree; ++t) m.loops[t] = (mask >> (degree - 1 - t)) & 1;
      out.push_back(std::move(m));
    }
  return out;
}

// Image of the basis of degree `degree` under the signed permutation P (x_{ij} -> P_{ki} x_{kj}),
// reordered to increasing axes with the Koszul sign.
inline IntMatrix wedge_action(const IntMatrix& P, std::size_t degree) {
  const auto basis = wedge_basis(degree);
  IntMatrix out(basis.size(), basis.size());
  for (std::size_t col = 0; col < basis.size(); ++col) {
    const auto& src = basis[col];
    int sign = 1;
    std::vector<std::pair<std::size_t, std::size_t>> factors;
    for (std::size_t t = 0; t < degree; ++t) {
      const std::size_t i = src.axes[t];
      std::size_t k = 3;
      for (std::size_t r = 0; r < 3; ++r)
        if (P(r, i) != 0) k = r;
      if (k == 3) throw ValidationError("wedge_action: matrix is not a signed permutation");
      if (P(k, i) < 0) sign = -sign;
      factors.emplace_back(k, src.loops[t]);
    }
    for (std::size_t a = 0; a < factors.size(); ++a)
      for (std::size_t b = a + 1; b < factors.size(); ++b)
        if (factors[a].first > factors[b].first) sign = -sign;
    std::sort(factors.begin(), factors.end());
    WedgeMonomial target;
    for (const auto& [k, j] : factors) {
      target.axes.push_back(k);
      target.loops.push_back(j);
    }
    const auto row = static_cast<std::size_t>(std::find(basis.begin(), basis.end(), target) - basis.begin());
    out(row, col) = sign;
  }
  return out;
}

}  // namespace detail

/// Human-readable names of the degree-k basis, e.g. "x11x22".
inline std::vector<std::string> wedge_basis_labels(std::size_t degree) {
  std::vector<std::string> out;
  for (const auto& m : detail::wedge_basis(degree)) {
    std::string s;
    for (std::size_t t = 0; t < m.axes.size(); ++t) s += "x" + std::to_string(m.axes[t] + 1) + std::to_string(m.loops[t] + 1);
    out.push_back(s.empty() ? "1" : s);
  }
  return out;
}

/// Sturmian decorated cube: H*(W x W x W) with W a wedge of two circles, over 2O.
inline TilingModel wedge_cube_model() {
  const GroupPtr cover = shared_group("2O");
  TilingModel m;
  m.name = "sturmian-cube";
  m.dimension = 3;
  m.cover = cover;
  m.point_group = cover->quotient->target;
  for (std::size_t k = 0; k <= 3; ++k) {
    std::vector<IntMatrix> gens;
    for (int g : cover->generators) gens.push_back(detail::wedge_action((*cover->rotation_image)[static_cast<std::size_t>(g)], k));
    m.cohomology.degrees.emplace_back(cover, gens.front().rows(), std::move(gens));
  }
  m.has_invariant_skeleton = true;
  m.cohomology.provenance = m.provenance =
      std::string("square-free monomials x_ij, Koszul reordering sign; ") + kActionConvention;
  return m;
}

/// Once-punctured (d+1)-torus: rank C(d+1, a) in degrees a <= d. For even d the point group C_2
/// acts by (-1)^a; for odd d the point group is trivial.
inline TilingModel punctured_torus_model(std::size_t d) {
  if (d < 2) throw ValidationError("punctured_torus_model: d must be at least 2");
  if (d > 3) throw ValidationError("punctured_torus_model: only d = 2 and d = 3 are supported by the pipelines");
  auto binom = [](std::size_t n, std::size_t k) {
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  TilingModel m;
  m.name = "punctured-torus-d" + std::to_string(d);
  m.dimension = d;
  GroupPtr acting;
  if (d % 2 == 0) {
    acting = shared_group("C_2");
    m.point_group = acting;
  } else {
    acting = shared_group("2C_1");
    m.cover = acting;
    m.point_group = acting->quotient->target;
  }
  for (std::size_t a = 0; a <= d; ++a) {
    const std::size_t r = binom(d + 1, a);
    const long s = (d % 2 == 0 && a % 2 == 1) ? -1 : 1;
    std::vector<IntMatrix> gens;
    for (std::size_t g = 0; g < acting->generator_count(); ++g) {
      IntMatrix mat = IntMatrix::identity(r);
      for (std::size_t i = 0; i < r; ++i) mat(i, i) = s;
      gens.push_back(std::move(mat));
    }
    m.cohomology.degrees.emplace_back(acting, r, std::move(gens));
  }
  m.has_invariant_skeleton = true;
  m.cohomology.provenance = m.provenance = d % 2 == 0 ? "C_2 acts by x -> -x, hence by (-1)^a in degree a" : "trivial point group";
  return m;
}

inline const std::vector<std::string>& builtin_model_names() {
  static const std::vector<std::string> names{"cube-lattice", "sturmian-cube", "punctured-torus-d2", "punctured-torus-d3"};
  return names;
}

inline TilingModel builtin_model(const std::string& name) {
  if (name == "cube-lattice") {
    TilingModel m = torus_model(3, shared_group("2O"));
    m.name = name;
    return m;
  }
  if (name == "sturmian-cube") return wedge_cube_model();
  if (name == "punctured-torus-d2") return punctured_torus_model(2);
  if (name == "punctured-torus-d3") return punctured_torus_model(3);
  throw ValidationError("unknown tiling model '" + name + "'");
}

// ---------------------------------------------------------------------------------------------
// JSON

inline nlohmann::json matrix_to_json(const IntMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).get_si());
    rows.push_back(std::move(row));
  }
  return rows;
}

inline IntMatrix matrix_from_json(const nlohmann::json& j, std::size_t n) {
  if (!j.is_array() || j.size() != n) throw ValidationError("matrix must be an array of " + std::to_string(n) + " rows");
  IntMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (!j[r].is_array() || j[r].size() != n) throw ValidationError("matrix row must have " + std::to_string(n) + " entries");
    for (std::size_t c = 0; c < n; ++c) {
      if (!j[r][c].is_number_integer()) throw ValidationError("matrix entries must be integers");
      m(r, c) = j[r][c].get<long>();
    }
  }
  return m;
}

/// {"group": name, "rank": r, "action": {generator: matrix}, "ring": "Z"}.
inline nlohmann::json gmodule_to_json(const GModule& M) {
  nlohmann::json action = nlohmann::json::object();
  for (std::size_t g = 0; g < M.generator_matrices().size(); ++g)
    action[M.group()->generator_names.at(g)] = matrix_to_json(M.generator_matrix(g));
  return {{"group", M.group()->name}, {"rank", M.rank()}, {"action", action}, {"ring", M.ring().name()}};
}

inline GroupPtr resolve_group(const std::string& name) { return shared_group(name); }

inline GModule gmodule_from_json(const nlohmann::json& j, const GroupPtr& expected = nullptr) {
  for (const char* key : {"group", "rank", "action"})
    if (!j.contains(key)) throw ValidationError(std::string("module descriptor is missing \"") + key + "\"");
  const GroupPtr G = expected ? expected : resolve_group(j.at("group").get<std::string>());
  if (j.at("group").get<std::string>() != G->name)
    throw ValidationError("module is over " + j.at("group").get<std::string>() + ", expected " + G->name);
  if (!j.at("rank").is_number_unsigned()) throw ValidationError("module rank must be a natural number");
  const std::size_t r = j.at("rank").get<std::size_t>();
  const Ring ring = Ring::parse(j.value("ring", std::string("Z")));
  std::vector<IntMatrix> gens;
  for (const auto& name : G->generator_names) {
    if (!j.at("action").contains(name)) throw ValidationError("module action is missing generator \"" + name + "\"");
    gens.push_back(matrix_from_json(j.at("action").at(name), r));
  }
  return GModule(G, r, std::move(gens), ring);
}

inline nlohmann::json model_to_json(const TilingModel& m) {
  nlohmann::json degrees = nlohmann::json::array();
  for (const auto& M : m.cohomology.degrees) degrees.push_back(gmodule_to_json(M));
  nlohmann::json out{{"name", m.name},
                     {"dimension", m.dimension},
                     {"point_group", m.point_group->name},
                     {"has_invariant_skeleton", m.has_invariant_skeleton},
                     {"provenance", m.provenance},
                     {"degrees", degrees}};
  if (m.cover) out["cover"] = m.cover->name;
  return out;
}

inline TilingModel model_from_json(const nlohmann::json& j) {
  for (const char* key : {"name", "dimension", "point_group", "degrees"})
    if (!j.contains(key)) throw ValidationError(std::string("model is missing \"") + key + "\"");
  TilingModel m;
  m.name = j.at("name").get<std::string>();
  m.dimension = j.at("dimension").get<std::size_t>();
  m.has_invariant_skeleton = j.value("has_invariant_skeleton", false);
  m.provenance = j.value("provenance", std::string("custom model"));
  if (j.contains("cover")) {
    m.cover = resolve_group(j.at("cover").get<std::string>());
    if (!m.cover->quotient) throw ValidationError("cover " + m.cover->name + " has no quotient map");
    m.point_group = m.cover->quotient->target;
    if (m.point_group->name != j.at("point_group").get<std::string>())
      throw ValidationError("cover " + m.cover->name + " does not cover " + j.at("point_group").get<std::string>());
  } else {
    m.point_group = resolve_group(j.at("point_group").get<std::string>());
  }
  const GroupPtr acting = m.dimension == 3 ? m.cover : m.point_group;
  if (!acting) throw ValidationError("three-dimensional models need a \"cover\"");
  if (!j.at("degrees").is_array() || j.at("degrees").empty()) throw ValidationError("model must list degree 0");
  for (const auto& d : j.at("degrees")) m.cohomology.degrees.push_back(gmodule_from_json(d, acting));
  m.cohomology.provenance = m.provenance;
  m.validate();
  return m;
}

/// Reads a JSON model file (schema of model_to_json).
inline TilingModel load_custom_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("model file " + path + ": " + e.what());
  }
  return model_from_json(j);
}

/// Built-in name or path to a JSON model file.
inline TilingModel resolve_model(const std::string& selector) {
  const auto& names = builtin_model_names();
  if (std::find(names.begin(), names.end(), selector) != names.end()) return builtin_model(selector);
  return load_custom_model(selector);
}

}  // namespace rotohull

#endif  // ROTOHULL_TILING_MODELS_HPP
