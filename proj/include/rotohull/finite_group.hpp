#ifndef ROTOHULL_FINITE_GROUP_HPP
#define ROTOHULL_FINITE_GROUP_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "rotohull/int_matrix.hpp"
#include "rotohull/quaternion.hpp"

namespace rotohull {

inline constexpr std::size_t kDefaultClosureBound = 10000;

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

/// Finite group stored by its multiplication table.
///
/// Elements are indexed 0..order-1 with the identity at 0. Every element carries a word in the
/// designated generators (breadth-first, so words are shortest). Optional data: an exact rotation
/// image per element, quaternion coordinates, and a quotient map onto another group.
class FiniteGroup {
 public:
  struct Quotient {
    GroupPtr target;
    std::vector<int> map;
  };

  std::string name;
  std::vector<std::string> labels;
  std::vector<std::vector<int>> table;
  std::vector<int> inverse;
  std::vector<int> generators;
  std::vector<std::string> generator_names;
  std::vector<std::vector<int>> words;
  std::optional<std::vector<IntMatrix>> rotation_image;
  std::optional<std::vector<Quaternion>> quaternions;
  std::optional<Quotient> quotient;

  std::size_t order() const { return table.size(); }
  int identity() const { return 0; }
  int mul(int a, int b) const { return table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
  int inv(int a) const { return inverse[static_cast<std::size_t>(a)]; }
  std::size_t generator_count() const { return generators.size(); }

  int element_order(int a) const {
    int k = 1;
    for (int x = a; x != identity(); x = mul(x, a)) ++k;
    return k;
  }

  bool is_abelian() const {
    for (std::size_t a = 0; a < order(); ++a)
      for (std::size_t b = 0; b < order(); ++b)
        if (table[a][b] != table[b][a]) return false;
    return true;
  }

  bool is_central(int a) const {
    for (std::size_t b = 0; b < order(); ++b)
      if (mul(a, static_cast<int>(b)) != mul(static_cast<int>(b), a)) return false;
    return true;
  }

  /// Evaluates a word of signed 1-based generator references (+i generator i, -i its inverse).
  int evaluate(const std::vector<int>& signed_word) const {
    int x = identity();
    for (int letter : signed_word) {
      const int g = generators.at(static_cast<std::size_t>(std::abs(letter) - 1));
      x = mul(x, letter > 0 ? g : inv(g));
    }
    return x;
  }

  std::optional<int> find_label(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return static_cast<int>(i);
    return std::nullopt;
  }

  /// Exhaustive structural checks; throws ValidationError on the first failure.
  void validate() const {
    const std::size_t n = order();
    if (n == 0) throw ValidationError(name + ": empty group");
    for (std::size_t a = 0; a < n; ++a) {
      if (table[a].size() != n) throw ValidationError(name + ": ragged table");
      if (mul(0, static_cast<int>(a)) != static_cast<int>(a) || mul(static_cast<int>(a), 0) != static_cast<int>(a))
        throw ValidationError(name + ": element 0 is not the identity");
      if (mul(static_cast<int>(a), inv(static_cast<int>(a))) != 0) throw ValidationError(name + ": bad inverse");
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const int ab = table[a][b];
        for (std::size_t c = 0; c < n; ++c)
          if (table[static_cast<std::size_t>(ab)][c] != table[a][static_cast<std::size_t>(table[b][c])])
            throw ValidationError(name + ": table is not associative");
      }
    if (rotation_image) {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (!((*rotation_image)[a] * (*rotation_image)[b] == (*rotation_image)[static_cast<std::size_t>(table[a][b])]))
            throw ValidationError(name + ": rotation image is not a homomorphism");
    }
    if (quotient) {
      const auto& q = *quotient;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (q.map[static_cast<std::size_t>(table[a][b])] != q.target->mul(q.map[a], q.map[b]))
            throw ValidationError(name + ": quotient map is not a homomorphism");
    }
  }
};

/// Breadth-first closure of `gens` under right multiplication, then the full table.
template <class T, class Mul, class Key>
FiniteGroup close_group(std::string name, const std::vector<T>& gens, std::vector<std::string> gen_names, const T& one,
                        Mul mul, Key key, std::vector<T>& elements, std::size_t bound = kDefaultClosureBound) {
  FiniteGroup G;
  G.name = std::move(name);
  elements.clear();
  std::map<std::string, int> index;
  elements.push_back(one);
  index.emplace(key(one), 0);
  G.words.push_back({});
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (std::size_t i = 0; i < gens.size(); ++i) {
      T x = mul(elements[head], gens[i]);
      std::string k = key(x);
      if (index.count(k)) continue;
      if (elements.size() >= bound)
        throw ValidationError(G.name + ": closure exceeds bound of " + std::to_string(bound) + " elements");
      index.emplace(std::move(k), static_cast<int>(elements.size()));
      auto w = G.words[head];
      w.push_back(static_cast<int>(i));
      G.words.push_back(std::move(w));
      elements.push_back(std::move(x));
    }
  }
  const std::size_t n = elements.size();
  G.table.assign(n, std::vector<int>(n));
  G.inverse.assign(n, -1);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      auto it = index.find(key(mul(elements[a], elements[b])));
      if (it == index.end()) throw ValidationError(G.name + ": products leave the generated set");
      G.table[a][b] = it->second;
      if (it->second == 0) G.inverse[a] = static_cast<int>(b);
    }
  for (std::size_t a = 0; a < n; ++a) {
    G.labels.push_back(key(elements[a]));
    if (G.inverse[a] < 0) throw ValidationError(G.name + ": element without inverse");
  }
  for (std::size_t i = 0; i < gens.size(); ++i) G.generators.push_back(index.at(key(gens[i])));
  G.generator_names = std::move(gen_names);
  if (G.generator_names.size() != gens.size()) {
    G.generator_names.clear();
    for (std::size_t i = 0; i < gens.size(); ++i) G.generator_names.push_back("g" + std::to_string(i + 1));
  }
  return G;
}

namespace detail {

inline std::string matrix_key(const IntMatrix& m) { return m.to_string(); }

inline bool is_orthogonal_integer(const IntMatrix& m) {
  if (!m.is_square()) return false;
  return m * m.transpose() == IntMatrix::identity(m.rows());
}

}  // namespace detail

/// Group generated by exact integer orthogonal matrices; the rotation image is the inclusion.
inline FiniteGroup generate_group(std::string name, const std::vector<IntMatrix>& gens,
                                  std::vector<std::string> gen_names = {}, std::size_t dimension = 0,
                                  std::size_t bound = kDefaultClosureBound) {
  const std::size_t d = gens.empty() ? dimension : gens.front().rows();
  for (const auto& g : gens)
    if (g.rows() != d || !detail::is_orthogonal_integer(g))
      throw ValidationError(name + ": generator is not an orthogonal integer matrix of size " + std::to_string(d));
  std::vector<IntMatrix> elements;
  FiniteGroup G = close_group(
      std::move(name), gens, std::move(gen_names), IntMatrix::identity(d), [](const IntMatrix& a, const IntMatrix& b) { return a * b; },
      detail::matrix_key, elements, bound);
  G.rotation_image = std::move(elements);
  return G;
}

/// Group generated by unit quaternions in S^3, with rotation image (when integral) and the
/// quotient map onto that image.
inline FiniteGroup generate_group(std::string name, const std::vector<Quaternion>& gens,
                                  std::vector<std::string> gen_names = {}, std::size_t bound = kDefaultClosureBound) {
  for (const auto& q : gens)
    if (!q.is_unit()) throw ValidationError(name + ": generator " + q.to_string() + " is not a unit quaternion");
  std::vector<Quaternion> elements;
  const auto names_copy = gen_names;
  FiniteGroup G = close_group(
      name, gens, std::move(gen_names), Quaternion::one(), [](const Quaternion& a, const Quaternion& b) { return a * b; },
      [](const Quaternion& q) { return q.to_string(); }, elements, bound);
  G.quaternions = elements;
  bool integral = true;
  std::vector<IntMatrix> rot;
  for (const auto& q : elements) {
    try {
      rot.push_back(q.integer_rotation());
    } catch (const ValidationError&) {
      integral = false;
      break;
    }
  }
  if (integral) {
    G.rotation_image = rot;
    std::vector<IntMatrix> image_gens;
    for (int g : G.generators) image_gens.push_back(rot[static_cast<std::size_t>(g)]);
    std::string image_name = name.size() > 1 && name[0] == '2' ? name.substr(1) : name + "/{+-1}";
    auto target = std::make_shared<FiniteGroup>(generate_group(image_name, image_gens, names_copy, 3, bound));
    FiniteGroup::Quotient q;
    q.target = target;
    for (const auto& m : rot) q.map.push_back(*target->find_label(detail::matrix_key(m)));
    G.quotient = std::move(q);
  }
  return G;
}

/// Abstract cyclic group Z/n with generator "a"; the rotation image in SO(2) is attached when integral.
inline FiniteGroup cyclic_group(int n) {
  if (n < 1) throw ValidationError("cyclic group order must be positive");
  std::vector<int> elements;
  FiniteGroup G = close_group(
      "C_" + std::to_string(n), n == 1 ? std::vector<int>{} : std::vector<int>{1}, {"a"}, 0,
      [n](int a, int b) { return (a + b) % n; }, [](int a) { return std::to_string(a); }, elements);
  if (n == 1) G.generator_names.clear();
  if (n == 1 || n == 2 || n == 4) {
    const IntMatrix quarter{{0, -1}, {1, 0}};
    std::vector<IntMatrix> rot;
    for (int k : elements) {
      IntMatrix m = IntMatrix::identity(2);
      for (int s = 0; s < k * (4 / n); ++s) m = quarter * m;
      rot.push_back(m);
    }
    G.rotation_image = std::move(rot);
  }
  return G;
}

/// Generators of the binary octahedral group: (1+k)/sqrt2 and (1+i+j+k)/2.
inline std::vector<Quaternion> binary_octahedral_generators() {
  const QSqrt2 h(mpq_class(0), mpq_class(1, 2));  // 1/sqrt2 = sqrt2/2
  const QSqrt2 half(mpq_class(1, 2));
  return {Quaternion{h, 0, 0, h}, Quaternion{half, half, half, half}};
}

/// Registry: "2O", "O", "C_n", "trivial", "pm", "pm_d", "2C_n" (n in {1,2,4}).
inline FiniteGroup builtin_group(const std::string& name) {
  if (name == "2O") return generate_group("2O", binary_octahedral_generators(), {"r", "d"});
  if (name == "O") {
    FiniteGroup cover = generate_group("2O", binary_octahedral_generators(), {"r", "d"});
    return *cover.quotient->target;
  }
  if (name == "trivial") return generate_group("trivial", std::vector<IntMatrix>{}, {}, 3);
  if (name.rfind("C_", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(name.substr(2));
    } catch (...) {
      throw ValidationError("unknown group '" + name + "'");
    }
    return cyclic_group(n);
  }
  if (name == "pm" || name.rfind("pm_", 0) == 0) {
    const std::size_t d = name == "pm" ? 2 : std::stoul(name.substr(3));
    FiniteGroup G = generate_group(name, {-IntMatrix::identity(d)}, {"s"});
    return G;
  }
  if (name.rfind("2C_", 0) == 0) {
    const std::string n = name.substr(3);
    const QSqrt2 h(mpq_class(0), mpq_class(1, 2));
    Quaternion c;
    if (n == "1")
      c = {-1, 0, 0, 0};
    else if (n == "2")
      c = {0, 0, 0, 1};
    else if (n == "4")
      c = {h, 0, 0, h};
    else
      throw ValidationError("binary cyclic group " + name + " needs n in {1,2,4}");
    return generate_group(name, std::vector<Quaternion>{c}, {"c"});
  }
  throw ValidationError("unknown group '" + name + "'");
}

/// Shared, process-wide instance of a built-in group. "O" is the quotient target of the shared
/// "2O", so modules pulled back along the cover refer to the same object.
inline GroupPtr shared_group(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, GroupPtr> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(name); it != cache.end()) return it->second;
  }
  GroupPtr out;
  if (name == "O") {
    out = shared_group("2O")->quotient->target;
  } else {
    out = std::make_shared<const FiniteGroup>(builtin_group(name));
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(name, out).first->second;
}

}  // namespace rotohull

#endif  // ROTOHULL_FINITE_GROUP_HPP
