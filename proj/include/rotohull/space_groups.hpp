#ifndef ROTOHULL_SPACE_GROUPS_HPP
#define ROTOHULL_SPACE_GROUPS_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rotohull/abelian_group.hpp"
#include "rotohull/finite_group.hpp"
#include "rotohull/smith.hpp"

namespace rotohull {

/// Word in a free group: signed 1-based generator indices (-i is the inverse of generator i).
using Word = std::vector<int>;

inline Word inverse_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& x : out) x = -x;
  return out;
}

inline Word concat(Word a, const Word& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline Word free_reduce(const Word& w) {
  Word out;
  for (int x : w) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

/// x^k as a word.
inline Word power_word(int generator, long k) {
  return Word(static_cast<std::size_t>(k < 0 ? -k : k), k < 0 ? -generator : generator);
}

/// Commutator x y x^-1 y^-1 of two words.
inline Word commutator(const Word& x, const Word& y) { return concat(concat(x, y), concat(inverse_word(x), inverse_word(y))); }

/// Finite presentation with optional designated map onto a finite group.
struct GroupPresentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;
  std::map<std::string, std::string> metadata;
  GroupPtr quotient;
  /// Element index in `quotient` for each generator.
  std::vector<int> quotient_images;

  std::size_t generator_count() const { return generators.size(); }

  void validate() const {
    for (const auto& r : relators)
      for (int x : r)
        if (x == 0 || static_cast<std::size_t>(x < 0 ? -x : x) > generators.size())
          throw ValidationError("relator references an unknown generator");
    if (quotient && quotient_images.size() != generators.size())
      throw ValidationError("quotient map must give an image for every generator");
  }

  /// True when every relator maps to the identity of the quotient.
  bool quotient_map_is_homomorphism() const {
    if (!quotient) return false;
    for (const auto& r : relators) {
      int e = quotient->identity();
      for (int x : r) {
        const int img = quotient_images[static_cast<std::size_t>((x < 0 ? -x : x) - 1)];
        e = quotient->mul(e, x < 0 ? quotient->inv(img) : img);
      }
      if (e != quotient->identity()) return false;
    }
    return true;
  }

  std::string word_to_string(const Word& w) const {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      std::string name = generators.at(static_cast<std::size_t>((w[i] < 0 ? -w[i] : w[i]) - 1));
      if (w[i] < 0) name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
      out += (i ? " " : "") + name;
    }
    return out;
  }

  /// "generators: a b\n" followed by one relator per line; an uppercase first letter inverts.
  std::string to_text() const {
    std::string out = "generators:";
    for (const auto& g : generators) out += " " + g;
    out += "\n";
    for (const auto& r : relators) out += word_to_string(r) + "\n";
    return out;
  }
};

/// Parses the text format of GroupPresentation::to_text. Tokens may carry an exponent: "r^4".
inline GroupPresentation parse_presentation(const std::string& text) {
  GroupPresentation P;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string t; ls >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    if (!header) {
      if (tokens[0] != "generators:") throw ValidationError("presentation must start with 'generators:'");
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        const auto& g = tokens[i];
        if (!std::islower(static_cast<unsigned char>(g[0]))) throw ValidationError("generator names must start with a lowercase letter: " + g);
        if (std::find(P.generators.begin(), P.generators.end(), g) != P.generators.end()) throw ValidationError("duplicate generator " + g);
        P.generators.push_back(g);
      }
      header = true;
      continue;
    }
    Word w;
    for (auto t : tokens) {
      long exponent = 1;
      if (auto caret = t.find('^'); caret != std::string::npos) {
        try {
          exponent = std::stol(t.substr(caret + 1));
        } catch (...) {
          throw ValidationError("bad exponent in token " + t);
        }
        t.resize(caret);
      }
      bool inverse = false;
      if (std::isupper(static_cast<unsigned char>(t[0]))) {
        inverse = true;
        t[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(t[0])));
      }
      const auto it = std::find(P.generators.begin(), P.generators.end(), t);
      if (it == P.generators.end()) throw ValidationError("unknown generator in relator: " + t);
      const int g = static_cast<int>(it - P.generators.begin()) + 1;
      const Word part = power_word(inverse ? -g : g, exponent);
      w.insert(w.end(), part.begin(), part.end());
    }
    P.relators.push_back(std::move(w));
  }
  if (!header) throw ValidationError("presentation has no generators line");
  return P;
}

// ---------------------------------------------------------------------------------------------
// Coset enumeration and presentations of finite groups

/// Hasse-Lloyd-Todd coset enumeration over the trivial subgroup. Returns the index, or nothing
/// when `limit` cosets are exceeded.
inline std::optional<std::size_t> enumerate_cosets(std::size_t generator_count, const std::vector<Word>& relators,
                                                   std::size_t limit = 20000) {
  const std::size_t cols = 2 * generator_count;
  auto col = [](int x) { return static_cast<std::size_t>(x > 0 ? 2 * (x - 1) : 2 * (-x - 1) + 1); };
  auto inv = [](std::size_t c) { return c ^ 1U; };
  std::vector<std::vector<long>> table;
  std::vector<long> parent;
  auto add_coset = [&]() {
    table.emplace_back(cols, -1);
    parent.push_back(static_cast<long>(parent.size()));
    return static_cast<long>(table.size() - 1);
  };
  add_coset();
  auto rep = [&](long c) {
    long r = c;
    while (parent[static_cast<std::size_t>(r)] != r) r = parent[static_cast<std::size_t>(r)];
    while (parent[static_cast<std::size_t>(c)] != r) {
      const long next = parent[static_cast<std::size_t>(c)];
      parent[static_cast<std::size_t>(c)] = r;
      c = next;
    }
    return r;
  };
  auto merge = [&](long a, long b, std::vector<long>& queue) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
    queue.push_back(b);
  };
  auto coincidence = [&](long a, long b) {
    std::vector<long> queue;
    merge(a, b, queue);
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const long e = queue[i];
      for (std::size_t x = 0; x < cols; ++x) {
        const long f = table[static_cast<std::size_t>(e)][x];
        if (f < 0) continue;
        table[static_cast<std::size_t>(f)][inv(x)] = -1;
        const long e1 = rep(e), f1 = rep(f);
        if (table[static_cast<std::size_t>(e1)][x] >= 0) {
          merge(f1, table[static_cast<std::size_t>(e1)][x], queue);
        } else if (table[static_cast<std::size_t>(f1)][inv(x)] >= 0) {
          merge(e1, table[static_cast<std::size_t>(f1)][inv(x)], queue);
        } else {
          table[static_cast<std::size_t>(e1)][x] = f1;
          table[static_cast<std::size_t>(f1)][inv(x)] = e1;
        }
      }
    }
  };
  bool overflow = false;
  auto define = [&](long c, std::size_t x) {
    if (table.size() >= limit) {
      overflow = true;
      return;
    }
    const long n = add_coset();
    table[static_cast<std::size_t>(c)][x] = n;
    table[static_cast<std::size_t>(n)][inv(x)] = c;
  };
  auto scan_and_fill = [&](long c, const Word& w) {
    if (w.empty()) return;
    long f = c, b = c;
    std::size_t i = 0, j = w.size() - 1;
    for (;;) {
      while (i <= j && table[static_cast<std::size_t>(f)][col(w[i])] >= 0) {
        f = table[static_cast<std::size_t>(f)][col(w[i])];
        ++i;
        if (i == 0) break;
      }
      if (i > j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i && table[static_cast<std::size_t>(b)][inv(col(w[j]))] >= 0) {
        b = table[static_cast<std::size_t>(b)][inv(col(w[j]))];
        if (j == 0) {
          // Entire word scanned backwards.
          if (f != b) coincidence(f, b);
          return;
        }
        --j;
      }
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        table[static_cast<std::size_t>(f)][col(w[i])] = b;
        table[static_cast<std::size_t>(b)][inv(col(w[i]))] = f;
        return;
      }
      define(f, col(w[i]));
      if (overflow) return;
    }
  };
  for (std::size_t c = 0; c < table.size(); ++c) {
    for (const auto& r : relators) {
      if (parent[c] != static_cast<long>(c)) break;
      scan_and_fill(static_cast<long>(c), r);
      if (overflow) return std::nullopt;
    }
    for (std::size_t x = 0; x < cols; ++x) {
      if (parent[c] != static_cast<long>(c)) break;
      if (table[c][x] < 0) define(static_cast<long>(c), x);
      if (overflow) return std::nullopt;
    }
  }
  std::size_t alive = 0;
  for (std::size_t c = 0; c < parent.size(); ++c) alive += parent[c] == static_cast<long>(c);
  return alive;
}

/// Presentation of a finite group on its designated generators: fundamental cycles of the
/// Cayley graph, pruned while coset enumeration still returns the group order.
inline GroupPresentation finite_group_presentation(const FiniteGroup& G, std::size_t coset_limit = 20000) {
  GroupPresentation P;
  P.generators = G.generator_names;
  const std::size_t k = G.generator_count();
  auto to_word = [](const std::vector<int>& letters) {
    Word w;
    for (int l : letters) w.push_back(l + 1);
    return w;
  };
  std::vector<Word> relators;
  for (std::size_t g = 0; g < G.order(); ++g)
    for (std::size_t x = 0; x < k; ++x) {
      const int h = G.mul(static_cast<int>(g), G.generators[x]);
      Word w = concat(to_word(G.words[g]), Word{static_cast<int>(x) + 1});
      w = free_reduce(concat(w, inverse_word(to_word(G.words[static_cast<std::size_t>(h)]))));
      if (w.empty()) continue;
      // Cyclically reduce and keep one representative per cyclic rotation class.
      while (w.size() > 1 && w.front() == -w.back()) w = Word(w.begin() + 1, w.end() - 1);
      relators.push_back(w);
    }
  std::sort(relators.begin(), relators.end(), [](const Word& a, const Word& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
  relators.erase(std::unique(relators.begin(), relators.end()), relators.end());
  // Longest relators are the first candidates for removal.
  for (std::size_t i = relators.size(); i-- > 0;) {
    std::vector<Word> trial = relators;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
    const auto index = enumerate_cosets(k, trial, coset_limit);
    if (index && *index == G.order()) relators = std::move(trial);
  }
  P.relators = std::move(relators);
  P.quotient = nullptr;
  P.metadata["group"] = G.name;
  return P;
}

// ---------------------------------------------------------------------------------------------
// Extensions

/// Data of an extension 1 -> N -> Gamma -> G -> 1.
struct ExtensionSpec {
  enum class Kernel { FreeAbelian, ProductOfFree };
  Kernel kernel = Kernel::FreeAbelian;
  /// FreeAbelian: {rank}. ProductOfFree: ranks of the free factors (direct product).
  std::vector<std::size_t> ranks;
  GroupPtr quotient;
  /// FreeAbelian: one matrix per quotient generator (columns are images of kernel generators).
  std::vector<IntMatrix> matrices;
  /// ProductOfFree: per quotient generator, the image word of each kernel generator.
  std::vector<std::vector<Word>> free_images;
  /// Optional normalized 2-cocycle f(g, h) in Z^N, indexed [g][h] by element index.
  std::optional<std::vector<std::vector<IntVector>>> cocycle;
  std::string label;

  std::size_t kernel_generator_count() const { return std::accumulate(ranks.begin(), ranks.end(), std::size_t{0}); }
};

inline std::vector<std::string> kernel_generator_names(const ExtensionSpec& s) {
  std::vector<std::string> out;
  if (s.kernel == ExtensionSpec::Kernel::FreeAbelian) {
    for (std::size_t i = 1; i <= s.ranks.at(0); ++i) out.push_back("t" + std::to_string(i));
  } else {
    for (std::size_t f = 0; f < s.ranks.size(); ++f)
      for (std::size_t j = 0; j < s.ranks[f]; ++j) out.push_back(std::string(1, static_cast<char>('a' + j)) + std::to_string(f + 1));
  }
  return out;
}

namespace detail {

// Factor of each kernel generator in a direct product of free groups.
inline std::vector<std::size_t> factor_of(const ExtensionSpec& s) {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < s.ranks.size(); ++f) out.insert(out.end(), s.ranks[f], f);
  return out;
}

// Normal form in a direct product of free groups: freely reduced word per factor.
inline std::vector<Word> product_normal_form(const ExtensionSpec& s, const Word& w) {
  const auto factor = factor_of(s);
  std::vector<Word> parts(s.ranks.size());
  for (int x : w) parts[factor[static_cast<std::size_t>((x < 0 ? -x : x) - 1)]].push_back(x);
  for (auto& p : parts) p = free_reduce(p);
  return parts;
}

inline Word apply_free_action(const std::vector<Word>& images, const Word& w) {
  Word out;
  for (int x : w) {
    const Word& img = images[static_cast<std::size_t>((x < 0 ? -x : x) - 1)];
    const Word part = x < 0 ? inverse_word(img) : img;
    out.insert(out.end(), part.begin(), part.end());
  }
  return free_reduce(out);
}

inline Word kernel_vector_word(const IntVector& v) {
  Word w;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Word part = power_word(static_cast<int>(i) + 1, v[i].get_si());
    w.insert(w.end(), part.begin(), part.end());
  }
  return w;
}

}  // namespace detail

/// Matrix of the kernel action of every element of the quotient (free-abelian kernels).
inline std::vector<IntMatrix> extension_element_matrices(const ExtensionSpec& s) {
  const GroupPtr& G = s.quotient;
  const std::size_t N = s.ranks.at(0);
  std::vector<IntMatrix> out;
  for (const auto& word : G->words) {
    IntMatrix m = IntMatrix::identity(N);
    for (int l : word) m = m * s.matrices[static_cast<std::size_t>(l)];
    out.push_back(std::move(m));
  }
  return out;
}

/// Throws unless the action respects the quotient's multiplication and the cocycle identity
/// f(g,h) + f(gh,k) = g.f(h,k) + f(g,hk) holds.
inline void validate_extension(const ExtensionSpec& s) {
  if (!s.quotient) throw ValidationError("extension: missing quotient group");
  const GroupPtr& G = s.quotient;
  const std::size_t n = G->order();
  if (s.kernel == ExtensionSpec::Kernel::FreeAbelian) {
    if (s.ranks.size() != 1) throw ValidationError("extension: free-abelian kernel takes a single rank");
    const std::size_t N = s.ranks[0];
    if (s.matrices.size() != G->generator_count()) throw ValidationError("extension: need one action matrix per quotient generator");
    for (const auto& m : s.matrices) {
      if (m.rows() != N || m.cols() != N) throw ValidationError("extension: action matrix has the wrong size");
      const Int det = determinant(m);
      if (det != 1 && det != -1) throw ValidationError("extension: action matrix is not invertible over Z");
    }
    const auto rho = extension_element_matrices(s);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (!(rho[a] * rho[b] == rho[static_cast<std::size_t>(G->mul(static_cast<int>(a), static_cast<int>(b)))]))
          throw ValidationError("extension: action violates a relation of " + G->name);
    if (s.cocycle) {
      const auto& f = *s.cocycle;
      if (f.size() != n) throw ValidationError("extension: cocycle table must be indexed by all element pairs");
      for (const auto& row : f) {
        if (row.size() != n) throw ValidationError("extension: cocycle table must be indexed by all element pairs");
        for (const auto& v : row)
          if (v.size() != N) throw ValidationError("extension: cocycle values must lie in Z^N");
      }
      for (std::size_t g = 0; g < n; ++g)
        for (std::size_t h = 0; h < n; ++h)
          for (std::size_t k = 0; k < n; ++k) {
            const auto gh = static_cast<std::size_t>(G->mul(static_cast<int>(g), static_cast<int>(h)));
            const auto hk = static_cast<std::size_t>(G->mul(static_cast<int>(h), static_cast<int>(k)));
            IntVector lhs(N), rhs = rho[g] * f[h][k];
            for (std::size_t i = 0; i < N; ++i) {
              lhs[i] = f[g][h][i] + f[gh][k][i];
              rhs[i] += f[g][hk][i];
            }
            if (lhs != rhs) throw ValidationError("extension: cocycle identity fails at (" + G->labels[g] + ", " + G->labels[h] + ", " + G->labels[k] + ")");
          }
      for (std::size_t g = 0; g < n; ++g)
        for (std::size_t i = 0; i < N; ++i)
          if (f[0][g][i] != 0 || f[g][0][i] != 0) throw ValidationError("extension: cocycle must be normalized (f(1,g) = f(g,1) = 0)");
    }
  } else {
    if (s.cocycle) throw ValidationError("extension: cocycles are supported for free-abelian kernels only");
    const std::size_t K = s.kernel_generator_count();
    if (s.free_images.size() != G->generator_count()) throw ValidationError("extension: need kernel images per quotient generator");
    for (const auto& imgs : s.free_images) {
      if (imgs.size() != K) throw ValidationError("extension: need an image word for every kernel generator");
      for (const auto& w : imgs)
        for (int x : w)
          if (x == 0 || static_cast<std::size_t>(x < 0 ? -x : x) > K) throw ValidationError("extension: image word uses an unknown kernel generator");
    }
    // phi_x^{ord x} = id, so phi_x^{ord x - 1} inverts phi_x below.
    for (std::size_t x = 0; x < G->generator_count(); ++x) {
      const int order = G->element_order(G->generators[x]);
      for (std::size_t t = 1; t <= K; ++t) {
        Word w{static_cast<int>(t)};
        for (int rep = 0; rep < order; ++rep) w = detail::apply_free_action(s.free_images[x], w);
        if (detail::product_normal_form(s, w) != detail::product_normal_form(s, Word{static_cast<int>(t)}))
          throw ValidationError("extension: action of " + G->generator_names[x] + " does not have the generator's order");
      }
    }
    // Each relator of G must act trivially on every kernel generator.
    const GroupPresentation PG = finite_group_presentation(*G);
    for (const auto& r : PG.relators)
      for (std::size_t t = 1; t <= K; ++t) {
        Word w{static_cast<int>(t)};
        // x acts by conjugation x k x^-1; apply the relator's letters right to left.
        for (auto it = r.rbegin(); it != r.rend(); ++it) {
          const int x = *it;
          if (x > 0) {
            w = detail::apply_free_action(s.free_images[static_cast<std::size_t>(x - 1)], w);
          } else {
            const int g = G->generators[static_cast<std::size_t>(-x - 1)];
            const int order = G->element_order(g);
            for (int rep = 1; rep < order; ++rep) w = detail::apply_free_action(s.free_images[static_cast<std::size_t>(-x - 1)], w);
          }
        }
        if (detail::product_normal_form(s, w) != detail::product_normal_form(s, Word{static_cast<int>(t)}))
          throw ValidationError("extension: kernel action violates a relation of " + G->name);
      }
  }
}

/// Presentation of the extension: kernel relators, lifted quotient relators with cocycle
/// corrections, and conjugation relators x k x^-1 = x.k.
inline GroupPresentation extension_presentation(const ExtensionSpec& s) {
  validate_extension(s);
  const GroupPtr& G = s.quotient;
  GroupPresentation P;
  P.generators = kernel_generator_names(s);
  const std::size_t K = P.generators.size();
  for (const auto& name : G->generator_names) {
    if (std::find(P.generators.begin(), P.generators.end(), name) != P.generators.end())
      throw ValidationError("extension: quotient generator name " + name + " clashes with a kernel generator");
    P.generators.push_back(name);
  }
  auto lift = [&](int x) { return x > 0 ? x + static_cast<int>(K) : x - static_cast<int>(K); };
  // Kernel relators.
  if (s.kernel == ExtensionSpec::Kernel::FreeAbelian) {
    for (std::size_t i = 1; i <= K; ++i)
      for (std::size_t j = i + 1; j <= K; ++j) P.relators.push_back(commutator({static_cast<int>(i)}, {static_cast<int>(j)}));
  } else {
    const auto factor = detail::factor_of(s);
    for (std::size_t i = 1; i <= K; ++i)
      for (std::size_t j = i + 1; j <= K; ++j)
        if (factor[i - 1] != factor[j - 1]) P.relators.push_back(commutator({static_cast<int>(i)}, {static_cast<int>(j)}));
  }
  // Lifted relators of G.
  const GroupPresentation PG = finite_group_presentation(*G);
  std::vector<IntMatrix> rho;
  if (s.kernel == ExtensionSpec::Kernel::FreeAbelian) rho = extension_element_matrices(s);
  for (const auto& r : PG.relators) {
    Word lifted;
    for (int x : r) lifted.push_back(lift(x));
    if (s.kernel == ExtensionSpec::Kernel::FreeAbelian && s.cocycle) {
      // Evaluate the section product (n, g) in the extension.
      const std::size_t N = K;
      const auto& f = *s.cocycle;
      IntVector n(N);
      int g = G->identity();
      for (int x : r) {
        int h = G->generators[static_cast<std::size_t>((x < 0 ? -x : x) - 1)];
        IntVector m(N);
        if (x < 0) {
          // (0, h)^-1 = (-rho(h^-1) f(h, h^-1), h^-1)
          const int hi = G->inv(h);
          m = rho[static_cast<std::size_t>(hi)] * f[static_cast<std::size_t>(h)][static_cast<std::size_t>(hi)];
          for (auto& v : m) v = -v;
          h = hi;
        }
        const IntVector gm = rho[static_cast<std::size_t>(g)] * m;
        const IntVector& fgh = f[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)];
        for (std::size_t i = 0; i < N; ++i) n[i] += gm[i] + fgh[i];
        g = G->mul(g, h);
      }
      IntVector neg(N);
      for (std::size_t i = 0; i < N; ++i) neg[i] = -n[i];
      lifted = concat(lifted, detail::kernel_vector_word(neg));
    }
    P.relators.push_back(lifted);
  }
  // Conjugation relators.
  for (std::size_t x = 0; x < G->generator_count(); ++x) {
    const int X = static_cast<int>(K + x + 1);
    for (std::size_t t = 1; t <= K; ++t) {
      Word image;
      if (s.kernel == ExtensionSpec::Kernel::FreeAbelian)
        image = detail::kernel_vector_word(s.matrices[x].column(t - 1));
      else
        image = s.free_images[x][t - 1];
      P.relators.push_back(concat(Word{X, static_cast<int>(t), -X}, inverse_word(image)));
    }
  }
  P.quotient = G;
  P.quotient_images.assign(K, G->identity());
  for (int g : G->generators) P.quotient_images.push_back(g);
  P.metadata["extension"] = s.label.empty() ? "extension by " + G->name : s.label;
  P.metadata["kernel"] = s.kernel == ExtensionSpec::Kernel::FreeAbelian ? "free-abelian" : "product-of-free";
  P.metadata["split"] = s.cocycle ? "cocycle" : "semidirect";
  return P;
}

/// Action of signed-permutation rotations on a product of free groups with `loops` generators
/// per factor: x_{i,j} -> x_{sigma(i),j}^{sign}.
inline std::vector<std::vector<Word>> signed_permutation_free_action(const FiniteGroup& G, std::size_t loops) {
  if (!G.rotation_image) throw ValidationError(G.name + " has no rotation image");
  std::vector<std::vector<Word>> out;
  for (int g : G.generators) {
    const IntMatrix& m = (*G.rotation_image)[static_cast<std::size_t>(g)];
    const std::size_t d = m.rows();
    std::vector<Word> images(d * loops);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k)
        if (m(k, i) != 0)
          for (std::size_t j = 0; j < loops; ++j) {
            const int target = static_cast<int>(k * loops + j) + 1;
            images[i * loops + j] = {m(k, i) > 0 ? target : -target};
          }
    out.push_back(std::move(images));
  }
  return out;
}

/// pi_1 of the Borel construction of the Sturmian cube: (F_2 x F_2 x F_2) semidirect O.
inline ExtensionSpec sturmian_cube_extension() {
  ExtensionSpec s;
  s.kernel = ExtensionSpec::Kernel::ProductOfFree;
  s.ranks = {2, 2, 2};
  s.quotient = shared_group("O");
  s.free_images = signed_permutation_free_action(*s.quotient, 2);
  s.label = "(F2 x F2 x F2) semidirect O";
  return s;
}

/// Z^d semidirect G acting through its integral rotation image.
inline ExtensionSpec lattice_extension(const GroupPtr& G) {
  if (!G->rotation_image) throw ValidationError(G->name + " has no rotation image");
  ExtensionSpec s;
  s.quotient = G;
  s.ranks = {G->rotation_image->front().rows()};
  for (int g : G->generators) s.matrices.push_back((*G->rotation_image)[static_cast<std::size_t>(g)]);
  s.label = "Z^" + std::to_string(s.ranks[0]) + " semidirect " + G->name;
  return s;
}

/// Extension of the full point group G_pm by the lattice of rank N.
inline GroupPresentation asg_presentation(std::size_t N, const GroupPtr& G, std::vector<IntMatrix> action,
                                          std::optional<std::vector<std::vector<IntVector>>> cocycle = std::nullopt) {
  ExtensionSpec s;
  s.ranks = {N};
  s.quotient = G;
  s.matrices = std::move(action);
  s.cocycle = std::move(cocycle);
  s.label = "ASG: Z^" + std::to_string(N) + " by " + G->name;
  return extension_presentation(s);
}

/// Codimension-one family: Z^{d+1} with x -> -x for even d, trivial quotient for odd d.
inline GroupPresentation codim1_space_group(std::size_t d) {
  if (d % 2 == 0) return asg_presentation(d + 1, shared_group("C_2"), {-IntMatrix::identity(d + 1)});
  return asg_presentation(d + 1, shared_group("C_1"), {});
}

// ---------------------------------------------------------------------------------------------
// Central pullback

/// Section s(g) = evaluation of g's shortest word in the cover's matching generators, and the
/// cocycle c(g,h) = s(g) s(h) s(gh)^-1 in {+1, -1}.
inline std::vector<std::vector<int>> section_cocycle(const FiniteGroup& cover) {
  if (!cover.quotient) throw ValidationError(cover.name + " has no quotient map");
  const FiniteGroup& G = *cover.quotient->target;
  const auto& q = cover.quotient->map;
  std::vector<int> section(G.order());
  for (std::size_t g = 0; g < G.order(); ++g) {
    int e = cover.identity();
    for (int l : G.words[g]) e = cover.mul(e, cover.generators[static_cast<std::size_t>(l)]);
    if (q[static_cast<std::size_t>(e)] != static_cast<int>(g)) throw ValidationError("section does not lift " + G.labels[g]);
    section[g] = e;
  }
  int minus = -1;
  for (std::size_t e = 1; e < cover.order(); ++e)
    if (q[e] == G.identity()) minus = static_cast<int>(e);
  std::vector<std::vector<int>> c(G.order(), std::vector<int>(G.order()));
  for (std::size_t g = 0; g < G.order(); ++g)
    for (std::size_t h = 0; h < G.order(); ++h) {
      const int gh = G.mul(static_cast<int>(g), static_cast<int>(h));
      const int v = cover.mul(cover.mul(section[g], section[h]), cover.inv(section[static_cast<std::size_t>(gh)]));
      c[g][h] = v == cover.identity() ? 1 : (v == minus ? -1 : 0);
      if (c[g][h] == 0) throw ValidationError("section cocycle leaves the kernel {+-1}");
    }
  return c;
}

/// Pullback of P -> G along the double cover: adjoin a central involution z and correct every
/// relator whose lift evaluates to -1 in the cover.
inline GroupPresentation central_pullback(const GroupPresentation& P, const GroupPtr& cover) {
  if (!P.quotient) throw ValidationError("central_pullback: presentation carries no quotient map");
  if (!cover->quotient) throw ValidationError("central_pullback: " + cover->name + " has no quotient map");
  const GroupPtr& G = cover->quotient->target;
  if (G->name != P.quotient->name || G->order() != P.quotient->order())
    throw ValidationError("central_pullback: " + cover->name + " covers " + G->name + ", not " + P.quotient->name);
  if (cover->order() != 2 * G->order()) throw ValidationError("central_pullback: cover is not two-to-one");
  int minus = -1;
  for (std::size_t e = 1; e < cover->order(); ++e)
    if (cover->quotient->map[e] == G->identity()) minus = static_cast<int>(e);
  if (minus < 0 || !cover->is_central(minus)) throw ValidationError("central_pullback: kernel of the cover is not central");
  // Lift each generator image through the section on words.
  std::vector<int> section(G->order());
  for (std::size_t g = 0; g < G->order(); ++g) {
    int e = cover->identity();
    for (int l : G->words[g]) e = cover->mul(e, cover->generators[static_cast<std::size_t>(l)]);
    section[g] = e;
  }
  GroupPresentation out;
  out.generators = P.generators;
  std::string z = "z";
  while (std::find(out.generators.begin(), out.generators.end(), z) != out.generators.end()) z += "z";
  out.generators.push_back(z);
  const int Z = static_cast<int>(out.generators.size());
  out.quotient = cover;
  for (int img : P.quotient_images) out.quotient_images.push_back(section[static_cast<std::size_t>(img)]);
  out.quotient_images.push_back(minus);
  for (const auto& r : P.relators) {
    int e = cover->identity();
    for (int x : r) {
      const int img = out.quotient_images[static_cast<std::size_t>((x < 0 ? -x : x) - 1)];
      e = cover->mul(e, x < 0 ? cover->inv(img) : img);
    }
    if (e == cover->identity())
      out.relators.push_back(r);
    else if (e == minus)
      out.relators.push_back(concat(r, Word{Z}));
    else
      throw ValidationError("central_pullback: relator does not map into the kernel of the cover");
  }
  out.relators.push_back({Z, Z});
  for (int g = 1; g < Z; ++g) out.relators.push_back(commutator({Z}, {g}));
  out.metadata = P.metadata;
  out.metadata["pullback"] = cover->name;
  return out;
}

// ---------------------------------------------------------------------------------------------
// Invariants

/// Relator exponent sums modulo the rows: Z^generators / (relation lattice).
inline FGAbelianGroup abelianization(const GroupPresentation& P) {
  P.validate();
  IntMatrix M(P.generator_count(), P.relators.size());
  for (std::size_t r = 0; r < P.relators.size(); ++r)
    for (int x : P.relators[r]) M(static_cast<std::size_t>((x < 0 ? -x : x) - 1), r) += x < 0 ? -1 : 1;
  return cokernel(M);
}

/// G / [G, G] of a finite group from its multiplication table, via counts of p-power torsion.
inline FGAbelianGroup finite_abelianization(const FiniteGroup& G) {
  const std::size_t n = G.order();
  std::vector<char> in(n, 0);
  std::vector<int> elems{G.identity()};
  in[0] = 1;
  auto add = [&](int x) {
    if (!in[static_cast<std::size_t>(x)]) {
      in[static_cast<std::size_t>(x)] = 1;
      elems.push_back(x);
    }
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const int ia = static_cast<int>(a), ib = static_cast<int>(b);
      add(G.mul(G.mul(ia, ib), G.mul(G.inv(ia), G.inv(ib))));
    }
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      add(G.mul(elems[i], elems[j]));
      add(G.mul(elems[j], elems[i]));
    }
  // Cosets of the commutator subgroup.
  std::vector<int> coset(n, -1);
  std::vector<int> reps;
  for (std::size_t g = 0; g < n; ++g) {
    if (coset[g] >= 0) continue;
    const int id = static_cast<int>(reps.size());
    reps.push_back(static_cast<int>(g));
    for (int k : elems) coset[static_cast<std::size_t>(G.mul(static_cast<int>(g), k))] = id;
  }
  const std::size_t m = reps.size();
  auto qmul = [&](int a, int b) { return coset[static_cast<std::size_t>(G.mul(reps[static_cast<std::size_t>(a)], reps[static_cast<std::size_t>(b)]))]; };
  auto qpow = [&](int a, long e) {
    int r = 0;
    for (long i = 0; i < e; ++i) r = qmul(r, a);
    return r;
  };
  std::vector<Int> divisors;
  long rest = static_cast<long>(m);
  for (long p = 2; rest > 1; ++p) {
    if (rest % p) continue;
    while (rest % p == 0) rest /= p;
    // ranks[k] = log_p |A[p^k]|; factors of order >= p^k number ranks[k] - ranks[k-1].
    std::vector<std::size_t> ranks{0};
    long pk = 1;
    for (;;) {
      pk *= p;
      std::size_t count = 0;
      for (std::size_t a = 0; a < m; ++a) count += qpow(static_cast<int>(a), pk) == 0;
      std::size_t r = 0;
      for (std::size_t c = count; c > 1; c /= static_cast<std::size_t>(p)) ++r;
      if (r == ranks.back()) break;
      ranks.push_back(r);
    }
    for (std::size_t k = 1; k < ranks.size(); ++k) {
      const std::size_t at_least_k = ranks[k] - ranks[k - 1];
      const std::size_t at_least_next = k + 1 < ranks.size() ? ranks[k + 1] - ranks[k] : 0;
      Int order = 1;
      for (std::size_t i = 0; i < k; ++i) order *= p;
      for (std::size_t i = 0; i < at_least_k - at_least_next; ++i) divisors.push_back(order);
    }
  }
  return FGAbelianGroup(0, divisors);
}

inline constexpr std::uint64_t kDefaultHomBudget = 10'000'000;

/// Number of homomorphisms P -> S (tuples of generator images satisfying every relator).
inline std::uint64_t count_homs(const GroupPresentation& P, const FiniteGroup& S, std::uint64_t budget = kDefaultHomBudget) {
  P.validate();
  const std::size_t k = P.generator_count();
  long double space = 1;
  for (std::size_t i = 0; i < k; ++i) space *= static_cast<long double>(S.order());
  if (space > static_cast<long double>(budget))
    throw ValidationError("count_homs: |S|^" + std::to_string(k) + " exceeds the budget " + std::to_string(budget));
  // Each relator is checked as soon as its highest generator is assigned.
  std::vector<std::vector<const Word*>> ready(k + 1);
  for (const auto& r : P.relators) {
    std::size_t top = 0;
    for (int x : r) top = std::max(top, static_cast<std::size_t>(x < 0 ? -x : x));
    ready[top].push_back(&r);
  }
  for (const Word* r : ready[0])
    if (!r->empty()) return 0;
  std::vector<int> image(k, 0);
  std::uint64_t count = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == k) {
      ++count;
      return;
    }
    for (std::size_t s = 0; s < S.order(); ++s) {
      image[i] = static_cast<int>(s);
      bool ok = true;
      for (const Word* r : ready[i + 1]) {
        int e = S.identity();
        for (int x : *r) {
          const int img = image[static_cast<std::size_t>((x < 0 ? -x : x) - 1)];
          e = S.mul(e, x < 0 ? S.inv(img) : img);
        }
        if (e != S.identity()) {
          ok = false;
          break;
        }
      }
      if (ok) rec(i + 1);
    }
  };
  rec(0);
  return count;
}

// ---------------------------------------------------------------------------------------------
// JSON extension specs

/// {"quotient": "O", "kernel": {"type": "free-abelian", "rank": 3}, "action": {"r": [[..]], ...},
///  "cocycle": [[[..] per h] per g]} or {"kernel": {"type": "free-product-of-free", "ranks": [2,2,2]},
///  "action": {"r": {"a1": "a2", ...}}}.
inline ExtensionSpec extension_from_json(const nlohmann::json& j) {
  ExtensionSpec s;
  s.quotient = shared_group(j.at("quotient").get<std::string>());
  const auto& kernel = j.at("kernel");
  const std::string type = kernel.at("type").get<std::string>();
  if (type == "free-abelian") {
    s.ranks = {kernel.at("rank").get<std::size_t>()};
    for (const auto& name : s.quotient->generator_names) {
      const auto& m = j.at("action").at(name);
      IntMatrix a(s.ranks[0], s.ranks[0]);
      for (std::size_t r = 0; r < s.ranks[0]; ++r)
        for (std::size_t c = 0; c < s.ranks[0]; ++c) a(r, c) = m.at(r).at(c).get<long>();
      s.matrices.push_back(std::move(a));
    }
    if (j.contains("cocycle")) {
      std::vector<std::vector<IntVector>> f;
      for (const auto& row : j.at("cocycle")) {
        std::vector<IntVector> r;
        for (const auto& v : row) {
          IntVector vec;
          for (const auto& x : v) vec.emplace_back(x.get<long>());
          r.push_back(std::move(vec));
        }
        f.push_back(std::move(r));
      }
      s.cocycle = std::move(f);
    }
  } else if (type == "free-product-of-free" || type == "product-of-free") {
    s.kernel = ExtensionSpec::Kernel::ProductOfFree;
    s.ranks = kernel.at("ranks").get<std::vector<std::size_t>>();
    const auto names = kernel_generator_names(s);
    GroupPresentation names_only;
    names_only.generators = names;
    for (const auto& qname : s.quotient->generator_names) {
      std::vector<Word> images;
      for (const auto& kname : names) {
        const std::string text = j.at("action").at(qname).at(kname).get<std::string>();
        GroupPresentation parsed = parse_presentation("generators: " + [&] {
          std::string all;
          for (const auto& n : names) all += n + " ";
          return all;
        }() + "\n" + text + "\n");
        images.push_back(parsed.relators.at(0));
      }
      s.free_images.push_back(std::move(images));
    }
  } else {
    throw ValidationError("unknown kernel type '" + type + "'");
  }
  s.label = j.value("label", std::string());
  return s;
}

}  // namespace rotohull

#endif  // ROTOHULL_SPACE_GROUPS_HPP
