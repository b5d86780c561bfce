#ifndef ROTOHULL_POINT_GROUP_HPP
#define ROTOHULL_POINT_GROUP_HPP

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "rotohull/finite_group.hpp"

namespace rotohull {

// ---------------------------------------------------------------------------------------------
// Word sources

/// Quadratic irrational (p + q sqrt(D)) / r with q >= 0, r > 0 and D not a square.
struct QuadraticSlope {
  long p = -1, q = 1, D = 5, r = 2;

  static QuadraticSlope golden() { return {-1, 1, 5, 2}; }

  /// floor(k * slope) for k >= 0, exactly.
  Int floor_multiple(long k) const {
    Int root;
    Int radicand = Int(k) * k * q * q * D;
    mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
    return floor_div(Int(k) * p + root, Int(r));
  }

  void validate() const {
    if (q < 0 || r <= 0 || D < 2) throw ValidationError("slope needs q >= 0, r > 0, D >= 2");
    Int s;
    Int d(D);
    mpz_sqrt(s.get_mpz_t(), d.get_mpz_t());
    if (s * s == d) throw ValidationError("slope radicand " + std::to_string(D) + " is a perfect square");
  }
};

/// Source of the allowed finite words along one axis.
struct WordSource {
  enum class Kind { Sturmian, Substitution, Explicit, FullShift };
  Kind kind = Kind::Sturmian;
  QuadraticSlope slope = QuadraticSlope::golden();
  std::map<char, std::string> rules;
  std::vector<std::string> words;
  std::string alphabet = "01";

  static WordSource sturmian(QuadraticSlope s = QuadraticSlope::golden()) {
    WordSource w;
    w.slope = s;
    return w;
  }
  static WordSource substitution(std::map<char, std::string> r) {
    WordSource w;
    w.kind = Kind::Substitution;
    w.rules = std::move(r);
    return w;
  }
  static WordSource explicit_words(std::vector<std::string> list) {
    WordSource w;
    w.kind = Kind::Explicit;
    w.words = std::move(list);
    return w;
  }
  static WordSource full_shift(std::string letters) {
    WordSource w;
    w.kind = Kind::FullShift;
    w.alphabet = std::move(letters);
    return w;
  }
};

namespace detail {

inline void collect_factors(const std::string& text, std::size_t n, std::set<std::string>& out) {
  if (text.size() < n) return;
  for (std::size_t i = 0; i + n <= text.size(); ++i) out.insert(text.substr(i, n));
}

// Mechanical word floor((k+1) a) - floor(k a) for k in [0, length).
inline std::string mechanical_word(const QuadraticSlope& s, std::size_t length) {
  std::string out;
  out.reserve(length);
  Int prev = s.floor_multiple(0);
  for (std::size_t k = 0; k < length; ++k) {
    Int next = s.floor_multiple(static_cast<long>(k + 1));
    out.push_back(static_cast<char>('0' + Int(next - prev).get_si()));
    prev = std::move(next);
  }
  return out;
}

// Primitive iff some power of the incidence matrix is positive (Wielandt bound (m-1)^2 + 1).
inline bool is_primitive_substitution(const std::map<char, std::string>& rules) {
  std::vector<char> letters;
  for (const auto& [c, _] : rules) letters.push_back(c);
  const std::size_t m = letters.size();
  auto index = [&](char c) { return static_cast<std::size_t>(std::find(letters.begin(), letters.end(), c) - letters.begin()); };
  std::vector<std::vector<bool>> A(m, std::vector<bool>(m, false));
  for (std::size_t i = 0; i < m; ++i)
    for (char c : rules.at(letters[i])) A[i][index(c)] = true;
  std::vector<std::vector<bool>> P = A;
  for (std::size_t step = 0; step < (m - 1) * (m - 1) + 1; ++step) {
    bool positive = true;
    for (const auto& row : P)
      for (bool b : row) positive = positive && b;
    if (positive) return true;
    std::vector<std::vector<bool>> next(m, std::vector<bool>(m, false));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k)
        if (P[i][k])
          for (std::size_t j = 0; j < m; ++j) next[i][j] = next[i][j] || A[k][j];
    P = std::move(next);
  }
  return false;
}

}  // namespace detail

/// All allowed words of length n. `warnings` collects non-fatal diagnostics.
inline std::set<std::string> word_sets(const WordSource& src, std::size_t n, std::vector<std::string>* warnings = nullptr) {
  std::set<std::string> out;
  if (n == 0) {
    out.insert("");
    return out;
  }
  switch (src.kind) {
    case WordSource::Kind::Sturmian: {
      src.slope.validate();
      // Factor complexity is n + 1; grow the scanned prefix until all factors are seen.
      std::size_t window = 10 * n * static_cast<std::size_t>(src.slope.r + src.slope.q * src.slope.D);
      for (int attempt = 0; attempt < 24 && out.size() < n + 1; ++attempt, window *= 2)
        detail::collect_factors(detail::mechanical_word(src.slope, window), n, out);
      if (out.size() != n + 1) throw ValidationError("sturmian word source did not reach complexity n + 1");
      return out;
    }
    case WordSource::Kind::Substitution: {
      if (src.rules.empty()) throw ValidationError("substitution has no rules");
      for (const auto& [c, image] : src.rules) {
        if (image.empty()) throw ValidationError(std::string("substitution image of '") + c + "' is empty");
        for (char x : image)
          if (!src.rules.count(x)) throw ValidationError(std::string("substitution letter '") + x + "' has no rule");
      }
      if (!detail::is_primitive_substitution(src.rules) && warnings)
        warnings->push_back("substitution is not primitive; factor set depends on the seed letter");
      // Every letter seeds an iteration; the factors of all iterates are collected.
      for (const auto& [seed, _] : src.rules) {
        std::string w(1, seed);
        for (int it = 0; it < 10 || w.size() < 40 * n; ++it) {
          std::string next;
          for (char c : w) next += src.rules.at(c);
          if (next.size() > 2000000) break;
          w = std::move(next);
        }
        detail::collect_factors(w, n, out);
      }
      return out;
    }
    case WordSource::Kind::Explicit:
      for (const auto& w : src.words) detail::collect_factors(w, n, out);
      return out;
    case WordSource::Kind::FullShift: {
      std::vector<std::string> cur{""};
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::string> next;
        for (const auto& w : cur)
          for (char c : src.alphabet) next.push_back(w + c);
        cur = std::move(next);
      }
      out.insert(cur.begin(), cur.end());
      return out;
    }
  }
  return out;
}

inline bool is_mirror_closed(const std::set<std::string>& words) {
  return std::all_of(words.begin(), words.end(), [&](const std::string& w) { return words.count(std::string(w.rbegin(), w.rend())) > 0; });
}

// ---------------------------------------------------------------------------------------------
// Patch systems

/// Label-decorated cubical tiling given by one of four payload kinds.
struct PatchSystem {
  enum class Kind { ProductOfWords, PeriodicColoring, RuleColoring, ExplicitPatchList };
  std::string name = "custom";
  std::size_t dimension = 2;
  Kind kind = Kind::PeriodicColoring;
  std::vector<WordSource> axes;
  std::vector<std::size_t> period;
  std::vector<int> table;
  std::string rule;
  std::size_t patch_radius = 0;
  std::vector<std::vector<int>> patches;
  /// Half-width of the scanned region; 0 means 4 * n_max.
  std::size_t scan = 0;
  std::vector<long> origin;
  std::vector<std::string> notes;

  /// Colour of the cell at x (coloring kinds only).
  int label_at(const std::vector<long>& x) const {
    if (kind == Kind::PeriodicColoring) {
      std::size_t idx = 0;
      for (std::size_t i = 0; i < dimension; ++i) {
        const long p = static_cast<long>(period[i]);
        idx = idx * period[i] + static_cast<std::size_t>(((x[i] % p) + p) % p);
      }
      return table[idx];
    }
    if (rule == "halfplane") return x[0] < 0 ? 1 : 0;
    if (rule == "concentric") {
      long m = 0;
      for (long v : x) m = std::max(m, v < 0 ? -v : v);
      return m % 2 == 0 ? 1 : 0;
    }
    throw ValidationError("unknown coloring rule '" + rule + "'");
  }

  void validate() const {
    if (dimension != 2 && dimension != 3) throw ValidationError("patch system dimension must be 2 or 3");
    switch (kind) {
      case Kind::ProductOfWords:
        if (axes.size() != dimension) throw ValidationError("product system needs one word source per axis");
        break;
      case Kind::PeriodicColoring: {
        if (period.size() != dimension) throw ValidationError("periodic coloring needs one period per axis");
        std::size_t cells = 1;
        for (auto p : period) {
          if (p == 0) throw ValidationError("periods must be positive");
          cells *= p;
        }
        if (table.size() != cells) throw ValidationError("periodic coloring table has the wrong size");
        break;
      }
      case Kind::RuleColoring:
        if (rule != "halfplane" && rule != "concentric") throw ValidationError("unknown coloring rule '" + rule + "'");
        break;
      case Kind::ExplicitPatchList: {
        std::size_t cells = 1;
        for (std::size_t i = 0; i < dimension; ++i) cells *= 2 * patch_radius + 1;
        for (const auto& p : patches)
          if (p.size() != cells) throw ValidationError("explicit patch has the wrong number of cells");
        break;
      }
    }
  }
};

/// Candidate rotations: the 4 rotations of the square or the 24 rotations of the cube.
inline std::vector<IntMatrix> lattice_rotations(std::size_t d) {
  if (d == 2) return *shared_group("C_4")->rotation_image;
  if (d == 3) return *shared_group("O")->rotation_image;
  throw ValidationError("lattice rotations exist only for d = 2, 3");
}

/// A patch: per-axis words for product systems, or the flattened (2n+1)^d label array.
struct Patch {
  std::vector<std::string> words;
  std::vector<int> cells;
  friend auto operator<=>(const Patch&, const Patch&) = default;
};

namespace detail {

inline std::vector<std::vector<long>> window_offsets(std::size_t d, std::size_t n) {
  std::vector<std::vector<long>> out;
  const long r = static_cast<long>(n);
  std::vector<long> x(d, -r);
  for (;;) {
    out.push_back(x);
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (x[i] < r) {
        ++x[i];
        break;
      }
      x[i] = -r;
      if (i == 0) return out;
    }
  }
}

inline std::size_t offset_index(const std::vector<long>& x, std::size_t n) {
  std::size_t idx = 0;
  for (long v : x) idx = idx * (2 * n + 1) + static_cast<std::size_t>(v + static_cast<long>(n));
  return idx;
}

// Signed axis permutation of a lattice rotation: axis i goes to axis target[i] with sign[i].
inline void axis_map(const IntMatrix& g, std::vector<std::size_t>& target, std::vector<int>& sign) {
  const std::size_t d = g.rows();
  target.assign(d, 0);
  sign.assign(d, 1);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      if (g(k, i) != 0) {
        target[i] = k;
        sign[i] = g(k, i) > 0 ? 1 : -1;
      }
}

}  // namespace detail

/// g(P): axis permutation plus reversal; product labels move with their axes.
inline Patch rotate_patch(const Patch& P, const IntMatrix& g, std::size_t n) {
  std::vector<std::size_t> target;
  std::vector<int> sign;
  detail::axis_map(g, target, sign);
  Patch out;
  if (!P.words.empty()) {
    out.words.resize(P.words.size());
    for (std::size_t i = 0; i < P.words.size(); ++i)
      out.words[target[i]] = sign[i] > 0 ? P.words[i] : std::string(P.words[i].rbegin(), P.words[i].rend());
    return out;
  }
  const std::size_t d = g.rows();
  out.cells.assign(P.cells.size(), 0);
  for (const auto& x : detail::window_offsets(d, n)) {
    std::vector<long> y(d);
    for (std::size_t i = 0; i < d; ++i) y[target[i]] = sign[i] * x[i];
    out.cells[detail::offset_index(y, n)] = P.cells[detail::offset_index(x, n)];
  }
  return out;
}

/// All n-patches: (2n+1)^d windows, canonical up to translation.
inline std::set<Patch> patch_set(const PatchSystem& S, std::size_t n, std::size_t scan_half_width = 0) {
  S.validate();
  std::set<Patch> out;
  const std::size_t d = S.dimension;
  switch (S.kind) {
    case PatchSystem::Kind::ProductOfWords: {
      std::vector<std::vector<std::string>> per_axis;
      for (const auto& src : S.axes) {
        auto w = word_sets(src, 2 * n + 1);
        per_axis.emplace_back(w.begin(), w.end());
      }
      std::vector<std::size_t> idx(d, 0);
      for (;;) {
        Patch p;
        for (std::size_t i = 0; i < d; ++i) p.words.push_back(per_axis[i][idx[i]]);
        out.insert(std::move(p));
        std::size_t i = d;
        bool done = true;
        while (i > 0) {
          --i;
          if (++idx[i] < per_axis[i].size()) {
            done = false;
            break;
          }
          idx[i] = 0;
        }
        if (done) break;
      }
      return out;
    }
    case PatchSystem::Kind::ExplicitPatchList: {
      if (n > S.patch_radius) throw ValidationError("explicit patches have radius " + std::to_string(S.patch_radius) + " < " + std::to_string(n));
      for (const auto& big : S.patches) {
        Patch p;
        for (const auto& x : detail::window_offsets(d, n)) p.cells.push_back(big[detail::offset_index(x, S.patch_radius)]);
        out.insert(std::move(p));
      }
      return out;
    }
    case PatchSystem::Kind::PeriodicColoring:
    case PatchSystem::Kind::RuleColoring: {
      const std::size_t L = scan_half_width ? scan_half_width : (S.scan ? S.scan : 4 * n);
      if (L < n) throw ValidationError("scan window smaller than the patch");
      const auto offsets = detail::window_offsets(d, n);
      std::vector<long> origin = S.origin;
      origin.resize(d, 0);
      for (const auto& c : detail::window_offsets(d, L - n)) {
        Patch p;
        p.cells.reserve(offsets.size());
        std::vector<long> x(d);
        for (const auto& o : offsets) {
          for (std::size_t i = 0; i < d; ++i) x[i] = origin[i] + c[i] + o[i];
          p.cells.push_back(S.label_at(x));
        }
        out.insert(std::move(p));
      }
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Scan and verdict

struct PointGroupLevel {
  std::size_t n = 0;
  std::size_t patch_count = 0;
  /// Indices into PointGroupReport::candidates.
  std::vector<std::size_t> group;
  std::vector<std::size_t> extra;
};

struct PointGroupReport {
  enum class Verdict { PointGroup, Undefined, Inconclusive };
  std::string system;
  std::size_t dimension = 0;
  std::vector<IntMatrix> candidates;
  std::vector<std::string> candidate_labels;
  std::vector<PointGroupLevel> levels;
  std::optional<std::size_t> stabilized_from;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> notes;

  const std::vector<std::size_t>& final_group() const { return levels.back().group; }
  std::string verdict_text() const {
    switch (verdict) {
      case Verdict::PointGroup: return "point group of order " + std::to_string(final_group().size()) + " (empirical)";
      case Verdict::Undefined: return "undefined (empirical)";
      case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
  }
};

inline std::string rotation_label(const IntMatrix& g) {
  if (g.rows() == 2) {
    if (g == IntMatrix::identity(2)) return "0";
    if (g == IntMatrix{{0, -1}, {1, 0}}) return "pi/2";
    if (g == IntMatrix{{-1, 0}, {0, -1}}) return "pi";
    if (g == IntMatrix{{0, 1}, {-1, 0}}) return "3pi/2";
  }
  return g.to_string();
}

inline PointGroupReport point_group_scan(const PatchSystem& S, std::size_t n_max) {
  if (n_max < 1) throw ValidationError("point_group_scan: n_max must be at least 1");
  S.validate();
  PointGroupReport rep;
  rep.system = S.name;
  rep.dimension = S.dimension;
  rep.candidates = lattice_rotations(S.dimension);
  for (const auto& g : rep.candidates) rep.candidate_labels.push_back(rotation_label(g));
  rep.notes = S.notes;
  const std::size_t scan = S.scan ? S.scan : 4 * n_max;
  std::vector<std::size_t> previous(rep.candidates.size());
  for (std::size_t i = 0; i < previous.size(); ++i) previous[i] = i;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto patches = patch_set(S, n, scan);
    PointGroupLevel lvl;
    lvl.n = n;
    lvl.patch_count = patches.size();
    for (std::size_t gi = 0; gi < rep.candidates.size(); ++gi) {
      std::size_t hits = 0;
      for (const auto& P : patches) hits += patches.count(rotate_patch(P, rep.candidates[gi], n));
      const bool all = hits == patches.size();
      // G_{n+1} is contained in G_n by construction.
      if (all && std::find(previous.begin(), previous.end(), gi) != previous.end())
        lvl.group.push_back(gi);
      else if (hits > 0)
        lvl.extra.push_back(gi);
    }
    previous = lvl.group;
    rep.levels.push_back(std::move(lvl));
  }
  const std::size_t tail = (n_max + 1) / 2;
  bool stable = true, extras = true;
  for (std::size_t i = rep.levels.size() - tail; i < rep.levels.size(); ++i) {
    stable = stable && rep.levels[i].group == rep.levels.back().group;
    extras = extras && !rep.levels[i].extra.empty();
  }
  for (std::size_t i = rep.levels.size(); i-- > 0;) {
    if (rep.levels[i].group != rep.levels.back().group) break;
    rep.stabilized_from = rep.levels[i].n;
  }
  if (stable && rep.levels.back().extra.empty())
    rep.verdict = PointGroupReport::Verdict::PointGroup;
  else if (stable && extras)
    rep.verdict = PointGroupReport::Verdict::Undefined;
  else
    rep.verdict = PointGroupReport::Verdict::Inconclusive;
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Built-ins and JSON descriptors

inline const std::vector<std::string>& builtin_patch_system_names() {
  static const std::vector<std::string> names{"sturmian-cube", "chessboard", "halfplane", "concentric"};
  return names;
}

inline PatchSystem builtin_patch_system(const std::string& name) {
  PatchSystem S;
  S.name = name;
  if (name == "sturmian-cube") {
    S.dimension = 3;
    S.kind = PatchSystem::Kind::ProductOfWords;
    S.axes.assign(3, WordSource::sturmian());
  } else if (name == "chessboard") {
    S.kind = PatchSystem::Kind::PeriodicColoring;
    S.period = {2, 2};
    S.table = {1, 0, 0, 1};
  } else if (name == "halfplane") {
    S.kind = PatchSystem::Kind::RuleColoring;
    S.rule = "halfplane";
  } else if (name == "concentric") {
    S.kind = PatchSystem::Kind::RuleColoring;
    S.rule = "concentric";
    S.notes.push_back("only patches of the tiling itself are scanned; hull elements such as the corner tilings are not examined");
  } else {
    throw ValidationError("unknown patch system '" + name + "'");
  }
  return S;
}

inline WordSource word_source_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("source").get<std::string>();
  if (kind == "sturmian") {
    if (!j.contains("slope") || j.at("slope") == "golden") return WordSource::sturmian();
    const auto& s = j.at("slope");
    QuadraticSlope q{s.at("p").get<long>(), s.at("q").get<long>(), s.at("D").get<long>(), s.at("r").get<long>()};
    q.validate();
    return WordSource::sturmian(q);
  }
  if (kind == "substitution") {
    std::map<char, std::string> rules;
    for (const auto& [k, v] : j.at("rules").items()) {
      if (k.size() != 1) throw ValidationError("substitution letters must be single characters");
      rules[k[0]] = v.get<std::string>();
    }
    return WordSource::substitution(std::move(rules));
  }
  if (kind == "explicit") return WordSource::explicit_words(j.at("words").get<std::vector<std::string>>());
  if (kind == "full-shift") return WordSource::full_shift(j.at("alphabet").get<std::string>());
  throw ValidationError("unknown word source '" + kind + "'");
}

inline PatchSystem patch_system_from_json(const nlohmann::json& j) {
  PatchSystem S;
  S.name = j.value("name", std::string("custom"));
  S.dimension = j.at("dimension").get<std::size_t>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "product-of-words") {
    S.kind = PatchSystem::Kind::ProductOfWords;
    for (const auto& a : j.at("axes")) S.axes.push_back(word_source_from_json(a));
  } else if (kind == "periodic-coloring") {
    S.kind = PatchSystem::Kind::PeriodicColoring;
    S.period = j.at("period").get<std::vector<std::size_t>>();
    S.table = j.at("table").get<std::vector<int>>();
  } else if (kind == "rule-coloring") {
    S.kind = PatchSystem::Kind::RuleColoring;
    S.rule = j.at("rule").get<std::string>();
  } else if (kind == "explicit-patch-list") {
    S.kind = PatchSystem::Kind::ExplicitPatchList;
    S.patch_radius = j.at("radius").get<std::size_t>();
    S.patches = j.at("patches").get<std::vector<std::vector<int>>>();
  } else {
    throw ValidationError("unknown patch system kind '" + kind + "'");
  }
  S.scan = j.value("scan", std::size_t{0});
  if (j.contains("origin")) S.origin = j.at("origin").get<std::vector<long>>();
  S.validate();
  return S;
}

inline PatchSystem resolve_patch_system(const std::string& selector) {
  const auto& names = builtin_patch_system_names();
  if (std::find(names.begin(), names.end(), selector) != names.end()) return builtin_patch_system(selector);
  std::ifstream in(selector);
  if (!in) throw ValidationError("unknown patch system '" + selector + "' (not a built-in name or readable file)");
  nlohmann::json j;
  try {
    in >> j;
    return patch_system_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("patch system file " + selector + ": " + e.what());
  }
}

inline nlohmann::json to_json(const PointGroupReport& r) {
  auto names = [&](const std::vector<std::size_t>& idx) {
    nlohmann::json a = nlohmann::json::array();
    for (auto i : idx) a.push_back(r.candidate_labels[i]);
    return a;
  };
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"n", l.n}, {"patches", l.patch_count}, {"group_order", l.group.size()}, {"group", names(l.group)}, {"extra", names(l.extra)}});
  nlohmann::json out{{"system", r.system}, {"dimension", r.dimension}, {"levels", levels}, {"verdict", r.verdict_text()}, {"notes", r.notes}};
  out["stabilized_from"] = r.stabilized_from ? nlohmann::json(*r.stabilized_from) : nlohmann::json(nullptr);
  return out;
}

inline std::string render_markdown(const PointGroupReport& r) {
  std::string out = "Point-group scan of " + r.system + "\n\n| n | patches | |G_n| | G_n | extra rotations E_n |\n|---|---|---|---|---|\n";
  auto join = [&](const std::vector<std::size_t>& idx) {
    std::string s;
    for (std::size_t k = 0; k < idx.size(); ++k) s += (k ? ", " : "") + r.candidate_labels[idx[k]];
    return s.empty() ? std::string("-") : s;
  };
  for (const auto& l : r.levels) {
    const std::string g = r.dimension == 2 ? join(l.group) : (l.group.size() == r.candidates.size() ? std::string("all") : join(l.group));
    out += "| " + std::to_string(l.n) + " | " + std::to_string(l.patch_count) + " | " + std::to_string(l.group.size()) + " | " + g + " | " + join(l.extra) + " |\n";
  }
  out += "\nverdict: " + r.verdict_text() + "\n";
  for (const auto& n : r.notes) out += "note: " + n + "\n";
  return out;
}

}  // namespace rotohull

#endif  // ROTOHULL_POINT_GROUP_HPP
