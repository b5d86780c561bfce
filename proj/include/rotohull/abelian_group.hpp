#ifndef ROTOHULL_ABELIAN_GROUP_HPP
#define ROTOHULL_ABELIAN_GROUP_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rotohull/int_matrix.hpp"

namespace rotohull {

/// Finitely generated abelian group Z^r + Z/d1 + ... + Z/dt with d1 | d2 | ... | dt, each di >= 2.
///
/// The representation is canonical: two isomorphic groups compare equal.
class FGAbelianGroup {
 public:
  FGAbelianGroup() = default;

  /// Accepts any list of cyclic orders (0 meaning Z, 1 ignored) and normalises it.
  FGAbelianGroup(std::size_t free_rank, const std::vector<Int>& cyclic_orders) : free_rank_(free_rank) {
    std::vector<Int> finite;
    for (const Int& d : cyclic_orders) {
      Int a = abs_value(d);
      if (a == 0)
        ++free_rank_;
      else if (a != 1)
        finite.push_back(a);
    }
    torsion_ = invariant_factor_chain(finite);
  }

  FGAbelianGroup(std::size_t free_rank, std::initializer_list<long> cyclic_orders)
      : FGAbelianGroup(free_rank, std::vector<Int>(cyclic_orders.begin(), cyclic_orders.end())) {}

  static FGAbelianGroup zero() { return {}; }
  static FGAbelianGroup free(std::size_t rank) { return FGAbelianGroup(rank, std::vector<Int>{}); }
  static FGAbelianGroup cyclic(long order) { return FGAbelianGroup(0, {order}); }

  std::size_t free_rank() const { return free_rank_; }
  const std::vector<Int>& torsion() const { return torsion_; }
  bool is_zero() const { return free_rank_ == 0 && torsion_.empty(); }
  bool is_free() const { return torsion_.empty(); }
  bool is_finite() const { return free_rank_ == 0; }

  /// Order of the torsion subgroup.
  Int torsion_order() const {
    Int o = 1;
    for (const Int& d : torsion_) o *= d;
    return o;
  }

  /// Number of cyclic summands whose order is divisible by p, i.e. dim of G/pG minus the free rank.
  std::size_t p_rank(long p) const {
    return static_cast<std::size_t>(
        std::count_if(torsion_.begin(), torsion_.end(), [p](const Int& d) { return divides(Int(p), d); }));
  }

  /// dim_{F_p} (G tensor F_p).
  std::size_t tensor_dimension(long p) const { return free_rank_ + p_rank(p); }

  friend FGAbelianGroup operator+(const FGAbelianGroup& a, const FGAbelianGroup& b) {
    std::vector<Int> orders = a.torsion_;
    orders.insert(orders.end(), b.torsion_.begin(), b.torsion_.end());
    return FGAbelianGroup(a.free_rank_ + b.free_rank_, orders);
  }

  friend bool operator==(const FGAbelianGroup& a, const FGAbelianGroup& b) {
    return a.free_rank_ == b.free_rank_ && a.torsion_ == b.torsion_;
  }

  /// Prime-power elementary divisors, sorted by prime then exponent.
  std::vector<Int> elementary_divisors() const {
    std::vector<Int> out;
    for (const Int& d : torsion_) {
      Int rest = d;
      for (Int p = 2; p * p <= rest; ++p) {
        if (!divides(p, rest)) continue;
        Int q = 1;
        while (divides(p, rest)) {
          q *= p;
          rest /= p;
        }
        out.push_back(q);
      }
      if (rest > 1) out.push_back(rest);
    }
    std::sort(out.begin(), out.end(), [](const Int& x, const Int& y) {
      Int px = smallest_prime_factor(x), py = smallest_prime_factor(y);
      return px != py ? px < py : x < y;
    });
    return out;
  }

  /// Human rendering, e.g. "Z^2 + Z/2 + Z/4"; the zero group renders as "0".
  std::string to_string(bool primary = false) const {
    std::vector<std::string> parts;
    if (free_rank_ == 1) parts.push_back("Z");
    if (free_rank_ > 1) parts.push_back("Z^" + std::to_string(free_rank_));
    const std::vector<Int> orders = primary ? elementary_divisors() : torsion_;
    for (std::size_t i = 0; i < orders.size();) {
      std::size_t j = i;
      while (j < orders.size() && orders[j] == orders[i]) ++j;
      std::string s = "Z/" + orders[i].get_str();
      if (j - i > 1) s = "(" + s + ")^" + std::to_string(j - i);
      parts.push_back(s);
      i = j;
    }
    if (parts.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " + " : "") + parts[i];
    return out;
  }

  /// Compact grid notation: "Z^4", "2^6", "2+4^2", "16^2x48^2", "0".
  std::string to_compact(bool primary = false) const {
    std::vector<std::string> parts;
    if (free_rank_ == 1) parts.push_back("Z");
    if (free_rank_ > 1) parts.push_back("Z^" + std::to_string(free_rank_));
    std::vector<std::string> torsion_parts;
    const std::vector<Int> orders = primary ? elementary_divisors() : torsion_;
    for (std::size_t i = 0; i < orders.size();) {
      std::size_t j = i;
      while (j < orders.size() && orders[j] == orders[i]) ++j;
      std::string s = orders[i].get_str();
      if (j - i > 1) s += "^" + std::to_string(j - i);
      torsion_parts.push_back(s);
      i = j;
    }
    std::string torsion;
    for (std::size_t i = 0; i < torsion_parts.size(); ++i) torsion += (i ? "+" : "") + torsion_parts[i];
    if (!torsion.empty()) parts.push_back(torsion);
    if (parts.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "+" : "") + parts[i];
    return out;
  }

  static std::vector<Int> invariant_factor_chain(const std::vector<Int>& orders) {
    // Split into prime powers, then recombine largest powers per prime from the top.
    std::map<Int, std::vector<Int>> by_prime;
    for (const Int& d : orders) {
      Int rest = d;
      for (Int p = 2; p * p <= rest; ++p) {
        if (!divides(p, rest)) continue;
        Int q = 1;
        while (divides(p, rest)) {
          q *= p;
          rest /= p;
        }
        by_prime[p].push_back(q);
      }
      if (rest > 1) by_prime[rest].push_back(rest);
    }
    std::size_t len = 0;
    for (auto& [p, powers] : by_prime) {
      std::sort(powers.begin(), powers.end());
      len = std::max(len, powers.size());
    }
    std::vector<Int> chain(len, Int(1));
    for (auto& [p, powers] : by_prime) {
      const std::size_t offset = len - powers.size();
      for (std::size_t i = 0; i < powers.size(); ++i) chain[offset + i] *= powers[i];
    }
    return chain;
  }

 private:
  static Int smallest_prime_factor(const Int& x) {
    for (Int p = 2; p * p <= x; ++p)
      if (divides(p, x)) return p;
    return x;
  }

  std::size_t free_rank_ = 0;
  std::vector<Int> torsion_;
};

inline std::ostream& operator<<(std::ostream& os, const FGAbelianGroup& g) { return os << g.to_string(); }

/// Parses the compact grid notation produced by FGAbelianGroup::to_compact ("Z^2+2+4", "16^2x48^2", "0").
inline FGAbelianGroup parse_compact_group(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += (c == 'x' || c == '*') ? '+' : c;
  if (s.empty() || s == "0") return {};
  std::size_t free_rank = 0;
  std::vector<Int> orders;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, '+')) {
    if (part.empty()) throw ValidationError("malformed group notation: " + text);
    std::string base = part;
    std::size_t mult = 1;
    if (auto caret = part.find('^'); caret != std::string::npos) {
      base = part.substr(0, caret);
      mult = std::stoul(part.substr(caret + 1));
    }
    if (base.rfind("Z/", 0) == 0) base = base.substr(2);
    if (base == "Z") {
      free_rank += mult;
    } else {
      Int d(base);
      for (std::size_t i = 0; i < mult; ++i) orders.push_back(d);
    }
  }
  return FGAbelianGroup(free_rank, orders);
}

}  // namespace rotohull

#endif  // ROTOHULL_ABELIAN_GROUP_HPP
