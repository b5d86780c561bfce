#ifndef ROTOHULL_CHAIN_COMPLEX_HPP
#define ROTOHULL_CHAIN_COMPLEX_HPP

#include <string>
#include <vector>

#include "rotohull/abelian_group.hpp"
#include "rotohull/int_matrix.hpp"
#include "rotohull/ranks.hpp"
#include "rotohull/smith.hpp"

namespace rotohull {

/// Coefficient ring tag: Z, Q, or F_p (p prime).
struct Ring {
  enum class Kind { Z, Q, Fp };
  Kind kind = Kind::Z;
  long p = 0;

  static Ring integers() { return {}; }
  static Ring rationals() { return {Kind::Q, 0}; }
  static Ring prime_field(long prime) {
    if (!is_prime(prime)) throw ValidationError("prime field needs a prime, got " + std::to_string(prime));
    return {Kind::Fp, prime};
  }
  static Ring parse(const std::string& s) {
    if (s == "Z") return integers();
    if (s == "Q") return rationals();
    if (s.size() > 1 && s[0] == 'F') return prime_field(std::stol(s.substr(1)));
    throw ValidationError("unknown ring '" + s + "' (expected Z, Q or F<p>)");
  }
  bool is_field() const { return kind != Kind::Z; }
  std::string name() const {
    switch (kind) {
      case Kind::Z: return "Z";
      case Kind::Q: return "Q";
      case Kind::Fp: return "F" + std::to_string(p);
    }
    return "?";
  }
  friend bool operator==(const Ring&, const Ring&) = default;
};

/// Cochain complex C^0 -> C^1 -> ... given by its coboundary matrices.
///
/// coboundaries[n] maps C^n to C^{n+1}; it has dims[n+1] rows and dims[n] columns.
struct IntChainComplex {
  std::vector<std::size_t> dims;
  std::vector<IntMatrix> coboundaries;

  IntChainComplex() = default;
  IntChainComplex(std::vector<std::size_t> d, std::vector<IntMatrix> maps) : dims(std::move(d)), coboundaries(std::move(maps)) {
    validate_shape();
  }

  void validate_shape() const {
    if (dims.size() != coboundaries.size() + 1 && !(dims.empty() && coboundaries.empty()))
      throw ValidationError("chain complex: need one more group than maps");
    for (std::size_t n = 0; n < coboundaries.size(); ++n)
      if (coboundaries[n].rows() != dims[n + 1] || coboundaries[n].cols() != dims[n])
        throw ValidationError("chain complex: map " + std::to_string(n) + " has wrong shape");
  }

  /// Throws when some composite of consecutive coboundaries is nonzero.
  void check_composites() const {
    for (std::size_t n = 0; n + 1 < coboundaries.size(); ++n)
      if (!(coboundaries[n + 1] * coboundaries[n]).is_zero())
        throw ValidationError("chain complex: composite of maps " + std::to_string(n) + " and " +
                              std::to_string(n + 1) + " is nonzero");
  }
};

/// H^n = ker d^n / im d^{n-1} over Z, for every n.
inline std::vector<FGAbelianGroup> complex_cohomology(const IntChainComplex& C) {
  C.validate_shape();
  C.check_composites();
  const std::size_t N = C.dims.size();
  std::vector<std::vector<Int>> factors(C.coboundaries.size());
  for (std::size_t n = 0; n < C.coboundaries.size(); ++n) factors[n] = invariant_factors(C.coboundaries[n]);
  std::vector<FGAbelianGroup> out;
  for (std::size_t n = 0; n < N; ++n) {
    const std::size_t rank_out = n < factors.size() ? factors[n].size() : 0;
    const std::size_t rank_in = n > 0 ? factors[n - 1].size() : 0;
    // ker d^n is saturated, so the torsion of H^n is the torsion of C^n / im d^{n-1}.
    std::vector<Int> torsion = n > 0 ? factors[n - 1] : std::vector<Int>{};
    out.emplace_back(C.dims[n] - rank_out - rank_in, torsion);
  }
  return out;
}

/// dim H^n(C tensor F_p) for every n.
inline std::vector<std::size_t> complex_cohomology_mod_p(const IntChainComplex& C, long p) {
  C.validate_shape();
  std::vector<std::size_t> ranks;
  for (const auto& d : C.coboundaries) ranks.push_back(rank_mod_p(d, p));
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < C.dims.size(); ++n) {
    const std::size_t r_out = n < ranks.size() ? ranks[n] : 0;
    const std::size_t r_in = n > 0 ? ranks[n - 1] : 0;
    out.push_back(C.dims[n] - r_out - r_in);
  }
  return out;
}

/// Universal coefficients: dim H^n(C; F_p) predicted from the integral groups.
inline std::size_t universal_coefficient_dimension(const std::vector<FGAbelianGroup>& integral, std::size_t n, long p) {
  std::size_t d = integral[n].tensor_dimension(p);
  if (n + 1 < integral.size()) d += integral[n + 1].p_rank(p);
  return d;
}

}  // namespace rotohull

#endif  // ROTOHULL_CHAIN_COMPLEX_HPP
