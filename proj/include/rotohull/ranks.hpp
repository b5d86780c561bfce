#ifndef ROTOHULL_RANKS_HPP
#define ROTOHULL_RANKS_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rotohull/int_matrix.hpp"

namespace rotohull {

using RationalMatrix = std::vector<std::vector<mpq_class>>;

inline bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// Rank over Q by fraction-free elimination.
inline std::size_t rational_rank(IntMatrix a) {
  const std::size_t m = a.rows(), n = a.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && a(p, c) == 0) ++p;
    if (p == m) continue;
    a.swap_rows(r, p);
    for (std::size_t i = r + 1; i < m; ++i) {
      if (a(i, c) == 0) continue;
      const Int g = gcd(a(r, c), a(i, c));
      const Int fr = a(i, c) / g, fi = a(r, c) / g;
      for (std::size_t j = c; j < n; ++j) a(i, j) = fi * a(i, j) - fr * a(r, j);
      // Keep rows primitive to bound growth.
      Int content = 0;
      for (std::size_t j = c; j < n; ++j) content = gcd(content, a(i, j));
      if (content > 1)
        for (std::size_t j = c; j < n; ++j) mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), content.get_mpz_t());
    }
    ++r;
  }
  return r;
}

/// Dimension of the kernel of a rational matrix.
inline std::size_t rational_nullspace_rank(const RationalMatrix& A) {
  if (A.empty()) return 0;
  const std::size_t m = A.size(), n = A.front().size();
  IntMatrix scaled(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    if (A[i].size() != n) throw std::invalid_argument("rational_nullspace_rank: ragged matrix");
    Int denom = 1;
    for (const auto& x : A[i]) {
      const Int d = x.get_den();
      denom = denom / gcd(denom, d) * d;
    }
    for (std::size_t j = 0; j < n; ++j) {
      mpq_class v = A[i][j] * denom;
      scaled(i, j) = v.get_num();
    }
  }
  return n - rational_rank(std::move(scaled));
}

/// Dense matrix over F_p with p < 2^31.
class ModMatrix {
 public:
  ModMatrix(std::size_t rows, std::size_t cols, long p) : rows_(rows), cols_(cols), p_(p), data_(rows * cols, 0) {
    if (!is_prime(p)) throw std::invalid_argument("ModMatrix: modulus must be prime");
  }
  ModMatrix(const IntMatrix& a, long p) : ModMatrix(a.rows(), a.cols(), p) {
    Int r;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        mpz_fdiv_r_ui(r.get_mpz_t(), a(i, j).get_mpz_t(), static_cast<unsigned long>(p));
        at(i, j) = r.get_si();
      }
  }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  long prime() const { return p_; }
  std::int64_t& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::int64_t at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rank() const {
    ModMatrix a = *this;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
      std::size_t piv = r;
      while (piv < rows_ && a.at(piv, c) == 0) ++piv;
      if (piv == rows_) continue;
      if (piv != r)
        for (std::size_t j = 0; j < cols_; ++j) std::swap(a.at(piv, j), a.at(r, j));
      const std::int64_t inv = inverse(a.at(r, c));
      for (std::size_t i = r + 1; i < rows_; ++i) {
        if (a.at(i, c) == 0) continue;
        const std::int64_t f = a.at(i, c) * inv % p_;
        for (std::size_t j = c; j < cols_; ++j) {
          a.at(i, j) = (a.at(i, j) - f * a.at(r, j)) % p_;
          if (a.at(i, j) < 0) a.at(i, j) += p_;
        }
      }
      ++r;
    }
    return r;
  }

 private:
  std::int64_t inverse(std::int64_t x) const {
    std::int64_t result = 1, base = ((x % p_) + p_) % p_, e = p_ - 2;
    while (e > 0) {
      if (e & 1) result = result * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return result;
  }

  std::size_t rows_, cols_;
  long p_;
  std::vector<std::int64_t> data_;
};

inline std::size_t rank_mod_p(const IntMatrix& a, long p) { return ModMatrix(a, p).rank(); }

}  // namespace rotohull

#endif  // ROTOHULL_RANKS_HPP
