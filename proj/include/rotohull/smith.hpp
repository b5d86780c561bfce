#ifndef ROTOHULL_SMITH_HPP
#define ROTOHULL_SMITH_HPP

#include <optional>
#include <vector>

#include "rotohull/abelian_group.hpp"
#include "rotohull/int_matrix.hpp"

namespace rotohull {

struct SmithForm {
  /// Nonzero diagonal entries d1 | d2 | ... (units included).
  std::vector<Int> invariant_factors;
  /// Unimodular transforms with U * A * V diagonal; empty unless requested.
  IntMatrix U;
  IntMatrix V;
  std::size_t rank() const { return invariant_factors.size(); }
};

namespace detail {

struct SmithWork {
  IntMatrix D;
  IntMatrix* U = nullptr;
  IntMatrix* V = nullptr;

  void swap_rows(std::size_t a, std::size_t b) {
    D.swap_rows(a, b);
    if (U) U->swap_rows(a, b);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    D.swap_cols(a, b);
    if (V) V->swap_cols(a, b);
  }
  void add_row(std::size_t dst, std::size_t src, const Int& f) {
    D.add_row_multiple(dst, src, f);
    if (U) U->add_row_multiple(dst, src, f);
  }
  void add_col(std::size_t dst, std::size_t src, const Int& f) {
    D.add_col_multiple(dst, src, f);
    if (V) V->add_col_multiple(dst, src, f);
  }
  void negate_row(std::size_t i) {
    D.negate_row(i);
    if (U) U->negate_row(i);
  }
};

}  // namespace detail

/// Smith normal form by minimal-absolute-value pivoting. Transforms are tracked only when asked for.
inline SmithForm smith_normal_form(const IntMatrix& A, bool with_transforms = true) {
  const std::size_t m = A.rows(), n = A.cols();
  SmithForm out;
  detail::SmithWork w;
  w.D = A;
  if (with_transforms) {
    out.U = IntMatrix::identity(m);
    out.V = IntMatrix::identity(n);
    w.U = &out.U;
    w.V = &out.V;
  }
  IntMatrix& D = w.D;
  const std::size_t lim = std::min(m, n);
  Int q;
  for (std::size_t t = 0; t < lim; ++t) {
    // Pivot: smallest nonzero magnitude in the trailing block.
    std::size_t pi = m, pj = n;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        const Int& v = D(i, j);
        if (v == 0) continue;
        if (pi == m || mpz_cmpabs(v.get_mpz_t(), D(pi, pj).get_mpz_t()) < 0) {
          pi = i;
          pj = j;
          if (v == 1 || v == -1) goto found;
        }
      }
  found:
    if (pi == m) break;
    w.swap_rows(t, pi);
    w.swap_cols(t, pj);
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (D(i, t) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), D(i, t).get_mpz_t(), D(t, t).get_mpz_t());
        w.add_row(i, t, -q);
        if (D(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), D(t, j).get_mpz_t(), D(t, t).get_mpz_t());
        w.add_col(j, t, -q);
        if (D(t, j) != 0) clean = false;
      }
      if (!clean) {
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < m; ++i)
          if (D(i, t) != 0 && mpz_cmpabs(D(i, t).get_mpz_t(), D(bi, bj).get_mpz_t()) < 0) bi = i, bj = t;
        for (std::size_t j = t + 1; j < n; ++j)
          if (D(t, j) != 0 && mpz_cmpabs(D(t, j).get_mpz_t(), D(bi, bj).get_mpz_t()) < 0) bi = t, bj = j;
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
        continue;
      }
      // Row and column are clear; enforce divisibility of the trailing block.
      std::size_t bad = m;
      if (D(t, t) != 1 && D(t, t) != -1) {
        for (std::size_t i = t + 1; i < m && bad == m; ++i)
          for (std::size_t j = t + 1; j < n; ++j)
            if (!divides(D(t, t), D(i, j))) {
              bad = i;
              break;
            }
      }
      if (bad == m) break;
      w.add_row(t, bad, Int(1));
    }
    if (D(t, t) < 0) w.negate_row(t);
    out.invariant_factors.push_back(D(t, t));
  }
  return out;
}

inline std::vector<Int> invariant_factors(const IntMatrix& A) { return smith_normal_form(A, false).invariant_factors; }

inline std::size_t integer_rank(const IntMatrix& A) { return smith_normal_form(A, false).rank(); }

/// Z^rows / im(A).
inline FGAbelianGroup cokernel(const IntMatrix& A) {
  const auto factors = invariant_factors(A);
  return FGAbelianGroup(A.rows() - factors.size(), factors);
}

}  // namespace rotohull

#endif  // ROTOHULL_SMITH_HPP
