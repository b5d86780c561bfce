#ifndef ROTOHULL_LATTICE_HPP
#define ROTOHULL_LATTICE_HPP

#include <map>
#include <optional>
#include <vector>

#include "rotohull/int_matrix.hpp"

namespace rotohull {

namespace detail {

// q = round(a / b) to nearest, ties toward zero is fine.
inline void round_div(Int& q, const Int& a, const Int& b) {
  Int twice = 2 * a + b;
  Int denom = 2 * b;
  mpz_fdiv_q(q.get_mpz_t(), twice.get_mpz_t(), denom.get_mpz_t());
}

inline void axpy(IntVector& y, const Int& a, const IntVector& x, std::size_t from) {
  if (a == 0) return;
  for (std::size_t k = from; k < y.size(); ++k)
    if (x[k] != 0) y[k] += a * x[k];
}

}  // namespace detail

/// Row-style Hermite normal form maintained incrementally.
///
/// Rows are kept in echelon form keyed by pivot column; pivots are positive and, after
/// reduce(), entries above each pivot lie in [0, pivot).
class HermiteBasis {
 public:
  explicit HermiteBasis(std::size_t width) : width_(width) {}

  std::size_t width() const { return width_; }
  std::size_t rank() const { return rows_.size(); }

  /// Adds v to the generating set. Returns true when the lattice grew.
  bool insert(IntVector v) {
    if (v.size() != width_) throw std::invalid_argument("HermiteBasis::insert: width mismatch");
    Int q, g, s, t;
    std::size_t c = leading(v, 0);
    bool grew = false;
    while (c < width_) {
      auto it = rows_.find(c);
      if (it == rows_.end()) {
        if (v[c] < 0)
          for (auto& x : v) x = -x;
        rows_.emplace(c, std::move(v));
        reduced_ = false;
        return true;
      }
      IntVector& h = it->second;
      if (divides(h[c], v[c])) {
        mpz_divexact(q.get_mpz_t(), v[c].get_mpz_t(), h[c].get_mpz_t());
        detail::axpy(v, -q, h, c);
      } else {
        // [h; v] <- [[s, t], [-v_c/g, h_c/g]] [h; v] with s*h_c + t*v_c = g.
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), h[c].get_mpz_t(), v[c].get_mpz_t());
        Int a = v[c] / g, b = h[c] / g;
        IntVector nh(width_), nv(width_);
        for (std::size_t k = c; k < width_; ++k) {
          nh[k] = s * h[k] + t * v[k];
          nv[k] = b * v[k] - a * h[k];
        }
        h = std::move(nh);
        v = std::move(nv);
        reduced_ = false;
        grew = true;
      }
      c = leading(v, c);
    }
    return grew;
  }

  /// True iff v lies in the lattice.
  bool contains(IntVector v) const { return residual(std::move(v)).first; }

  /// Reduces entries above pivots into [0, pivot).
  void reduce() {
    if (reduced_) return;
    Int q;
    for (auto it = rows_.begin(); it != rows_.end(); ++it) {
      const std::size_t c = it->first;
      const IntVector& h = it->second;
      for (auto up = rows_.begin(); up != it; ++up) {
        IntVector& r = up->second;
        if (r[c] == 0) continue;
        mpz_fdiv_q(q.get_mpz_t(), r[c].get_mpz_t(), h[c].get_mpz_t());
        detail::axpy(r, -q, h, c);
      }
    }
    reduced_ = true;
  }

  /// Rows ordered by pivot column (canonical HNF after reduce()).
  std::vector<IntVector> rows() {
    reduce();
    std::vector<IntVector> out;
    out.reserve(rows_.size());
    for (const auto& [c, r] : rows_) out.push_back(r);
    return out;
  }

  std::vector<std::size_t> pivots() const {
    std::vector<std::size_t> out;
    for (const auto& [c, r] : rows_) out.push_back(c);
    return out;
  }

  friend bool operator==(HermiteBasis& a, HermiteBasis& b) {
    if (a.width_ != b.width_ || a.rows_.size() != b.rows_.size()) return false;
    a.reduce();
    b.reduce();
    return a.rows_ == b.rows_;
  }

 private:
  std::pair<bool, IntVector> residual(IntVector v) const {
    Int q, r;
    std::size_t c = leading(v, 0);
    while (c < width_) {
      auto it = rows_.find(c);
      if (it == rows_.end()) return {false, v};
      const IntVector& h = it->second;
      mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), v[c].get_mpz_t(), h[c].get_mpz_t());
      if (r != 0) return {false, v};
      detail::axpy(v, -q, h, c);
      c = leading(v, c);
    }
    return {true, v};
  }

  std::size_t leading(const IntVector& v, std::size_t from) const {
    while (from < width_ && v[from] == 0) ++from;
    return from;
  }

  std::size_t width_;
  std::map<std::size_t, IntVector> rows_;
  bool reduced_ = true;
};

/// Hermite normal form of the row lattice of A, zero rows dropped.
inline IntMatrix hermite_normal_form(const IntMatrix& A) {
  HermiteBasis hb(A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i) hb.insert(A.row(i));
  return IntMatrix::from_rows(hb.rows(), A.cols());
}

namespace detail {

// Saturated kernel via the row lattice of [A^T | I]; rows pivoting past column m are the kernel.
inline std::vector<IntVector> hermite_kernel(const IntMatrix& A) {
  const std::size_t m = A.rows(), n = A.cols();
  HermiteBasis hb(m + n);
  for (std::size_t j = 0; j < n; ++j) {
    IntVector v(m + n);
    for (std::size_t i = 0; i < m; ++i) v[i] = A(i, j);
    v[m + j] = 1;
    hb.insert(std::move(v));
  }
  std::vector<IntVector> kernel;
  for (const auto& r : hb.rows()) {
    bool zero_head = true;
    for (std::size_t i = 0; i < m && zero_head; ++i) zero_head = r[i] == 0;
    if (zero_head) kernel.emplace_back(r.begin() + static_cast<std::ptrdiff_t>(m), r.end());
  }
  return kernel;
}

struct Int64Overflow {};

inline long checked_mul_sub(long a, long q, long b) {
  long prod, out;
  if (__builtin_mul_overflow(q, b, &prod) || __builtin_sub_overflow(a, prod, &out)) throw Int64Overflow{};
  return out;
}

}  // namespace detail

/// Saturated integer kernel {x : A x = 0}.
///
/// When `unimodular` holds, basis[t] restricted to free_columns is the t-th unit vector, so
/// the coordinates of any kernel vector are its entries on free_columns.
struct KernelLattice {
  std::size_t ambient = 0;
  std::vector<IntVector> basis;
  std::vector<std::size_t> free_columns;
  bool unimodular = false;

  std::size_t rank() const { return basis.size(); }
  IntMatrix as_columns() const { return IntMatrix::from_columns(basis, ambient); }
};

/// Reduced row echelon form with unit pivots in machine integers. Any part of the system
/// without a unit pivot is handed to a Hermite computation and lifted back.
inline KernelLattice integer_kernel(const IntMatrix& A) {
  const std::size_t m = A.rows(), n = A.cols();
  KernelLattice out;
  out.ambient = n;
  std::vector<std::vector<long>> w(m, std::vector<long>(n));
  bool small = true;
  for (std::size_t i = 0; i < m && small; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!A(i, j).fits_slong_p()) {
        small = false;
        break;
      }
      w[i][j] = A(i, j).get_si();
    }
  if (small) {
    try {
      std::vector<bool> row_used(m, false);
      std::vector<long> pivot_row_of(n, -1);
      for (;;) {
        // Unit pivot in the unused row of smallest support.
        std::size_t best_row = m, best_col = n, best_support = n + 1;
        for (std::size_t i = 0; i < m; ++i) {
          if (row_used[i]) continue;
          std::size_t support = 0, unit_col = n;
          for (std::size_t j = 0; j < n; ++j) {
            const long v = w[i][j];
            if (v == 0) continue;
            ++support;
            if (unit_col == n && (v == 1 || v == -1)) unit_col = j;
          }
          if (support == 0) {
            row_used[i] = true;
            continue;
          }
          if (unit_col < n && support < best_support) {
            best_support = support;
            best_row = i;
            best_col = unit_col;
          }
        }
        if (best_row == m) break;
        const std::size_t r = best_row, c = best_col;
        if (w[r][c] == -1)
          for (auto& x : w[r]) x = -x;
        row_used[r] = true;
        pivot_row_of[c] = static_cast<long>(r);
        std::vector<std::size_t> nz;
        for (std::size_t j = 0; j < n; ++j)
          if (w[r][j] != 0) nz.push_back(j);
        for (std::size_t i = 0; i < m; ++i) {
          if (i == r || w[i][c] == 0) continue;
          const long q = w[i][c];
          for (std::size_t j : nz) w[i][j] = detail::checked_mul_sub(w[i][j], q, w[r][j]);
        }
      }
      std::vector<std::size_t> rest_cols;
      for (std::size_t j = 0; j < n; ++j)
        if (pivot_row_of[j] < 0) rest_cols.push_back(j);
      std::vector<std::size_t> rest_rows;
      for (std::size_t i = 0; i < m; ++i) {
        bool pivot = false;
        for (std::size_t j = 0; j < n && !pivot; ++j) pivot = pivot_row_of[j] == static_cast<long>(i);
        if (pivot) continue;
        bool zero = true;
        for (std::size_t j : rest_cols) zero = zero && w[i][j] == 0;
        if (!zero) rest_rows.push_back(i);
      }
      // Kernel of the leftover system on the non-pivot columns.
      std::vector<IntVector> rest_kernel;
      if (rest_rows.empty()) {
        out.unimodular = true;
        out.free_columns = rest_cols;
        for (std::size_t t = 0; t < rest_cols.size(); ++t) {
          IntVector y(rest_cols.size());
          y[t] = 1;
          rest_kernel.push_back(std::move(y));
        }
      } else {
        IntMatrix B(rest_rows.size(), rest_cols.size());
        for (std::size_t a = 0; a < rest_rows.size(); ++a)
          for (std::size_t b = 0; b < rest_cols.size(); ++b) B(a, b) = w[rest_rows[a]][rest_cols[b]];
        rest_kernel = detail::hermite_kernel(B);
      }
      for (const auto& y : rest_kernel) {
        IntVector x(n);
        for (std::size_t b = 0; b < rest_cols.size(); ++b) x[rest_cols[b]] = y[b];
        for (std::size_t c = 0; c < n; ++c) {
          if (pivot_row_of[c] < 0) continue;
          const auto& row = w[static_cast<std::size_t>(pivot_row_of[c])];
          Int s = 0;
          for (std::size_t b = 0; b < rest_cols.size(); ++b)
            if (row[rest_cols[b]] != 0 && y[b] != 0) s += Int(row[rest_cols[b]]) * y[b];
          x[c] = -s;
        }
        out.basis.push_back(std::move(x));
      }
      return out;
    } catch (const detail::Int64Overflow&) {
      out = KernelLattice{};
      out.ambient = n;
    }
  }
  out.basis = detail::hermite_kernel(A);
  return out;
}

/// Columns form a basis of the (saturated) integer kernel {x : A x = 0}.
inline IntMatrix kernel_basis(const IntMatrix& A) { return integer_kernel(A).as_columns(); }

/// Integer coefficients c with B c = v, when v lies in the column lattice of B.
inline std::optional<IntVector> lattice_membership(const IntMatrix& B, const IntVector& v) {
  const std::size_t m = B.rows(), k = B.cols();
  if (v.size() != m) throw std::invalid_argument("lattice_membership: dimension mismatch");
  HermiteBasis hb(m + k);
  for (std::size_t j = 0; j < k; ++j) {
    IntVector row(m + k);
    for (std::size_t i = 0; i < m; ++i) row[i] = B(i, j);
    row[m + j] = 1;
    hb.insert(std::move(row));
  }
  // (v, 0) - sum c_j (b_j, e_j) = (0, -c): reduce the head against head pivots only.
  IntVector w(m + k);
  for (std::size_t i = 0; i < m; ++i) w[i] = v[i];
  Int q, r;
  for (const auto& h : hb.rows()) {
    std::size_t c = 0;
    while (c < m + k && h[c] == 0) ++c;
    if (c >= m) break;
    if (w[c] == 0) continue;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), w[c].get_mpz_t(), h[c].get_mpz_t());
    if (r != 0) return std::nullopt;
    detail::axpy(w, -q, h, 0);
  }
  for (std::size_t i = 0; i < m; ++i)
    if (w[i] != 0) return std::nullopt;
  IntVector coeffs(k);
  for (std::size_t j = 0; j < k; ++j) coeffs[j] = -w[m + j];
  return coeffs;
}

}  // namespace rotohull

#endif  // ROTOHULL_LATTICE_HPP
