#ifndef ROTOHULL_QUATERNION_HPP
#define ROTOHULL_QUATERNION_HPP

#include <gmpxx.h>

#include <array>
#include <string>

#include "rotohull/int_matrix.hpp"

namespace rotohull {

/// Exact element a + b*sqrt(2) of Q(sqrt 2).
struct QSqrt2 {
  mpq_class a = 0;
  mpq_class b = 0;

  QSqrt2() = default;
  QSqrt2(mpq_class rational, mpq_class root2_coeff = 0) : a(std::move(rational)), b(std::move(root2_coeff)) {
    a.canonicalize();
    b.canonicalize();
  }
  QSqrt2(long v) : a(v), b(0) {}

  static QSqrt2 sqrt2() { return {0, 1}; }

  friend QSqrt2 operator+(const QSqrt2& x, const QSqrt2& y) { return {x.a + y.a, x.b + y.b}; }
  friend QSqrt2 operator-(const QSqrt2& x, const QSqrt2& y) { return {x.a - y.a, x.b - y.b}; }
  friend QSqrt2 operator*(const QSqrt2& x, const QSqrt2& y) {
    return {x.a * y.a + 2 * x.b * y.b, x.a * y.b + x.b * y.a};
  }
  QSqrt2 operator-() const { return {-a, -b}; }
  friend bool operator==(const QSqrt2& x, const QSqrt2& y) { return x.a == y.a && x.b == y.b; }
  friend bool operator<(const QSqrt2& x, const QSqrt2& y) { return x.a != y.a ? x.a < y.a : x.b < y.b; }

  bool is_rational() const { return b == 0; }
  bool is_integer() const { return b == 0 && a.get_den() == 1; }

  std::string to_string() const {
    if (b == 0) return a.get_str();
    if (a == 0) return b.get_str() + "*r2";
    return a.get_str() + (b > 0 ? "+" : "") + b.get_str() + "*r2";
  }
};

/// Quaternion w + x i + y j + z k with coordinates in Q(sqrt 2).
struct Quaternion {
  QSqrt2 w, x, y, z;

  static Quaternion one() { return {1, 0, 0, 0}; }

  friend Quaternion operator*(const Quaternion& p, const Quaternion& q) {
    return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
  }
  Quaternion conjugate() const { return {w, -x, -y, -z}; }
  Quaternion operator-() const { return {-w, -x, -y, -z}; }
  QSqrt2 norm_squared() const { return w * w + x * x + y * y + z * z; }
  bool is_unit() const { return norm_squared() == QSqrt2(1); }

  friend bool operator==(const Quaternion& p, const Quaternion& q) {
    return p.w == q.w && p.x == q.x && p.y == q.y && p.z == q.z;
  }
  friend bool operator<(const Quaternion& p, const Quaternion& q) {
    if (!(p.w == q.w)) return p.w < q.w;
    if (!(p.x == q.x)) return p.x < q.x;
    if (!(p.y == q.y)) return p.y < q.y;
    return p.z < q.z;
  }

  /// Matrix of v -> q v q^{-1} on the pure quaternions, in the basis i, j, k.
  std::array<std::array<QSqrt2, 3>, 3> rotation() const {
    const Quaternion basis[3] = {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    std::array<std::array<QSqrt2, 3>, 3> m;
    const Quaternion inv = conjugate();
    for (int c = 0; c < 3; ++c) {
      const Quaternion img = (*this) * basis[c] * inv;
      m[0][c] = img.x;
      m[1][c] = img.y;
      m[2][c] = img.z;
    }
    return m;
  }

  /// Rotation matrix when all entries are integers; throws otherwise.
  IntMatrix integer_rotation() const {
    const auto r = rotation();
    IntMatrix m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (!r[i][j].is_integer()) throw ValidationError("rotation of " + to_string() + " is not integral");
        m(i, j) = r[i][j].a.get_num();
      }
    return m;
  }

  std::string to_string() const {
    return "(" + w.to_string() + "," + x.to_string() + "," + y.to_string() + "," + z.to_string() + ")";
  }
};

}  // namespace rotohull

#endif  // ROTOHULL_QUATERNION_HPP
