#pragma once
//
// Small dense helpers generic over the scalar type (double, Jet, Expression).

#include <cmath>
#include <cstdlib>
#include <vector>

#include "ckforms/error.hpp"
#include "ckforms/expr.hpp"
#include "ckforms/jet.hpp"

namespace ckforms {

/// Row-major square matrix over T.
template <typename T>
struct SquareMatrix {
  int n = 0;
  std::vector<T> a;

  SquareMatrix() = default;
  explicit SquareMatrix(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim) {}
  T& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  const T& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

namespace detail {
inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const Jet& x) { return std::abs(x.v); }
}  // namespace detail

/// Gauss-Jordan inverse with partial pivoting on the value part; also
/// returns the determinant. Exact jet arithmetic makes the derivatives of the
/// inverse exact as well.
template <typename T>
SquareMatrix<T> invert(SquareMatrix<T> m, T* det_out = nullptr) {
  const int n = m.n;
  SquareMatrix<T> inv(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = T(i == j ? 1.0 : 0.0);
  T det(1.0);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (detail::magnitude(m(r, c)) > detail::magnitude(m(piv, c))) piv = r;
    if (detail::magnitude(m(piv, c)) == 0.0) throw DomainError("singular metric matrix");
    if (piv != c) {
      for (int j = 0; j < n; ++j) {
        std::swap(m(c, j), m(piv, j));
        std::swap(inv(c, j), inv(piv, j));
      }
      det = -det;
    }
    const T p = m(c, c);
    det = det * p;
    const T pinv = T(1.0) / p;
    for (int j = 0; j < n; ++j) {
      m(c, j) = m(c, j) * pinv;
      inv(c, j) = inv(c, j) * pinv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const T f = m(r, c);
      for (int j = 0; j < n; ++j) {
        m(r, j) = m(r, j) - f * m(c, j);
        inv(r, j) = inv(r, j) - f * inv(c, j);
      }
    }
  }
  if (det_out) *det_out = det;
  return inv;
}

/// Determinant of the submatrix rows[]×cols[] by Laplace expansion; meant for
/// the tiny minors (size ≤ 5) that appear in form contractions.
template <typename T>
T minor_det(const SquareMatrix<T>& m, const int* rows, const int* cols, int k) {
  if (k == 0) return T(1.0);
  if (k == 1) return m(rows[0], cols[0]);
  if (k == 2) return m(rows[0], cols[0]) * m(rows[1], cols[1]) - m(rows[0], cols[1]) * m(rows[1], cols[0]);
  T acc(0.0);
  int sub[kMaxDim];
  for (int c = 0; c < k; ++c) {
    int w = 0;
    for (int j = 0; j < k; ++j)
      if (j != c) sub[w++] = cols[j];
    const T term = m(rows[0], cols[c]) * minor_det(m, rows + 1, sub, k - 1);
    acc = (c % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

/// Symbolic inverse and determinant via cofactors (no pivoting needed).
inline SquareMatrix<Expression> symbolic_inverse(const SquareMatrix<Expression>& m, Expression* det_out) {
  const int n = m.n;
  const int all[kMaxDim] = {0, 1, 2, 3, 4};
  const Expression det = minor_det(m, all, all, n);
  SquareMatrix<Expression> inv(n);
  int rows[kMaxDim] = {}, cols[kMaxDim] = {};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // inv(i,j) = (-1)^{i+j} M_{ji} / det
      int w = 0;
      for (int r = 0; r < n; ++r)
        if (r != j) rows[w++] = r;
      w = 0;
      for (int c = 0; c < n; ++c)
        if (c != i) cols[w++] = c;
      Expression cof = minor_det(m, rows, cols, n - 1);
      if ((i + j) % 2) cof = -cof;
      inv(i, j) = cof / det;
    }
  if (det_out) *det_out = det;
  return inv;
}

}  // namespace ckforms
