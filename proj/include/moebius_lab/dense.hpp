#pragma once

// Small dense helpers written over a generic scalar so the same code runs on
// doubles and on Taylor expansions.

#include <cmath>
#include <cstddef>
#include <vector>

#include "moebius_lab/errors.hpp"
#include "moebius_lab/taylor.hpp"

namespace moebius_lab {

template <class S>
using Vector = std::vector<S>;

template <class S>
using Matrix = std::vector<std::vector<S>>;

template <class S>
S dot(const Vector<S>& a, const Vector<S>& b) {
  S r = a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) r += a[i] * b[i];
  return r;
}

/// Lorentz product with the first coordinate timelike.
template <class S>
S lorentz_dot(const Vector<S>& a, const Vector<S>& b) {
  S r = -(a[0] * b[0]);
  for (std::size_t i = 1; i < a.size(); ++i) r += a[i] * b[i];
  return r;
}

template <class S>
Vector<S> axpy(const S& alpha, const Vector<S>& x, Vector<S> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
  return y;
}

template <class S, class T>
Vector<S> scaled(const T& alpha, Vector<S> x) {
  for (auto& v : x) v = v * alpha;
  return x;
}

template <class S>
Matrix<S> zeros_like(std::size_t rows, std::size_t cols) {
  return Matrix<S>(rows, Vector<S>(cols, S(0.0)));
}

/// Inverse by Gauss-Jordan elimination, pivoting on the point value.
template <class S>
Matrix<S> invert(Matrix<S> a) {
  const std::size_t n = a.size();
  Matrix<S> inv = zeros_like<S>(n, n);
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = S(1.0);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(value_of(a[r][col])) > std::abs(value_of(a[piv][col]))) piv = r;
    if (value_of(a[piv][col]) == 0.0)
      throw Error(ErrorCode::NotPositiveDefinite, "invert: singular matrix");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const S d = S(1.0) / a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] = a[col][j] * d;
      inv[col][j] = inv[col][j] * d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const S f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

template <class S>
Matrix<S> matmul(const Matrix<S>& a, const Matrix<S>& b) {
  const std::size_t n = a.size(), m = b[0].size(), k = b.size();
  Matrix<S> c = zeros_like<S>(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      S s = a[i][0] * b[0][j];
      for (std::size_t l = 1; l < k; ++l) s += a[i][l] * b[l][j];
      c[i][j] = s;
    }
  return c;
}

template <class S>
S trace(const Matrix<S>& a) {
  S t = a[0][0];
  for (std::size_t i = 1; i < a.size(); ++i) t += a[i][i];
  return t;
}

}  // namespace moebius_lab
