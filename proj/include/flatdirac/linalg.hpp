#pragma once

// Fixed 4x4 dense linear algebra over a generic real backend: partial-pivot
// solves, determinants and spectral norms via the symmetric Gram eigenproblem.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "flatdirac/error.hpp"

namespace flatdirac {

template <class T>
using Vec4 = std::array<T, 4>;

template <class T>
using Mat4 = std::array<std::array<T, 4>, 4>;

template <class T>
T norm2(const Vec4<T>& v) {
  using std::sqrt;
  T s(0);
  for (const auto& x : v) s += x * x;
  return sqrt(s);
}

template <class T>
Vec4<T> operator-(const Vec4<T>& a, const Vec4<T>& b) {
  Vec4<T> r;
  for (std::size_t i = 0; i < 4; ++i) r[i] = a[i] - b[i];
  return r;
}

template <class T>
Vec4<T> operator+(const Vec4<T>& a, const Vec4<T>& b) {
  Vec4<T> r;
  for (std::size_t i = 0; i < 4; ++i) r[i] = a[i] + b[i];
  return r;
}

template <class T>
Mat4<T> mat_sub(const Mat4<T>& a, const Mat4<T>& b) {
  Mat4<T> r;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) r[i][j] = a[i][j] - b[i][j];
  return r;
}

template <class T>
Mat4<T> transpose(const Mat4<T>& a) {
  Mat4<T> r;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) r[i][j] = a[j][i];
  return r;
}

template <class T>
Mat4<T> mat_mul(const Mat4<T>& a, const Mat4<T>& b) {
  Mat4<T> r;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      T s(0);
      for (std::size_t k = 0; k < 4; ++k) s += a[i][k] * b[k][j];
      r[i][j] = s;
    }
  return r;
}

template <class T>
Vec4<T> mat_vec(const Mat4<T>& a, const Vec4<T>& v) {
  Vec4<T> r;
  for (std::size_t i = 0; i < 4; ++i) {
    T s(0);
    for (std::size_t k = 0; k < 4; ++k) s += a[i][k] * v[k];
    r[i] = s;
  }
  return r;
}

template <class T>
T frobenius(const Mat4<T>& a) {
  using std::sqrt;
  T s(0);
  for (const auto& row : a)
    for (const auto& x : row) s += x * x;
  return sqrt(s);
}

// Gaussian elimination with partial pivoting. Throws ConditioningError on an
// exactly zero pivot.
template <class T>
Vec4<T> solve(Mat4<T> a, Vec4<T> b) {
  using std::abs;
  for (std::size_t col = 0; col < 4; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < 4; ++r)
      if (abs(a[r][col]) > abs(a[piv][col])) piv = r;
    if (a[piv][col] == T(0)) throw ConditioningError("singular 4x4 system");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < 4; ++r) {
      const T f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  Vec4<T> x;
  for (std::size_t i = 4; i-- > 0;) {
    T s = b[i];
    for (std::size_t c = i + 1; c < 4; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

template <class T>
T determinant(Mat4<T> a) {
  using std::abs;
  T det(1);
  for (std::size_t col = 0; col < 4; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < 4; ++r)
      if (abs(a[r][col]) > abs(a[piv][col])) piv = r;
    if (a[piv][col] == T(0)) return T(0);
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < 4; ++r) {
      const T f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
template <class T>
Vec4<T> symmetric_eigenvalues(Mat4<T> a) {
  using std::abs;
  using std::sqrt;
  T scale(0);
  for (const auto& row : a)
    for (const auto& x : row) scale = std::max(scale, T(abs(x)));
  if (scale == T(0)) return Vec4<T>{T(0), T(0), T(0), T(0)};
  const T eps = std::numeric_limits<T>::epsilon();
  for (int sweep = 0; sweep < 100; ++sweep) {
    T off(0);
    for (std::size_t p = 0; p < 4; ++p)
      for (std::size_t q = p + 1; q < 4; ++q) off += a[p][q] * a[p][q];
    if (sqrt(off) <= eps * scale) break;
    for (std::size_t p = 0; p < 4; ++p) {
      for (std::size_t q = p + 1; q < 4; ++q) {
        if (a[p][q] == T(0)) continue;
        const T theta = (a[q][q] - a[p][p]) / (T(2) * a[p][q]);
        const T sgn = theta >= T(0) ? T(1) : T(-1);
        const T t = sgn / (abs(theta) + sqrt(theta * theta + T(1)));
        const T c = T(1) / sqrt(t * t + T(1));
        const T s = t * c;
        for (std::size_t k = 0; k < 4; ++k) {
          const T akp = a[k][p];
          const T akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < 4; ++k) {
          const T apk = a[p][k];
          const T aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  Vec4<T> ev{a[0][0], a[1][1], a[2][2], a[3][3]};
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Singular values (ascending) from the Gram matrix AᵀA.
template <class T>
Vec4<T> singular_values(const Mat4<T>& a) {
  using std::sqrt;
  Vec4<T> ev = symmetric_eigenvalues(mat_mul(transpose(a), a));
  for (auto& x : ev) x = x > T(0) ? sqrt(x) : T(0);
  return ev;
}

template <class T>
T spectral_norm(const Mat4<T>& a) {
  return singular_values(a)[3];
}

// ‖A⁻¹‖ = 1/σ_min; throws ConditioningError when σ_min vanishes.
template <class T>
T inverse_spectral_norm(const Mat4<T>& a) {
  const T smin = singular_values(a)[0];
  if (smin == T(0)) throw ConditioningError("matrix is singular");
  return T(1) / smin;
}

}  // namespace flatdirac
