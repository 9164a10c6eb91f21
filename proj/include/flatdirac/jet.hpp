#pragma once

// Truncated Taylor polynomials in one variable xi about 0.
//
// A jet of order N stores c_0..c_N with c_k = f^(k)(0)/k!. All binary
// operations require equal order and truncate their result at N. The
// recurrences for sqrt, division and sin/cos follow the usual automatic
// differentiation identities (Griewank & Walther, ch. 13).

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "flatdirac/complex.hpp"
#include "flatdirac/error.hpp"
#include "flatdirac/precision.hpp"

namespace flatdirac {

template <class T>
class TruncatedJet {
 public:
  using value_type = Complex<T>;

  explicit TruncatedJet(int order) : c_(check_order(order) + 1, value_type(T(0), T(0))) {}

  static TruncatedJet from_coefficients(std::vector<value_type> coefficients) {
    if (coefficients.empty()) throw InvalidArgument("jet needs at least one coefficient");
    for (const auto& z : coefficients) {
      if (!finite(z.re) || !finite(z.im)) throw InvalidArgument("jet coefficient is not finite");
    }
    TruncatedJet j(0);
    j.c_ = std::move(coefficients);
    return j;
  }

  static TruncatedJet from_real(const std::vector<T>& coefficients) {
    std::vector<value_type> c;
    c.reserve(coefficients.size());
    for (const auto& x : coefficients) c.emplace_back(x, T(0));
    return from_coefficients(std::move(c));
  }

  static TruncatedJet constant(int order, value_type value) {
    TruncatedJet j(order);
    j.c_[0] = std::move(value);
    return j;
  }

  static TruncatedJet identity(int order) { return constant(order, value_type(T(1), T(0))); }

  // The jet of xi itself.
  static TruncatedJet variable(int order) {
    TruncatedJet j(order);
    if (order >= 1) j.c_[1] = value_type(T(1), T(0));
    return j;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const value_type& operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  value_type& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
  const std::vector<value_type>& coefficients() const { return c_; }

  TruncatedJet& operator+=(const TruncatedJet& o) {
    require_same_order(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  TruncatedJet& operator-=(const TruncatedJet& o) {
    require_same_order(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  TruncatedJet& operator*=(const value_type& s) {
    for (auto& z : c_) z *= s;
    return *this;
  }
  TruncatedJet& operator*=(const T& s) {
    for (auto& z : c_) z *= s;
    return *this;
  }

  friend TruncatedJet operator+(TruncatedJet a, const TruncatedJet& b) { return a += b; }
  friend TruncatedJet operator-(TruncatedJet a, const TruncatedJet& b) { return a -= b; }
  friend TruncatedJet operator-(TruncatedJet a) {
    for (auto& z : a.c_) z = -z;
    return a;
  }
  friend TruncatedJet operator*(TruncatedJet a, const value_type& s) { return a *= s; }
  friend TruncatedJet operator*(const value_type& s, TruncatedJet a) { return a *= s; }
  friend TruncatedJet operator*(TruncatedJet a, const T& s) { return a *= s; }
  friend TruncatedJet operator*(const T& s, TruncatedJet a) { return a *= s; }
  friend TruncatedJet operator*(const TruncatedJet& a, const TruncatedJet& b) { return jet_mul(a, b); }

  // Multiplication by xi: shifts coefficients up and drops c_N.
  TruncatedJet times_variable() const {
    TruncatedJet r(order());
    for (int k = order(); k >= 1; --k) r[k] = c_[static_cast<std::size_t>(k - 1)];
    return r;
  }

  // d/dxi, keeping the order (top coefficient becomes 0).
  TruncatedJet derivative() const {
    TruncatedJet r(order());
    for (int k = 1; k <= order(); ++k) r[k - 1] = c_[static_cast<std::size_t>(k)] * T(k);
    return r;
  }

  // Antiderivative with the given constant term; c_N of the input is dropped.
  TruncatedJet integral(value_type constant_term) const {
    TruncatedJet r(order());
    r[0] = std::move(constant_term);
    for (int k = 1; k <= order(); ++k) r[k] = c_[static_cast<std::size_t>(k - 1)] * (T(1) / T(k));
    return r;
  }

  // Horner evaluation of the polynomial at xi.
  value_type evaluate(const T& xi) const {
    value_type acc(T(0), T(0));
    for (int k = order(); k >= 0; --k) acc = acc * value_type(xi, T(0)) + c_[static_cast<std::size_t>(k)];
    return acc;
  }

  T max_abs() const {
    T m(0);
    for (const auto& z : c_) m = std::max(m, abs(z));
    return m;
  }
  T max_odd_abs() const {
    T m(0);
    for (std::size_t k = 1; k < c_.size(); k += 2) m = std::max(m, abs(c_[k]));
    return m;
  }
  T max_even_abs() const {
    T m(0);
    for (std::size_t k = 0; k < c_.size(); k += 2) m = std::max(m, abs(c_[k]));
    return m;
  }
  T max_imag_abs() const {
    using std::abs;
    T m(0);
    for (const auto& z : c_) m = std::max(m, T(abs(z.im)));
    return m;
  }

  std::vector<T> real_parts() const {
    std::vector<T> r;
    r.reserve(c_.size());
    for (const auto& z : c_) r.push_back(z.re);
    return r;
  }

  void require_same_order(const TruncatedJet& o) const {
    if (o.order() != order()) {
      throw InvalidArgument("jet order mismatch: " + std::to_string(order()) + " vs " +
                            std::to_string(o.order()));
    }
  }

 private:
  static int check_order(int order) {
    if (order < 0) throw InvalidArgument("jet order must be >= 0");
    return order;
  }
  static bool finite(const T& x) {
    using std::isfinite;
    using boost::multiprecision::isfinite;
    return isfinite(x);
  }

  std::vector<value_type> c_;
};

// Cauchy product truncated at the common order.
template <class T>
TruncatedJet<T> jet_mul(const TruncatedJet<T>& a, const TruncatedJet<T>& b) {
  a.require_same_order(b);
  const int n = a.order();
  TruncatedJet<T> r(n);
  for (int k = 0; k <= n; ++k) {
    Complex<T> acc(T(0), T(0));
    for (int i = 0; i <= k; ++i) acc += a[i] * b[k - i];
    r[k] = acc;
  }
  return r;
}

// a / b; b must have a nonzero constant term.
template <class T>
TruncatedJet<T> jet_div(const TruncatedJet<T>& a, const TruncatedJet<T>& b) {
  a.require_same_order(b);
  if (norm(b[0]) == T(0)) throw InvalidArgument("jet_div: divisor has zero constant term");
  const int n = a.order();
  TruncatedJet<T> q(n);
  for (int k = 0; k <= n; ++k) {
    Complex<T> acc = a[k];
    for (int i = 1; i <= k; ++i) acc -= b[i] * q[k - i];
    q[k] = acc / b[0];
  }
  return q;
}

// Principal square root of a jet whose constant term is a positive real.
template <class T>
TruncatedJet<T> jet_sqrt(const TruncatedJet<T>& a) {
  using std::sqrt;
  if (!(a[0].re > T(0))) throw InvalidArgument("jet_sqrt: constant term must be positive real");
  const int n = a.order();
  TruncatedJet<T> s(n);
  s[0] = Complex<T>(sqrt(a[0].re), T(0));
  const Complex<T> two_s0 = s[0] * T(2);
  for (int k = 1; k <= n; ++k) {
    Complex<T> acc = a[k];
    for (int i = 1; i < k; ++i) acc -= s[i] * s[k - i];
    s[k] = acc / two_s0;
  }
  return s;
}

// sin and cos of a jet with zero constant term, via s' = c φ', c' = -s φ'.
template <class T>
std::pair<TruncatedJet<T>, TruncatedJet<T>> sin_cos_zero_constant(const TruncatedJet<T>& phi) {
  if (norm(phi[0]) != T(0)) throw InvalidArgument("sin_cos_zero_constant: constant term must be zero");
  const int n = phi.order();
  TruncatedJet<T> s(n);
  TruncatedJet<T> c(n);
  c[0] = Complex<T>(T(1), T(0));
  for (int k = 1; k <= n; ++k) {
    Complex<T> sk(T(0), T(0));
    Complex<T> ck(T(0), T(0));
    for (int j = 1; j <= k; ++j) {
      const Complex<T> w = phi[j] * T(j);
      sk += w * c[k - j];
      ck -= w * s[k - j];
    }
    const T inv_k = T(1) / T(k);
    s[k] = sk * inv_k;
    c[k] = ck * inv_k;
  }
  return {std::move(s), std::move(c)};
}

// cos(x) and sin(x) of a general real-constant jet x = x0 + φ via angle addition.
template <class T>
std::pair<TruncatedJet<T>, TruncatedJet<T>> jet_cos_sin(const TruncatedJet<T>& x) {
  using std::cos;
  using std::sin;
  TruncatedJet<T> phi = x;
  const Complex<T> x0 = phi[0];
  phi[0] = Complex<T>(T(0), T(0));
  auto [s, c] = sin_cos_zero_constant(phi);
  const T c0 = cos(x0.re);
  const T s0 = sin(x0.re);
  TruncatedJet<T> cos_x = c * c0 - s * s0;
  TruncatedJet<T> sin_x = s * c0 + c * s0;
  return {std::move(cos_x), std::move(sin_x)};
}

// Coefficients of (1 + xi^2)^alpha: binom(alpha, j) in the xi^{2j} slots.
template <class T>
TruncatedJet<T> binomial_even_jet(int order, const T& alpha) {
  TruncatedJet<T> j(order);
  T b(1);
  for (int k = 0; 2 * k <= order; ++k) {
    if (k > 0) b = b * (alpha - T(k - 1)) / T(k);
    j[2 * k] = Complex<T>(b, T(0));
  }
  return j;
}

// ω(ξ) = sqrt(1 + ξ²).
template <class T>
TruncatedJet<T> omega_jet(int order) {
  return binomial_even_jet<T>(order, T(1) / T(2));
}

// 1/ω(ξ) = (1 + ξ²)^(-1/2).
template <class T>
TruncatedJet<T> inv_omega_jet(int order) {
  return binomial_even_jet<T>(order, T(-1) / T(2));
}

// cos(t ω(ξ)) and sin(t ω(ξ)) from the split t ω = t + t(ω - 1); the inner
// jet t(ω - 1) has zero constant term for any t.
template <class T>
std::pair<TruncatedJet<T>, TruncatedJet<T>> cos_sin_t_omega_jet(const T& t, int order) {
  using std::cos;
  using std::sin;
  TruncatedJet<T> inner = omega_jet<T>(order);
  inner[0] = Complex<T>(T(0), T(0));
  inner *= t;
  auto [s, c] = sin_cos_zero_constant(inner);
  const T ct = cos(t);
  const T st = sin(t);
  TruncatedJet<T> cos_j = c * ct - s * st;
  TruncatedJet<T> sin_j = c * st + s * ct;
  return {std::move(cos_j), std::move(sin_j)};
}

template <class T>
TruncatedJet<T> cos_t_omega_jet(const T& t, int order) {
  return cos_sin_t_omega_jet(t, order).first;
}

template <class T>
TruncatedJet<T> sin_t_omega_jet(const T& t, int order) {
  return cos_sin_t_omega_jet(t, order).second;
}

}  // namespace flatdirac
