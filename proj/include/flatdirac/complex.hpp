#pragma once

#include <cmath>
#include <ostream>

namespace flatdirac {

// Minimal complex scalar over an arbitrary real backend. std::complex is only
// specified for the built-in floating types, so multiprecision reals need this.
template <class T>
struct Complex {
  T re{};
  T im{};

  Complex() = default;
  Complex(T real) : re(std::move(real)) {}  // NOLINT(google-explicit-constructor)
  Complex(T real, T imag) : re(std::move(real)), im(std::move(imag)) {}

  static Complex i() { return Complex(T(0), T(1)); }

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    T r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator*=(const T& s) {
    re *= s;
    im *= s;
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    T d = o.re * o.re + o.im * o.im;
    T r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = std::move(r);
    return *this;
  }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator*(Complex a, const T& s) { return a *= s; }
  friend Complex operator*(const T& s, Complex a) { return a *= s; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator-(const Complex& a) { return Complex(-a.re, -a.im); }
  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }

  friend std::ostream& operator<<(std::ostream& os, const Complex& z) {
    return os << '(' << z.re << ',' << z.im << ')';
  }
};

template <class T>
Complex<T> conj(const Complex<T>& z) {
  return Complex<T>(z.re, -z.im);
}

// |z|^2
template <class T>
T norm(const Complex<T>& z) {
  return z.re * z.re + z.im * z.im;
}

template <class T>
T abs(const Complex<T>& z) {
  using std::sqrt;
  return sqrt(norm(z));
}

// e^{i phi}
template <class T>
Complex<T> expi(const T& phi) {
  using std::cos;
  using std::sin;
  return Complex<T>(cos(phi), sin(phi));
}

}  // namespace flatdirac
