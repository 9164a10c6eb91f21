#pragma once

// SU(2) letters, words and their jets at xi = 0.
//
// A letter is g_s(t, xi) = exp(t a_s(xi)) with a_s(xi) = i(s σ1 + xi σ3), which
// by the polar form of su(2) exponentials is
//   cos(ω t) σ0 + i (sin(ω t)/ω) (s σ1 + xi σ3),   ω = sqrt(1 + xi²).
// A word of letters (s_1,t_1)..(s_m,t_m) is M = g_m ··· g_1 (g_1 acts first).

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "flatdirac/complex.hpp"
#include "flatdirac/error.hpp"
#include "flatdirac/jet.hpp"
#include "flatdirac/precision.hpp"

namespace flatdirac {

template <class T>
struct UnitaryMatrix2 {
  // Row-major: (0,0) (0,1) (1,0) (1,1).
  std::array<Complex<T>, 4> e{};

  static UnitaryMatrix2 identity() {
    UnitaryMatrix2 u;
    u.e = {Complex<T>(T(1)), Complex<T>(T(0)), Complex<T>(T(0)), Complex<T>(T(1))};
    return u;
  }

  const Complex<T>& operator()(int r, int c) const { return e[static_cast<std::size_t>(2 * r + c)]; }
  Complex<T>& operator()(int r, int c) { return e[static_cast<std::size_t>(2 * r + c)]; }

  friend UnitaryMatrix2 operator*(const UnitaryMatrix2& a, const UnitaryMatrix2& b) {
    UnitaryMatrix2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return r;
  }
  friend UnitaryMatrix2 operator+(const UnitaryMatrix2& a, const UnitaryMatrix2& b) {
    UnitaryMatrix2 r;
    for (std::size_t k = 0; k < 4; ++k) r.e[k] = a.e[k] + b.e[k];
    return r;
  }
  friend UnitaryMatrix2 operator*(const Complex<T>& s, const UnitaryMatrix2& a) {
    UnitaryMatrix2 r;
    for (std::size_t k = 0; k < 4; ++k) r.e[k] = s * a.e[k];
    return r;
  }

  UnitaryMatrix2 adjoint() const {
    UnitaryMatrix2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r(i, j) = conj((*this)(j, i));
    return r;
  }

  Complex<T> trace() const { return e[0] + e[3]; }
  Complex<T> half_trace() const { return trace() * (T(1) / T(2)); }
  Complex<T> det() const { return e[0] * e[3] - e[1] * e[2]; }

  // max-entry distance to another matrix
  T distance(const UnitaryMatrix2& o) const {
    T m(0);
    for (std::size_t k = 0; k < 4; ++k) m = std::max(m, abs(e[k] - o.e[k]));
    return m;
  }

  // max |(U U* - I)_ij|
  T unitarity_defect() const { return ((*this) * adjoint()).distance(identity()); }
};

template <class T>
struct Letter {
  int sign = 1;  // +1 or -1
  T duration{};
};

template <class T>
class Word {
 public:
  Word() = default;
  Word(std::vector<int> signs, std::vector<T> durations) {
    if (signs.size() != durations.size()) throw InvalidArgument("word: signs and durations differ in length");
    if (signs.empty()) throw InvalidArgument("word: needs at least one letter");
    for (std::size_t j = 0; j < signs.size(); ++j) {
      if (signs[j] != 1 && signs[j] != -1) throw InvalidArgument("word: sign must be +1 or -1");
      if (!(durations[j] > T(0))) throw InvalidArgument("word: durations must be positive");
      letters_.push_back(Letter<T>{signs[j], durations[j]});
    }
  }

  // The alternating four-letter word (+,-,+,-) with the given durations.
  static Word alternating4(const std::array<T, 4>& t) {
    return Word({1, -1, 1, -1}, std::vector<T>(t.begin(), t.end()));
  }

  const std::vector<Letter<T>>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }

  T period() const {
    T s(0);
    for (const auto& l : letters_) s += l.duration;
    return s;
  }

  bool alternating() const {
    for (std::size_t j = 0; j + 1 < letters_.size(); ++j)
      if (letters_[j].sign * letters_[j + 1].sign != -1) return false;
    return true;
  }

  // Rotate by `shift` letters: (ℓ_{1+shift} … ℓ_m ℓ_1 … ℓ_shift).
  Word rotated(std::size_t shift) const {
    Word w;
    for (std::size_t j = 0; j < letters_.size(); ++j) w.letters_.push_back(letters_[(j + shift) % letters_.size()]);
    return w;
  }

  template <class U>
  Word<U> cast() const {
    std::vector<int> s;
    std::vector<U> d;
    for (const auto& l : letters_) {
      s.push_back(l.sign);
      d.push_back(convert<U>(l.duration));
    }
    return Word<U>(std::move(s), std::move(d));
  }

 private:
  template <class U>
  static U convert(const T& x) {
    if constexpr (std::is_same_v<U, double>) {
      return to_double(x);
    } else {
      return U(x);
    }
  }

  std::vector<Letter<T>> letters_;
};

template <class T>
UnitaryMatrix2<T> letter_at(int sign, const T& t, const T& xi) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const T w = sqrt(T(1) + xi * xi);
  const T c = cos(w * t);
  const T s = sin(w * t) / w;
  UnitaryMatrix2<T> g;
  g(0, 0) = Complex<T>(c, s * xi);
  g(1, 1) = Complex<T>(c, -s * xi);
  g(0, 1) = Complex<T>(T(0), s * T(sign));
  g(1, 0) = g(0, 1);
  return g;
}

template <class T>
UnitaryMatrix2<T> word_at(const Word<T>& word, const T& xi) {
  UnitaryMatrix2<T> m = UnitaryMatrix2<T>::identity();
  for (const auto& l : word.letters()) m = letter_at(l.sign, l.duration, xi) * m;
  return m;
}

// Generator a_s(xi) = i(s σ1 + xi σ3) as a matrix.
template <class T>
UnitaryMatrix2<T> generator_at(int sign, const T& xi) {
  UnitaryMatrix2<T> a;
  a(0, 0) = Complex<T>(T(0), xi);
  a(1, 1) = Complex<T>(T(0), -xi);
  a(0, 1) = Complex<T>(T(0), T(sign));
  a(1, 0) = a(0, 1);
  return a;
}

template <class T>
struct MatrixJet {
  std::array<TruncatedJet<T>, 4> e;

  explicit MatrixJet(int order) : e{TruncatedJet<T>(order), TruncatedJet<T>(order), TruncatedJet<T>(order),
                                    TruncatedJet<T>(order)} {}

  static MatrixJet identity(int order) {
    MatrixJet m(order);
    m(0, 0) = TruncatedJet<T>::identity(order);
    m(1, 1) = TruncatedJet<T>::identity(order);
    return m;
  }

  int order() const { return e[0].order(); }
  const TruncatedJet<T>& operator()(int r, int c) const { return e[static_cast<std::size_t>(2 * r + c)]; }
  TruncatedJet<T>& operator()(int r, int c) { return e[static_cast<std::size_t>(2 * r + c)]; }

  friend MatrixJet operator*(const MatrixJet& a, const MatrixJet& b) {
    MatrixJet r(a.order());
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r(i, j) = jet_mul(a(i, 0), b(0, j)) + jet_mul(a(i, 1), b(1, j));
    return r;
  }

  TruncatedJet<T> half_trace() const { return (e[0] + e[3]) * (T(1) / T(2)); }

  // Constant coefficients, i.e. the matrix at xi = 0.
  UnitaryMatrix2<T> at_zero() const {
    UnitaryMatrix2<T> u;
    for (std::size_t k = 0; k < 4; ++k) u.e[k] = e[k][0];
    return u;
  }

  UnitaryMatrix2<T> evaluate(const T& xi) const {
    UnitaryMatrix2<T> u;
    for (std::size_t k = 0; k < 4; ++k) u.e[k] = e[k].evaluate(xi);
    return u;
  }
};

template <class T>
MatrixJet<T> letter_jet(int sign, const T& t, int order) {
  auto [cos_j, sin_j] = cos_sin_t_omega_jet(t, order);
  const TruncatedJet<T> sinc = jet_mul(sin_j, inv_omega_jet<T>(order));  // sin(tω)/ω
  const TruncatedJet<T> xi_sinc = sinc.times_variable();
  const Complex<T> i = Complex<T>::i();
  MatrixJet<T> g(order);
  g(0, 0) = cos_j + xi_sinc * i;
  g(1, 1) = cos_j - xi_sinc * i;
  g(0, 1) = sinc * Complex<T>(T(0), T(sign));
  g(1, 0) = g(0, 1);
  return g;
}

template <class T>
MatrixJet<T> generator_jet(int sign, int order) {
  MatrixJet<T> a(order);
  a(0, 0) = TruncatedJet<T>::variable(order) * Complex<T>::i();
  a(1, 1) = -a(0, 0);
  a(0, 1) = TruncatedJet<T>::constant(order, Complex<T>(T(0), T(sign)));
  a(1, 0) = a(0, 1);
  return a;
}

template <class T>
MatrixJet<T> word_jet(const Word<T>& word, int order) {
  MatrixJet<T> m = MatrixJet<T>::identity(order);
  for (const auto& l : word.letters()) m = letter_jet(l.sign, l.duration, order) * m;
  return m;
}

// Jets of ∂M/∂t_j for every letter j, using ∂g_j/∂t_j = a_j g_j.
template <class T>
std::vector<MatrixJet<T>> word_t_jacobian_jet(const Word<T>& word, int order) {
  const auto& letters = word.letters();
  const std::size_t m = letters.size();
  std::vector<MatrixJet<T>> g;
  g.reserve(m);
  for (const auto& l : letters) g.push_back(letter_jet(l.sign, l.duration, order));

  // before[j] = g_{j-1} ··· g_0, after[j] = g_{m-1} ··· g_{j+1}
  std::vector<MatrixJet<T>> before(m, MatrixJet<T>::identity(order));
  for (std::size_t j = 1; j < m; ++j) before[j] = g[j - 1] * before[j - 1];
  std::vector<MatrixJet<T>> after(m, MatrixJet<T>::identity(order));
  for (std::size_t j = m - 1; j-- > 0;) after[j] = after[j + 1] * g[j + 1];

  std::vector<MatrixJet<T>> d;
  d.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    d.push_back(after[j] * (generator_jet<T>(letters[j].sign, order) * g[j]) * before[j]);
  }
  return d;
}

template <class T>
struct TraceJet {
  TruncatedJet<T> raw;
  std::vector<T> even;  // a_0, a_2, ..., a_{2K}
  T odd_residual_max{};
  T imag_residual_max{};

  const T& a(int two_k) const { return even.at(static_cast<std::size_t>(two_k / 2)); }
};

// Half trace of a matrix jet, validated against the evenness and reality
// invariants (odd / imaginary parts must stay below 1e3 * abs_tol relative to
// the coefficient scale).
template <class T>
TraceJet<T> trace_jet(const MatrixJet<T>& mj, const Precision& p) {
  TraceJet<T> tj{mj.half_trace(), {}, T(0), T(0)};
  const T scale = std::max(T(1), tj.raw.max_abs());
  tj.odd_residual_max = tj.raw.max_odd_abs();
  tj.imag_residual_max = tj.raw.max_imag_abs();
  const T limit = T(1e3) * T(p.abs_tol()) * scale;
  if (tj.odd_residual_max > limit) {
    throw ConsistencyError("trace jet has odd coefficient of size " +
                           std::to_string(to_double(tj.odd_residual_max)));
  }
  if (tj.imag_residual_max > limit) {
    throw ConsistencyError("trace jet has imaginary part of size " +
                           std::to_string(to_double(tj.imag_residual_max)));
  }
  for (int k = 0; k <= tj.raw.order(); k += 2) tj.even.push_back(tj.raw[k].re);
  return tj;
}

enum class OdeConvention {
  // dû/dt = a_ε(ξ) û, the convention of the closed-form letters.
  generator,
  // i dû/dt = (ξ σ3 + ε σ1) û with mass m(t) = ε on each interval.
  physical,
};

// Classical RK4 over one period, with steps distributed over the letters in
// proportion to their durations so no step straddles a switch. Test oracle.
template <class T>
UnitaryMatrix2<T> ode_oracle(const Word<T>& word, const T& xi, long steps,
                             OdeConvention convention = OdeConvention::generator) {
  if (steps < 1000) throw InvalidArgument("ode_oracle: needs at least 1000 steps");
  const T period = word.period();
  UnitaryMatrix2<T> u = UnitaryMatrix2<T>::identity();
  for (const auto& l : word.letters()) {
    UnitaryMatrix2<T> a = generator_at<T>(l.sign, xi);
    if (convention == OdeConvention::physical) {
      // -i (ξσ3 + εσ1) = -a_ε(ξ)
      a = Complex<T>(T(-1)) * a;
    }
    long n = std::lround(to_double(T(steps) * l.duration / period));
    if (n < 1) n = 1;
    const T h = l.duration / T(n);
    const Complex<T> half(h / T(2));
    const Complex<T> full(h);
    const Complex<T> sixth(h / T(6));
    const Complex<T> two(T(2));
    for (long s = 0; s < n; ++s) {
      const UnitaryMatrix2<T> k1 = a * u;
      const UnitaryMatrix2<T> k2 = a * (u + half * k1);
      const UnitaryMatrix2<T> k3 = a * (u + half * k2);
      const UnitaryMatrix2<T> k4 = a * (u + full * k3);
      u = u + sixth * (k1 + two * k2 + two * k3 + k4);
    }
  }
  return u;
}

}  // namespace flatdirac
