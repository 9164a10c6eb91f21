#include "flatdirac/nk_certifier.hpp"

#include <cmath>
#include <limits>

#include "flatdirac/error.hpp"
#include "flatdirac/rng.hpp"

namespace flatdirac {

namespace {

template <class T>
T inflate(const T& x) {
  return x * (T(1) + T(kOutwardRounding));
}

template <class T>
void require_lemma_domain(const T& r) {
  if (!(r > T(0)) || r > T(kLipschitzMaxRadius)) {
    throw DomainError("radius must lie in (0, 0.5], got " + to_decimal_string(to_double(r)));
  }
}

// ω̄⁻¹(1 - sqrt(1 - 2αω̄)) in the cancellation-free form 2α / (1 + sqrt(1 - 2αω̄)).
template <class T>
T radius_lhs(const T& alpha, const T& omega) {
  using std::sqrt;
  const T h = T(2) * alpha * omega;
  if (h > T(1)) return std::numeric_limits<T>::infinity();
  return inflate(T(2) * alpha / (T(1) + sqrt(T(1) - h)));
}

template <class T>
Vec4<T> sample_in_ball(CounterRng& rng, const Vec4<T>& center, const T& r) {
  for (;;) {
    Vec4<double> u;
    double s = 0;
    for (auto& x : u) {
      x = rng.uniform(-1.0, 1.0);
      s += x * x;
    }
    if (s >= 1.0) continue;
    Vec4<T> out;
    for (std::size_t i = 0; i < 4; ++i) out[i] = center[i] + r * T(u[i]);
    return out;
  }
}

template <class T>
T radius_threshold(const T& alpha) {
  using std::exp;
  using std::log;
  const T hi_r = T(kLipschitzMaxRadius);
  if (!analytic_radius_condition(alpha, hi_r)) return T(0);
  T lo = log(std::max(alpha, T(1e-300)) * T(1e-3));
  T hi = log(hi_r);
  if (analytic_radius_condition(alpha, exp(lo))) return exp(lo);
  for (int it = 0; it < 200; ++it) {
    const T mid = (lo + hi) / T(2);
    if (analytic_radius_condition(alpha, exp(mid)))
      hi = mid;
    else
      lo = mid;
  }
  return exp(hi);
}

}  // namespace

std::string to_string(LipschitzStrategy s) { return s == LipschitzStrategy::analytic ? "analytic" : "sampled"; }

LipschitzStrategy parse_strategy(const std::string& s) {
  if (s == "analytic") return LipschitzStrategy::analytic;
  if (s == "sampled") return LipschitzStrategy::sampled;
  throw InvalidArgument("unknown Lipschitz strategy '" + s + "'");
}

template <class T>
T compute_alpha(const Vec4<T>& x0, const Precision& p) {
  const FlatnessResidual<T> r = residual(x0, p);
  return inflate(inverse_spectral_norm(r.jacobian)) * inflate(r.norm);
}

template <class T>
T lipschitz_bound_analytic(const T& r) {
  require_lemma_domain(r);
  return T(kLipschitzSlope) * r;
}

template <class T>
T lipschitz_bound_sampled(const Vec4<T>& x0, const T& r, int n_pairs, std::uint64_t seed, const Precision& p) {
  if (n_pairs < 100) throw InvalidArgument("sampled Lipschitz bound needs at least 100 pairs");
  if (!(r > T(0))) throw DomainError("radius must be positive");
  CounterRng rng(seed, 0x4c495053ULL);
  T best(0);
  for (int k = 0; k < n_pairs; ++k) {
    const Vec4<T> x = sample_in_ball(rng, x0, r);
    const Vec4<T> y = sample_in_ball(rng, x0, r);
    const T dist = norm2(x - y);
    if (dist == T(0)) continue;
    const Mat4<T> diff = mat_sub(residual(x, p).jacobian, residual(y, p).jacobian);
    best = std::max(best, T(spectral_norm(diff) / dist));
  }
  return best;
}

template <class T>
bool analytic_radius_condition(const T& alpha, const T& r) {
  const T omega = T(kLipschitzSlope) * r;
  return radius_lhs(alpha, omega) <= r;
}

template <class T>
Certificate<T> certify(const Vec4<T>& x0, const T& r, LipschitzStrategy strategy, const Precision& p,
                       std::uint64_t seed, int sampled_pairs) {
  require_lemma_domain(r);
  if (!ValidityConstraints{}.admits(x0)) throw InvalidArgument("certify: x0 violates the validity constraints");

  Certificate<T> c;
  c.x0 = x0;
  c.radius = r;
  c.strategy = strategy;
  c.precision_bits = p.mantissa_bits;

  const FlatnessResidual<T> res = residual(x0, p);
  const Vec4<T> sv = singular_values(res.jacobian);
  if (sv[0] == T(0)) throw ConditioningError("certify: DH(x0) is singular");
  c.residual_norm = res.norm;
  c.inverse_jacobian_norm = T(1) / sv[0];
  c.alpha = inflate(c.inverse_jacobian_norm) * inflate(res.norm);
  const T direct = norm2(solve(res.jacobian, res.residual));
  c.alpha_bound = to_double(sv[3] / sv[0]) <= kMaxNewtonCondition && c.alpha >= direct;

  c.omega_bar = strategy == LipschitzStrategy::analytic
                    ? lipschitz_bound_analytic(r)
                    : lipschitz_bound_sampled(x0, r, sampled_pairs, seed, p);
  c.lipschitz_valid = inflate(c.inverse_jacobian_norm) <= T(1);

  c.alpha_omega = inflate(c.alpha * c.omega_bar);
  c.product_condition = c.alpha_omega <= T(1) / T(2);
  c.radius_lhs = radius_lhs(c.alpha, c.omega_bar);
  c.radius_condition = c.product_condition && c.radius_lhs <= r;
  c.radius_threshold = radius_threshold(c.alpha);

  c.verdict = c.alpha_bound && c.lipschitz_valid && c.product_condition && c.radius_condition &&
              strategy == LipschitzStrategy::analytic;
  return c;
}

template <class T>
GradientDiagnostics<T> gradient_diagnostics(const Vec4<T>& x0, const Precision& p) {
  const FlatnessResidual<T> res = residual(x0, p);
  GradientDiagnostics<T> d;
  Mat4<T> unit;
  for (std::size_t i = 0; i < 4; ++i) {
    d.gradient_norms[i] = norm2(res.jacobian[i]);
    if (d.gradient_norms[i] == T(0)) throw ConditioningError("gradient of a trace coefficient vanishes");
    for (std::size_t j = 0; j < 4; ++j) unit[i][j] = res.jacobian[i][j] / d.gradient_norms[i];
  }
  d.normalized_determinant = determinant(unit);
  d.jacobian_norm = spectral_norm(res.jacobian);
  d.inverse_jacobian_norm = inverse_spectral_norm(res.jacobian);
  d.residual_norm = res.norm;
  return d;
}

#define FLATDIRAC_INSTANTIATE(T)                                                                   \
  template T compute_alpha(const Vec4<T>&, const Precision&);                                      \
  template T lipschitz_bound_analytic(const T&);                                                    \
  template T lipschitz_bound_sampled(const Vec4<T>&, const T&, int, std::uint64_t, const Precision&); \
  template bool analytic_radius_condition(const T&, const T&);                                     \
  template Certificate<T> certify(const Vec4<T>&, const T&, LipschitzStrategy, const Precision&,   \
                                  std::uint64_t, int);                                             \
  template GradientDiagnostics<T> gradient_diagnostics(const Vec4<T>&, const Precision&);

FLATDIRAC_INSTANTIATE(double)
FLATDIRAC_INSTANTIATE(HighReal)

#undef FLATDIRAC_INSTANTIATE

}  // namespace flatdirac
