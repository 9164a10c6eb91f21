#pragma once

// Newton–Kantorovich certification of an approximate root of the flatness
// residual H. Comparisons are made in the working precision with every
// bounded quantity inflated outward by kOutwardFactor.

#include <array>
#include <cstdint>
#include <string>

#include "flatdirac/flatness_solver.hpp"
#include "flatdirac/linalg.hpp"
#include "flatdirac/precision.hpp"

namespace flatdirac {

inline constexpr double kOutwardRounding = 1e-10;  // relative inflation of bounded norms
inline constexpr double kLipschitzSlope = 1e8;      // ‖DH(x) - DH(y)‖ ≤ 1e8 r ‖x - y‖ on B(x0, r)
inline constexpr double kLipschitzMaxRadius = 0.5;

enum class LipschitzStrategy { analytic, sampled };

std::string to_string(LipschitzStrategy s);
LipschitzStrategy parse_strategy(const std::string& s);

template <class T>
struct Certificate {
  Vec4<T> x0{};
  T residual_norm{};
  T inverse_jacobian_norm{};
  T alpha{};
  T omega_bar{};
  T radius{};
  T alpha_omega{};
  T radius_lhs{};           // ω̄⁻¹(1 - sqrt(1 - 2αω̄)), outward rounded
  T radius_threshold{};     // smallest r in (0, 0.5] passing the radius test (analytic), 0 if none
  bool alpha_bound = false;       // DH(x0) invertible and the product bound dominates the direct solve
  bool lipschitz_valid = false;   // r in the Lemma domain and ‖DH(x0)⁻¹‖ ≤ 1
  bool product_condition = false; // αω̄ ≤ 1/2
  bool radius_condition = false;  // ω̄⁻¹(1 - sqrt(1 - 2αω̄)) ≤ r
  LipschitzStrategy strategy = LipschitzStrategy::analytic;
  int precision_bits = 0;
  bool verdict = false;
};

// ‖DH(x0)⁻¹‖·‖H(x0)‖ with both factors inflated by (1 + 1e-10).
template <class T>
T compute_alpha(const Vec4<T>& x0, const Precision& p);

// ω̄ = 1e8 r; r must lie in (0, 0.5].
template <class T>
T lipschitz_bound_analytic(const T& r);

// Max of ‖DH(x) - DH(y)‖ / ‖x - y‖ over sampled pairs in B(x0, r).
// Diagnostic only.
template <class T>
T lipschitz_bound_sampled(const Vec4<T>& x0, const T& r, int n_pairs, std::uint64_t seed, const Precision& p);

template <class T>
Certificate<T> certify(const Vec4<T>& x0, const T& r, LipschitzStrategy strategy, const Precision& p,
                       std::uint64_t seed = 1, int sampled_pairs = 1000);

// Radius condition for given α and the analytic ω̄(r) = 1e8 r.
template <class T>
bool analytic_radius_condition(const T& alpha, const T& r);

template <class T>
struct GradientDiagnostics {
  std::array<T, 4> gradient_norms{};  // ‖∇a2‖, ‖∇a4‖, ‖∇a6‖, ‖∇a8‖
  T normalized_determinant{};
  T jacobian_norm{};
  T inverse_jacobian_norm{};
  T residual_norm{};
};

template <class T>
GradientDiagnostics<T> gradient_diagnostics(const Vec4<T>& x0, const Precision& p);

}  // namespace flatdirac
