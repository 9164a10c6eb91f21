#pragma once

// The flatness residual H(t) = (a2, a4, a6, a8) of the alternating word
// (+,-,+,-) with durations t, its exact Jacobian, and the three-stage root
// search: uniform sampling, stochastic descent, Newton refinement.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flatdirac/linalg.hpp"
#include "flatdirac/precision.hpp"

namespace flatdirac {

// Order of the jets used for the residual. Only a0..a8 are needed and
// truncation never affects lower coefficients.
inline constexpr int kResidualJetOrder = 8;

template <class T>
struct FlatnessResidual {
  Vec4<T> point{};
  Vec4<T> residual{};  // (a2, a4, a6, a8)
  Mat4<T> jacobian{};  // row i: gradient of a_{2(i+1)}
  T a0{};
  T norm{};
};

struct ValidityConstraints {
  double min_duration = 0.3;
  double min_abs_alt_sum = 0.1;  // |t1 - t2 + t3 - t4|

  void validate() const;

  template <class T>
  bool admits(const Vec4<T>& t) const {
    using std::abs;
    for (const auto& x : t)
      if (!(x >= T(min_duration))) return false;
    return abs(t[0] - t[1] + t[2] - t[3]) >= T(min_abs_alt_sum);
  }
};

struct SearchConfig {
  std::uint64_t seed = 1;
  int samples = 1000;
  double domain_lo = 0.0;
  double domain_hi = 6.283185307179586;
  double eta0 = 0.5;
  double shrink_factor = 0.5;
  int stall_threshold = 200;
  double eta_min = 1e-12;
  long max_evaluations = 2'000'000;
  // Random restarts are numbered; each restart owns two RNG streams.
  std::uint64_t restart = 0;

  void validate() const;
  std::uint64_t search_stream() const { return 2 * restart; }
  std::uint64_t descent_stream() const { return 2 * restart + 1; }
};

template <class T>
FlatnessResidual<T> residual(const Vec4<T>& point, const Precision& p);

// ‖H(point)‖ without the Jacobian; the search stages only need this.
template <class T>
T residual_norm(const Vec4<T>& point, const Precision& p);

struct SearchOutcome {
  Vec4<double> point{};
  double norm = 0;
  int valid_samples = 0;
};

SearchOutcome random_search(const SearchConfig& cfg, const ValidityConstraints& v);

struct DescentOutcome {
  Vec4<double> point{};
  double norm = 0;
  std::vector<double> accepted_norms;  // starts with the norm at the start point
  long evaluations = 0;
  double final_eta = 0;
};

DescentOutcome stochastic_descent(const Vec4<double>& start, const SearchConfig& cfg, const ValidityConstraints& v);

template <class T>
struct NewtonOutcome {
  Vec4<T> point{};
  int iterations = 0;
  std::vector<double> norms;  // ‖H‖ at every iterate, starting point first
  T norm{};
};

inline constexpr double kMaxNewtonCondition = 1e12;

template <class T>
NewtonOutcome<T> newton_refine(const Vec4<T>& start, const Precision& p, const T& tol, int max_iter);

// The four cyclic shifts followed by their reversals.
template <class T>
std::array<Vec4<T>, 8> symmetry_orbit(const Vec4<T>& t) {
  std::array<Vec4<T>, 8> orbit;
  for (std::size_t s = 0; s < 4; ++s) {
    for (std::size_t j = 0; j < 4; ++j) orbit[s][j] = t[(j + s) % 4];
    for (std::size_t j = 0; j < 4; ++j) orbit[4 + s][j] = orbit[s][3 - j];
  }
  return orbit;
}

// Smallest Euclidean distance from `point` to the orbit of `reference`.
template <class T>
T orbit_distance(const Vec4<T>& point, const Vec4<T>& reference) {
  const auto orbit = symmetry_orbit(reference);
  T best = norm2(point - orbit[0]);
  for (const auto& q : orbit) best = std::min(best, norm2(point - q));
  return best;
}

struct PipelineOutcome {
  SearchOutcome search;
  DescentOutcome descent;
  std::optional<NewtonOutcome<HighReal>> newton;
  std::string newton_error;
  bool converged = false;
  HighReal final_norm;
  Vec4<HighReal> final_point;
};

// random_search -> stochastic_descent (53-bit) -> newton_refine (p).
// Newton failures are recorded, not thrown; the best point is always kept.
PipelineOutcome solve_pipeline(const SearchConfig& cfg, const ValidityConstraints& v, const Precision& p,
                               const HighReal& newton_tol, int newton_max_iter);

// The approximate root published with the construction.
Vec4<double> paper_root_double();
Vec4<HighReal> paper_root();  // parsed from its decimal digits at the current precision

}  // namespace flatdirac
