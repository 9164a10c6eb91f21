#pragma once

// Floquet exponent θ(ξ) of a word (F = cos θ), its flatness order at ξ = 0,
// the diagonalizer of the monodromy, oscillatory amplitudes of band-limited
// data after n periods, and decay-rate fits.

#include <utility>
#include <vector>

#include "flatdirac/complex.hpp"
#include "flatdirac/jet.hpp"
#include "flatdirac/precision.hpp"
#include "flatdirac/su2.hpp"

namespace flatdirac {

// θ = arccos(F) as a jet, θ(0) ∈ (0, π), via θ' = -F' / sqrt(1 - F²).
template <class T>
TruncatedJet<T> theta_jet(const TraceJet<T>& tj, const Precision& p);

template <class T>
struct FlatnessOrder {
  int k = 0;
  T derivative{};  // θ^(k)(0)
};

// Smallest j ≥ 2 with |θ^(j)(0)| > tol. Needs two guard coefficients above j.
template <class T>
FlatnessOrder<T> flatness_order(const TruncatedJet<T>& theta, const T& tol);

// 1e-15 at 53 bits, 1e-40 otherwise.
double default_flatness_tol(const Precision& p);

template <class T>
struct GridSample {
  T xi{};
  T theta{};
  T F{};
};

// Principal θ(ξ) = arccos(½ Tr M(ξ)); throws when |F| exceeds 1 beyond roundoff.
template <class T>
T theta_at(const Word<T>& word, const T& xi, const Precision& p);

// θ on an equispaced grid over [-xi_max, xi_max], unwrapped by continuity
// outward from the sample nearest ξ = 0.
template <class T>
std::vector<GridSample<T>> theta_grid(const Word<T>& word, const T& xi_max, int n_points, const Precision& p);

template <class T>
struct Diagonalization {
  UnitaryMatrix2<T> P;
  T theta{};  // in (0, π); P* U P = diag(e^{iθ}, e^{-iθ})
};

// Eigen-decomposition of an SU(2) matrix. Column phases are fixed by making
// the first non-negligible entry of each column real and positive.
template <class T>
Diagonalization<T> diagonalizer(const UnitaryMatrix2<T>& u, const Precision& p);

template <class T>
struct DispersionProfile {
  T theta0{};
  TruncatedJet<T> theta{TruncatedJet<T>(0)};
  int flatness_order = 0;
  T leading_derivative{};
  T group_velocity{};  // s0 = -θ'(0)
  std::vector<GridSample<T>> grid;
};

template <class T>
DispersionProfile<T> dispersion_profile(const Word<T>& word, int order, const Precision& p, const T& tol);

// Log-log slope of |θ(ξ) - θ(0)| over log-spaced ξ in [lo, hi].
template <class T>
T flatness_exponent_fit(const Word<T>& word, const T& lo, const T& hi, int points, const Precision& p);

struct BumpProfile {
  double half_width = 0.5;
  Complex<double> weight_plus{1.0, 0.0};
  Complex<double> weight_minus{1.0, 0.0};

  // exp(1 - 1/(1 - (ξ/b)²)) on (-b, b), zero outside; equals 1 at ξ = 0.
  double value(double xi) const;
  double integral() const;
};

// b = min(1, 0.9 ξ_c) with ξ_c the first ξ > 0 where θ stops being monotone
// or |F| reaches 1; keeps ξ = 0 as the only stationary point in the support.
double default_bump_width(const Word<double>& word);

struct AmplitudePair {
  Complex<double> plus;   // (1/2π) ∫ e^{+inθ(ξ) + iξx} φ̂₊(ξ) dξ
  Complex<double> minus;  // (1/2π) ∫ e^{-inθ(ξ) + iξx} φ̂₋(ξ) dξ
  long panels = 0;
  double relative_change = 0;  // between the last two panel refinements
};

inline constexpr double kAmplitudeRelTol = 1e-6;

AmplitudePair oscillatory_amplitude(const Word<double>& word, const BumpProfile& bump, long n, double x,
                                    int threads = 1);

// Hörmander's constant C_{k,0} = k⁻¹ Γ(1/k) e^{iπ/(2k)}.
Complex<double> hormander_constant(int k);

// Leading term of the amplitude (1/2π) ∫ e^{inθ(ξ)} u(ξ) dξ for a phase with
// θ^(j)(0) = 0 (1 ≤ j < k), θ^(k)(0) = theta_k0:
//   (1/2π) e^{inθ0} · 2 C_{k,0} (k!)^{1/k} · (n |θ_k0|)^{-1/k} · u0,
// with the phase of C conjugated when theta_k0 < 0.
Complex<double> stationary_phase_prediction(int k, double theta_k0, Complex<double> u0, double theta0, long n);

struct DecayFitResult {
  std::vector<long> n_values;
  std::vector<double> amplitudes;
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};

DecayFitResult decay_fit(const std::vector<std::pair<long, double>>& samples);

}  // namespace flatdirac
