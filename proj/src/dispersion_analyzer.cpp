#include "flatdirac/dispersion_analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include <boost/math/quadrature/gauss.hpp>

#include "flatdirac/error.hpp"

namespace flatdirac {

namespace {

using Gauss = boost::math::quadrature::gauss<double, 10>;

constexpr long kPanelsPerBlock = 4096;
constexpr int kMaxRefinements = 6;

template <class T>
T half_trace_real(const Word<T>& word, const T& xi) {
  return word_at(word, xi).half_trace().re;
}

// θ(ξ) over the bump support in hardware precision, principal branch.
class PhaseSampler {
 public:
  PhaseSampler(const Word<double>& word, double half_width) : word_(word) {
    constexpr int kProbe = 4001;
    const auto grid = theta_grid(word_, half_width, kProbe, Precision::hardware());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      if (!(grid[j].theta > 0.0 && grid[j].theta < pi<double>())) {
        throw InvalidArgument("bump support leaves the region where the Floquet exponent is a simple branch");
      }
      if (j > 0) {
        const double dxi = grid[j].xi - grid[j - 1].xi;
        max_slope_ = std::max(max_slope_, std::abs(grid[j].theta - grid[j - 1].theta) / dxi);
      }
    }
    theta0_ = std::acos(half_trace_real(word_, 0.0));
  }

  double theta(double xi) const { return std::acos(std::clamp(half_trace_real(word_, xi), -1.0, 1.0)); }
  double theta0() const { return theta0_; }
  double max_slope() const { return max_slope_; }

 private:
  const Word<double>& word_;
  double theta0_ = 0;
  double max_slope_ = 0;
};

struct PanelSums {
  Complex<double> plus;
  Complex<double> minus;
};

PanelSums integrate_panels(const PhaseSampler& phase, const BumpProfile& bump, long n, double x, long panels,
                           int threads) {
  const double a = -bump.half_width;
  const double width = 2.0 * bump.half_width / static_cast<double>(panels);
  const auto& nodes = Gauss::abscissa();
  const auto& weights = Gauss::weights();
  const double theta0 = phase.theta0();
  const double dn = static_cast<double>(n);

  auto panel = [&](long i, PanelSums& acc) {
    const double mid = a + (static_cast<double>(i) + 0.5) * width;
    const double half = 0.5 * width;
    auto eval = [&](double xi, double w) {
      const double u = bump.value(xi);
      if (u == 0.0) return;
      const double dphase = dn * (phase.theta(xi) - theta0);
      const double wu = w * u * half;
      acc.plus += expi(dphase + xi * x) * wu;
      acc.minus += expi(-dphase + xi * x) * wu;
    };
    // boost stores the non-negative half of a symmetric rule; 10 points has no zero node
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      eval(mid + half * nodes[k], weights[k]);
      eval(mid - half * nodes[k], weights[k]);
    }
  };

  const long blocks = (panels + kPanelsPerBlock - 1) / kPanelsPerBlock;
  std::vector<PanelSums> block_sums(static_cast<std::size_t>(blocks));
  auto work = [&](long first_block, long stride) {
    for (long b = first_block; b < blocks; b += stride) {
      PanelSums acc;
      const long end = std::min(panels, (b + 1) * kPanelsPerBlock);
      for (long i = b * kPanelsPerBlock; i < end; ++i) panel(i, acc);
      block_sums[static_cast<std::size_t>(b)] = acc;
    }
  };
  const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(blocks)));
  if (nthreads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work, t, nthreads);
    for (auto& th : pool) th.join();
  }
  // fixed summation order, independent of the thread count
  PanelSums total;
  for (const auto& s : block_sums) {
    total.plus += s.plus;
    total.minus += s.minus;
  }
  return total;
}

double relative_change(const Complex<double>& fine, const Complex<double>& coarse, double floor) {
  return abs(fine - coarse) / std::max(abs(fine), floor);
}

}  // namespace

template <class T>
TruncatedJet<T> theta_jet(const TraceJet<T>& tj, const Precision& p) {
  using std::abs;
  using std::acos;
  const T a0 = tj.a(0);
  if (!(abs(a0) < T(1) - T(10 * p.abs_tol()))) {
    throw BranchDegeneracyError("|F(0)| is 1 to working precision; θ(0) is a multiple of π");
  }
  const int n = tj.raw.order();
  TruncatedJet<T> f(n);
  for (int k = 0; k <= n; ++k) f[k] = Complex<T>(tj.raw[k].re, T(0));
  const TruncatedJet<T> one = TruncatedJet<T>::identity(n);
  const TruncatedJet<T> sin_theta = jet_sqrt(one - jet_mul(f, f));
  const TruncatedJet<T> dtheta = -jet_div(f.derivative(), sin_theta);
  return dtheta.integral(Complex<T>(acos(a0), T(0)));
}

template <class T>
FlatnessOrder<T> flatness_order(const TruncatedJet<T>& theta, const T& tol) {
  using std::abs;
  T factorial(1);
  for (int j = 2; j <= theta.order(); ++j) {
    factorial *= T(j);
    const T d = factorial * theta[j].re;
    if (abs(d) > tol) {
      if (j + 2 > theta.order()) {
        throw IndeterminateOrderError("flatness order " + std::to_string(j) + " needs a jet of order >= " +
                                      std::to_string(j + 2));
      }
      return FlatnessOrder<T>{j, d};
    }
  }
  throw IndeterminateOrderError("all θ derivatives up to order " + std::to_string(theta.order()) +
                                " are below tolerance; the jet is too short");
}

double default_flatness_tol(const Precision& p) { return p.is_hardware() ? 1e-15 : 1e-40; }

template <class T>
T theta_at(const Word<T>& word, const T& xi, const Precision& p) {
  using std::abs;
  using std::acos;
  const T f = half_trace_real(word, xi);
  if (abs(f) > T(1) + T(10 * p.abs_tol())) {
    throw ConsistencyError("|½ Tr M(ξ)| exceeds 1 at ξ = " + to_decimal_string(to_double(xi)));
  }
  return acos(std::clamp(f, T(-1), T(1)));
}

template <class T>
std::vector<GridSample<T>> theta_grid(const Word<T>& word, const T& xi_max, int n_points, const Precision& p) {
  using std::abs;
  using std::acos;
  if (n_points < 2) throw InvalidArgument("theta grid needs at least 2 points");
  if (!(xi_max > T(0))) throw InvalidArgument("xi_max must be positive");
  const T two_pi = T(2) * pi<T>();
  std::vector<GridSample<T>> grid(static_cast<std::size_t>(n_points));
  std::size_t centre = 0;
  for (int j = 0; j < n_points; ++j) {
    auto& g = grid[static_cast<std::size_t>(j)];
    g.xi = -xi_max + T(2) * xi_max * T(j) / T(n_points - 1);
    g.F = half_trace_real(word, g.xi);
    if (abs(g.F) > T(1) + T(10 * p.abs_tol())) {
      throw ConsistencyError("|½ Tr M(ξ)| exceeds 1 at ξ = " + to_decimal_string(to_double(g.xi)));
    }
    if (abs(g.xi) < abs(grid[centre].xi)) centre = static_cast<std::size_t>(j);
  }
  grid[centre].theta = acos(std::clamp(grid[centre].F, T(-1), T(1)));

  // Branch choice by linear extrapolation from the two previous samples, so
  // crossings of multiples of π are followed instead of reflected.
  auto continue_from = [&](const GridSample<T>* prev2, const GridSample<T>& prev, GridSample<T>& cur) {
    const T predicted = prev2 ? T(2) * prev.theta - prev2->theta : prev.theta;
    const T base = acos(std::clamp(cur.F, T(-1), T(1)));
    T best(0);
    bool first = true;
    for (int sign : {1, -1}) {
      const T v = T(sign) * base;
      const T m = round((predicted - v) / two_pi);
      const T cand = v + m * two_pi;
      if (first || abs(cand - predicted) < abs(best - predicted)) {
        best = cand;
        first = false;
      }
    }
    if (abs(best - prev.theta) >= pi<T>() / T(2)) {
      throw InvalidArgument("theta grid too coarse to follow the branch continuously");
    }
    cur.theta = best;
  };
  for (std::size_t j = centre + 1; j < grid.size(); ++j)
    continue_from(j >= centre + 2 ? &grid[j - 2] : nullptr, grid[j - 1], grid[j]);
  for (std::size_t j = centre; j-- > 0;)
    continue_from(j + 2 <= centre ? &grid[j + 2] : nullptr, grid[j + 1], grid[j]);
  return grid;
}

template <class T>
Diagonalization<T> diagonalizer(const UnitaryMatrix2<T>& u, const Precision& p) {
  using std::abs;
  using std::acos;
  using std::sqrt;
  const T c = u.half_trace().re;
  const T tol = T(10 * p.abs_tol());
  if (!(abs(c) < T(1) - tol)) throw DegenerateSpectrumError("eigenvalues of the monodromy coincide");
  Diagonalization<T> d;
  d.theta = acos(c);
  const T s = sqrt(T(1) - c * c);
  for (int col = 0; col < 2; ++col) {
    const Complex<T> lambda(c, col == 0 ? s : -s);
    Complex<T> v1a = u(0, 1);
    Complex<T> v2a = lambda - u(0, 0);
    Complex<T> v1b = lambda - u(1, 1);
    Complex<T> v2b = u(1, 0);
    Complex<T> v1 = v1a;
    Complex<T> v2 = v2a;
    if (norm(v1b) + norm(v2b) > norm(v1a) + norm(v2a)) {
      v1 = v1b;
      v2 = v2b;
    }
    const T len = sqrt(norm(v1) + norm(v2));
    v1 *= T(1) / len;
    v2 *= T(1) / len;
    const Complex<T>& lead = abs(v1) > sqrt(tol) ? v1 : v2;
    const Complex<T> phase = conj(lead) * (T(1) / abs(lead));
    d.P(0, col) = v1 * phase;
    d.P(1, col) = v2 * phase;
  }
  return d;
}

template <class T>
DispersionProfile<T> dispersion_profile(const Word<T>& word, int order, const Precision& p, const T& tol) {
  const TraceJet<T> tj = trace_jet(word_jet(word, order), p);
  DispersionProfile<T> prof;
  prof.theta = theta_jet(tj, p);
  prof.theta0 = prof.theta[0].re;
  prof.group_velocity = -prof.theta[1].re;
  const FlatnessOrder<T> fo = flatness_order(prof.theta, tol);
  prof.flatness_order = fo.k;
  prof.leading_derivative = fo.derivative;
  return prof;
}

template <class T>
T flatness_exponent_fit(const Word<T>& word, const T& lo, const T& hi, int points, const Precision& p) {
  using std::abs;
  using std::exp;
  using std::log;
  if (points < 2 || !(lo > T(0)) || !(hi > lo)) throw InvalidArgument("flatness fit needs 0 < lo < hi, >= 2 points");
  const T theta0 = theta_at(word, T(0), p);
  std::vector<double> lx;
  std::vector<double> ly;
  for (int j = 0; j < points; ++j) {
    const T xi = exp(log(lo) + (log(hi) - log(lo)) * T(j) / T(points - 1));
    const T dy = abs(theta_at(word, xi, p) - theta0);
    if (dy == T(0)) throw AccuracyError("θ(ξ) - θ(0) vanished to working precision", 0.0);
    lx.push_back(to_double(log(xi)));
    ly.push_back(to_double(log(dy)));
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / points;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / points;
  double sxy = 0;
  double sxx = 0;
  for (std::size_t j = 0; j < lx.size(); ++j) {
    sxy += (lx[j] - mx) * (ly[j] - my);
    sxx += (lx[j] - mx) * (lx[j] - mx);
  }
  return T(sxy / sxx);
}

double BumpProfile::value(double xi) const {
  const double z = xi / half_width;
  if (std::abs(z) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - z * z));
}

double BumpProfile::integral() const {
  double s = 0;
  constexpr int kPanels = 64;
  const double w = 2.0 * half_width / kPanels;
  for (int i = 0; i < kPanels; ++i) {
    const double a = -half_width + i * w;
    s += Gauss::integrate([this](double xi) { return value(xi); }, a, a + w);
  }
  return s;
}

double default_bump_width(const Word<double>& word) {
  constexpr double kCap = 1.0;
  constexpr double kFraction = 0.9;
  constexpr double kStep = 1e-3;
  constexpr double kMonotoneFloor = 1e-10;
  const double theta0 = std::acos(half_trace_real(word, 0.0));
  double prev = theta0;
  int direction = 0;
  for (int j = 1; j * kStep <= kCap / kFraction; ++j) {
    const double xi = j * kStep;
    const double f = half_trace_real(word, xi);
    if (std::abs(f) >= 1.0 - 1e-9) return std::min(kCap, kFraction * xi);
    const double th = std::acos(f);
    if (direction == 0) {
      if (std::abs(th - theta0) > kMonotoneFloor) direction = th > theta0 ? 1 : -1;
    } else if ((th - prev) * direction <= 0) {
      return std::min(kCap, kFraction * (xi - kStep));
    }
    prev = th;
  }
  return kCap;
}

AmplitudePair oscillatory_amplitude(const Word<double>& word, const BumpProfile& bump, long n, double x, int threads) {
  if (n < 0) throw InvalidArgument("number of periods must be non-negative");
  if (!(bump.half_width > 0)) throw InvalidArgument("bump half-width must be positive");
  const PhaseSampler phase(word, bump.half_width);
  const double span = 2.0 * bump.half_width;
  const double denom = 10.0 * static_cast<double>(n) * phase.max_slope() + std::abs(x);
  const double max_width = denom > 0 ? 2.0 * pi<double>() / denom : span;
  long panels = std::max<long>(8, static_cast<long>(std::ceil(span / max_width)));

  const double floor = 1e-12 * bump.integral();
  PanelSums coarse = integrate_panels(phase, bump, n, x, panels, threads);
  double change = 0;
  for (int r = 0; r < kMaxRefinements; ++r) {
    panels *= 2;
    const PanelSums fine = integrate_panels(phase, bump, n, x, panels, threads);
    change = std::max(relative_change(fine.plus, coarse.plus, floor), relative_change(fine.minus, coarse.minus, floor));
    coarse = fine;
    if (change <= kAmplitudeRelTol) {
      const double dn = static_cast<double>(n);
      const double inv2pi = 1.0 / (2.0 * pi<double>());
      AmplitudePair out;
      out.plus = fine.plus * expi(dn * phase.theta0()) * bump.weight_plus * inv2pi;
      out.minus = fine.minus * expi(-dn * phase.theta0()) * bump.weight_minus * inv2pi;
      out.panels = panels;
      out.relative_change = change;
      return out;
    }
  }
  throw AccuracyError("oscillatory quadrature did not converge", change);
}

Complex<double> hormander_constant(int k) {
  if (k < 1) throw InvalidArgument("order must be positive");
  return expi(pi<double>() / (2.0 * k)) * (std::tgamma(1.0 / k) / k);
}

Complex<double> stationary_phase_prediction(int k, double theta_k0, Complex<double> u0, double theta0, long n) {
  if (k % 2 != 0) throw UnsupportedOrderError("stationary phase expansion implemented for even k only");
  if (k < 2) throw InvalidArgument("flatness order must be >= 2");
  if (theta_k0 == 0) throw InvalidArgument("leading derivative must be nonzero");
  if (n < 1) throw InvalidArgument("number of periods must be >= 1");
  Complex<double> c = hormander_constant(k);
  if (theta_k0 < 0) c = conj(c);
  const double k_factorial = std::tgamma(k + 1.0);
  const double scale = 2.0 * std::pow(k_factorial, 1.0 / k) *
                       std::pow(static_cast<double>(n) * std::abs(theta_k0), -1.0 / k) / (2.0 * pi<double>());
  return expi(static_cast<double>(n) * theta0) * c * u0 * scale;
}

DecayFitResult decay_fit(const std::vector<std::pair<long, double>>& samples) {
  if (samples.size() < 5) throw InvalidArgument("decay fit needs at least 5 samples");
  DecayFitResult r;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& [n, a] = samples[i];
    if (!(a > 0) || !std::isfinite(a)) throw InvalidSampleError("decay fit needs positive finite amplitudes");
    if (n < 1) throw InvalidSampleError("decay fit needs positive n");
    if (i > 0 && n <= samples[i - 1].first) throw InvalidArgument("n values must be strictly increasing");
    r.n_values.push_back(n);
    r.amplitudes.push_back(a);
  }
  const double m = static_cast<double>(samples.size());
  double mx = 0;
  double my = 0;
  for (const auto& [n, a] : samples) {
    mx += std::log(static_cast<double>(n));
    my += std::log(a);
  }
  mx /= m;
  my /= m;
  double sxx = 0;
  double sxy = 0;
  double syy = 0;
  for (const auto& [n, a] : samples) {
    const double dx = std::log(static_cast<double>(n)) - mx;
    const double dy = std::log(a) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  r.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return r;
}

#define FLATDIRAC_INSTANTIATE(T)                                                                      \
  template TruncatedJet<T> theta_jet(const TraceJet<T>&, const Precision&);                           \
  template FlatnessOrder<T> flatness_order(const TruncatedJet<T>&, const T&);                         \
  template T theta_at(const Word<T>&, const T&, const Precision&);                                    \
  template std::vector<GridSample<T>> theta_grid(const Word<T>&, const T&, int, const Precision&);    \
  template Diagonalization<T> diagonalizer(const UnitaryMatrix2<T>&, const Precision&);               \
  template DispersionProfile<T> dispersion_profile(const Word<T>&, int, const Precision&, const T&);   \
  template T flatness_exponent_fit(const Word<T>&, const T&, const T&, int, const Precision&);

FLATDIRAC_INSTANTIATE(double)
FLATDIRAC_INSTANTIATE(HighReal)

#undef FLATDIRAC_INSTANTIATE

}  // namespace flatdirac
