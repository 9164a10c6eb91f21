#pragma once

// Randomized property suites shared by the unit tests and the acceptance
// runner. Each returns the number of failing cases and the first failure.

#include <cmath>
#include <string>

#include "flatdirac/commands.hpp"
#include "flatdirac/flatness_solver.hpp"
#include "flatdirac/jet.hpp"
#include "flatdirac/su2.hpp"
#include "oracles.hpp"

namespace props {

using namespace flatdirac;

struct Outcome {
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  void record(bool ok, const std::string& what) {
    ++cases;
    if (ok) return;
    if (failures++ == 0) first_failure = what;
  }
  bool ok() const { return failures == 0 && cases > 0; }
};

inline Word<double> random_word(CounterRng& rng, std::size_t min_len = 1, std::size_t max_len = 6) {
  const std::size_t m = min_len + static_cast<std::size_t>(rng.uniform01() * double(max_len - min_len + 1));
  return Word<double>(oracle::random_signs(rng, m), oracle::random_durations(rng, m));
}

inline Outcome su2_closure(std::uint64_t seed, int n = 100) {
  Outcome o;
  CounterRng rng(seed, 101);
  for (int c = 0; c < n; ++c) {
    const Word<double> w = random_word(rng);
    const double xi = rng.uniform(-5, 5);
    const auto m = word_at(w, xi);
    const bool ok = m.unitarity_defect() < 1e-12 && abs(m.det() - Complex<double>(1.0)) < 1e-12 &&
                    std::abs(m.half_trace().im) < 1e-12;
    o.record(ok, "word of length " + std::to_string(w.size()) + " at xi=" + std::to_string(xi));
  }
  return o;
}

inline Outcome trace_evenness(std::uint64_t seed, int n = 100) {
  Outcome o;
  CounterRng rng(seed, 102);
  for (int c = 0; c < n; ++c) {
    const Word<double> w = random_word(rng);
    const double xi = rng.uniform(-3, 3);
    const double lhs = word_at(w, xi).half_trace().re;
    const double rhs = word_at(w, -xi).half_trace().re;
    const auto raw = word_jet(w, 12).half_trace();
    o.record(std::abs(lhs - rhs) < 1e-12 && raw.max_odd_abs() < 1e-9 * std::max(1.0, raw.max_abs()),
             "F(xi) != F(-xi) at xi=" + std::to_string(xi));
  }
  return o;
}

inline Outcome trace_cyclicity(std::uint64_t seed, int n = 100) {
  Outcome o;
  CounterRng rng(seed, 103);
  for (int c = 0; c < n; ++c) {
    const std::size_t m = 2 * (1 + static_cast<std::size_t>(rng.uniform01() * 3));
    std::vector<int> s(m);
    for (std::size_t j = 0; j < m; ++j) s[j] = j % 2 == 0 ? 1 : -1;
    const Word<double> w(s, oracle::random_durations(rng, m));
    const std::size_t shift = 2 * static_cast<std::size_t>(rng.uniform01() * double(m / 2));
    const double xi = rng.uniform(-3, 3);
    const double a = word_at(w, xi).half_trace().re;
    const double b = word_at(w.rotated(shift), xi).half_trace().re;
    o.record(std::abs(a - b) < 1e-12, "shift " + std::to_string(shift));
  }
  return o;
}

// Central differences of H with step h and h/2: the error must shrink like h².
inline Outcome jacobian_fd(std::uint64_t seed, int n = 100) {
  Outcome o;
  CounterRng rng(seed, 104);
  const Precision p = Precision::hardware();
  const double h = 1e-3;
  for (int c = 0; c < n; ++c) {
    Vec4<double> t;
    for (auto& x : t) x = rng.uniform(0.5, 5.0);
    const auto r = residual(t, p);
    double e1 = 0, e2 = 0, scale = 1;
    for (std::size_t j = 0; j < 4; ++j) {
      for (double step : {h, h / 2}) {
        Vec4<double> tp = t, tm = t;
        tp[j] += step;
        tm[j] -= step;
        const auto rp = residual(tp, p).residual;
        const auto rm = residual(tm, p).residual;
        for (std::size_t i = 0; i < 4; ++i) {
          const double err = std::abs((rp[i] - rm[i]) / (2 * step) - r.jacobian[i][j]);
          (step == h ? e1 : e2) = std::max(step == h ? e1 : e2, err);
          scale = std::max(scale, std::abs(r.jacobian[i][j]));
        }
      }
    }
    // second-order: halving h divides the error by ~4; allow roundoff floor
    const bool ok = e1 < 1e-3 * scale * 10 && (e2 < e1 / 3 || e2 < 1e-9 * scale);
    o.record(ok, "FD errors " + std::to_string(e1) + " / " + std::to_string(e2));
  }
  return o;
}

inline Outcome omega_consistency(std::uint64_t seed, int n = 100) {
  Outcome o;
  CounterRng rng(seed, 105);
  for (int c = 0; c < n; ++c) {
    const int order = 2 + static_cast<int>(rng.uniform01() * 30);
    const auto w = omega_jet<double>(order);
    const auto w2 = jet_mul(w, w);
    const auto one = jet_mul(w, inv_omega_jet<double>(order));
    bool ok = w2[0].re == 1.0 && w2[2].re == 1.0 && one[0].re == 1.0;
    for (int k = 1; k <= order; ++k) {
      if (k != 2 && std::abs(w2[k].re) > 1e-15) ok = false;
      if (std::abs(one[k].re) > 1e-15) ok = false;
    }
    // the exact identity also holds for the evaluated series inside the disk
    const double xi = rng.uniform(-0.3, 0.3);
    ok = ok && std::abs(w.evaluate(xi).re - std::sqrt(1 + xi * xi)) < std::pow(0.3, order) * 4;
    o.record(ok, "order " + std::to_string(order));
  }
  return o;
}

inline Outcome cos_sin_identity(std::uint64_t seed, int n = 100) {
  Outcome o;
  CounterRng rng(seed, 106);
  for (int c = 0; c < n; ++c) {
    const int order = 4 + static_cast<int>(rng.uniform01() * 12);
    TruncatedJet<double> x(order);
    for (int k = 0; k <= order; ++k) x[k] = Complex<double>(rng.uniform(-2, 2), 0.0);
    const auto [cj, sj] = jet_cos_sin(x);
    const auto sum = jet_mul(cj, cj) + jet_mul(sj, sj);
    bool ok = std::abs(sum[0].re - 1.0) < 1e-13;
    for (int k = 1; k <= order; ++k) ok = ok && abs(sum[k]) < 1e-10 * std::pow(4.0, k);
    const double t = rng.uniform(0.1, 6.0);
    const auto [ct, st] = cos_sin_t_omega_jet(t, order);
    const auto sum2 = jet_mul(ct, ct) + jet_mul(st, st);
    ok = ok && std::abs(sum2[0].re - 1.0) < 1e-13;
    for (int k = 1; k <= order; ++k) ok = ok && abs(sum2[k]) < 1e-10 * std::pow(t + 1, k);
    o.record(ok, "order " + std::to_string(order));
  }
  return o;
}

// Every orbit element of the refined root is a root to the same accuracy.
inline Outcome orbit_roots(std::uint64_t seed, int n = 100) {
  Outcome o;
  PrecisionScope scope(Precision::high(256));
  const Precision p = Precision::high(256);
  const auto star = newton_refine(paper_root(), p, HighReal("1e-60"), 10);
  const HighReal floor = std::max(star.norm, HighReal("1e-75"));
  const auto orbit = symmetry_orbit(star.point);
  CounterRng rng(seed, 107);
  for (int c = 0; c < n; ++c) {
    const auto& q = orbit[static_cast<std::size_t>(rng.uniform01() * 8)];
    const HighReal r = residual_norm(q, p);
    o.record(r <= HighReal(1000) * floor, "orbit residual " + to_decimal_string(to_double(r)));
  }
  return o;
}

inline Outcome solve_reruns(std::uint64_t seed, int n = 2) {
  Outcome o;
  RunConfig cfg;
  cfg.seed = seed;
  CommandOptions opt;
  const auto first = cmd_solve(cfg, opt).artifacts.at("json");
  for (int c = 0; c < n; ++c) {
    opt.threads = 1 + c;
    o.record(cmd_solve(cfg, opt).artifacts.at("json") == first, "rerun " + std::to_string(c) + " differs");
  }
  return o;
}

}  // namespace props
