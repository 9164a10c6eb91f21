#include "flatdirac/flatness_solver.hpp"

#include <cmath>
#include <string>

#include "flatdirac/error.hpp"
#include "flatdirac/rng.hpp"
#include "flatdirac/su2.hpp"

namespace flatdirac {

namespace {

const std::array<const char*, 4> kPublishedRootDigits = {"4.088866559569492", "3.117488248716022",
                                                     "2.615221023066265", "1.762750988714514"};

template <class T>
void require_positive(const Vec4<T>& point) {
  for (const auto& x : point)
    if (!(x > T(0))) throw InvalidArgument("flatness residual needs positive durations");
}

template <class T>
Word<T> construction_word(const Vec4<T>& point) {
  return Word<T>::alternating4(point);
}

}  // namespace

void ValidityConstraints::validate() const {
  if (!(min_duration > 0) || !(min_abs_alt_sum > 0))
    throw InvalidArgument("validity constraints must be positive");
}

void SearchConfig::validate() const {
  if (samples < 1) throw InvalidArgument("search needs at least one sample");
  if (!(eta0 > 0 && eta0 < 1)) throw InvalidArgument("eta0 must lie in (0, 1)");
  if (!(shrink_factor > 0 && shrink_factor < 1)) throw InvalidArgument("shrink_factor must lie in (0, 1)");
  if (stall_threshold < 1) throw InvalidArgument("stall_threshold must be >= 1");
  if (!(domain_hi > domain_lo)) throw InvalidArgument("empty search domain");
}

template <class T>
FlatnessResidual<T> residual(const Vec4<T>& point, const Precision& p) {
  require_positive(point);
  const Word<T> word = construction_word(point);
  const TraceJet<T> f = trace_jet(word_jet(word, kResidualJetOrder), p);
  const auto partials = word_t_jacobian_jet(word, kResidualJetOrder);

  FlatnessResidual<T> r;
  r.point = point;
  r.a0 = f.a(0);
  for (std::size_t i = 0; i < 4; ++i) r.residual[i] = f.a(2 * static_cast<int>(i + 1));
  for (std::size_t j = 0; j < 4; ++j) {
    const TraceJet<T> d = trace_jet(partials[j], p);
    for (std::size_t i = 0; i < 4; ++i) r.jacobian[i][j] = d.a(2 * static_cast<int>(i + 1));
  }
  r.norm = norm2(r.residual);
  return r;
}

template <class T>
T residual_norm(const Vec4<T>& point, const Precision& p) {
  require_positive(point);
  const TraceJet<T> f = trace_jet(word_jet(construction_word(point), kResidualJetOrder), p);
  return norm2(Vec4<T>{f.a(2), f.a(4), f.a(6), f.a(8)});
}

SearchOutcome random_search(const SearchConfig& cfg, const ValidityConstraints& v) {
  cfg.validate();
  v.validate();
  const Precision p = Precision::hardware();
  CounterRng rng(cfg.seed, cfg.search_stream());
  SearchOutcome best;
  bool found = false;
  for (int s = 0; s < cfg.samples; ++s) {
    Vec4<double> t;
    for (auto& x : t) x = rng.uniform(cfg.domain_lo, cfg.domain_hi);
    if (!v.admits(t)) continue;
    ++best.valid_samples;
    const double n = residual_norm(t, p);
    if (!found || n < best.norm) {
      best.point = t;
      best.norm = n;
      found = true;
    }
  }
  if (!found) throw NoCandidateError("random search drew no sample satisfying the validity constraints");
  return best;
}

DescentOutcome stochastic_descent(const Vec4<double>& start, const SearchConfig& cfg, const ValidityConstraints& v) {
  cfg.validate();
  v.validate();
  if (!v.admits(start)) throw InvalidArgument("stochastic descent start violates the validity constraints");
  const Precision p = Precision::hardware();
  CounterRng rng(cfg.seed, cfg.descent_stream());

  DescentOutcome out;
  out.point = start;
  out.norm = residual_norm(start, p);
  out.accepted_norms.push_back(out.norm);
  out.evaluations = 1;
  double eta = cfg.eta0;
  int stall = 0;
  while (eta >= cfg.eta_min && out.evaluations < cfg.max_evaluations && out.norm > 0) {
    Vec4<double> trial = out.point;
    for (auto& x : trial) x += rng.uniform(-eta, eta);
    bool accepted = false;
    if (v.admits(trial)) {
      const double n = residual_norm(trial, p);
      ++out.evaluations;
      if (n < out.norm) {
        out.point = trial;
        out.norm = n;
        out.accepted_norms.push_back(n);
        accepted = true;
      }
    }
    if (accepted) {
      stall = 0;
    } else if (++stall >= cfg.stall_threshold) {
      eta *= cfg.shrink_factor;
      stall = 0;
    }
  }
  out.final_eta = eta;
  return out;
}

template <class T>
NewtonOutcome<T> newton_refine(const Vec4<T>& start, const Precision& p, const T& tol, int max_iter) {
  if (max_iter < 0) throw InvalidArgument("max_iter must be >= 0");
  NewtonOutcome<T> out;
  out.point = start;
  for (int it = 0;; ++it) {
    const FlatnessResidual<T> r = residual(out.point, p);
    out.norm = r.norm;
    out.norms.push_back(to_double(r.norm));
    if (r.norm <= tol) return out;
    if (it == max_iter) {
      throw NonConvergenceError("Newton did not reach tolerance in " + std::to_string(max_iter) +
                                " iterations (residual " + to_decimal_string(to_double(r.norm)) + ")");
    }
    const Vec4<T> sv = singular_values(r.jacobian);
    if (sv[0] == T(0) || to_double(sv[3] / sv[0]) > kMaxNewtonCondition) {
      throw ConditioningError("Jacobian is ill-conditioned at the Newton iterate");
    }
    const Vec4<T> step = solve(r.jacobian, r.residual);
    out.point = out.point - step;
    out.iterations = it + 1;
    for (const auto& x : out.point)
      if (!(x > T(0))) throw NonConvergenceError("Newton left the positive orthant");
  }
}

PipelineOutcome solve_pipeline(const SearchConfig& cfg, const ValidityConstraints& v, const Precision& p,
                               const HighReal& newton_tol, int newton_max_iter) {
  PipelineOutcome out;
  out.search = random_search(cfg, v);
  out.descent = stochastic_descent(out.search.point, cfg, v);
  PrecisionScope scope(p);
  Vec4<HighReal> start;
  for (std::size_t i = 0; i < 4; ++i) start[i] = HighReal(out.descent.point[i]);
  out.final_point = start;
  out.final_norm = HighReal(out.descent.norm);
  try {
    out.newton = newton_refine(start, p, HighReal(newton_tol), newton_max_iter);
    out.final_point = out.newton->point;
    out.final_norm = out.newton->norm;
    out.converged = true;
  } catch (const ConditioningError& e) {
    out.newton_error = e.what();
  } catch (const NonConvergenceError& e) {
    out.newton_error = e.what();
  }
  return out;
}

Vec4<double> paper_root_double() {
  Vec4<double> r;
  for (std::size_t i = 0; i < 4; ++i) r[i] = parse_real<double>(kPublishedRootDigits[i]);
  return r;
}

Vec4<HighReal> paper_root() {
  Vec4<HighReal> r;
  for (std::size_t i = 0; i < 4; ++i) r[i] = parse_real<HighReal>(kPublishedRootDigits[i]);
  return r;
}

template FlatnessResidual<double> residual(const Vec4<double>&, const Precision&);
template FlatnessResidual<HighReal> residual(const Vec4<HighReal>&, const Precision&);
template double residual_norm(const Vec4<double>&, const Precision&);
template HighReal residual_norm(const Vec4<HighReal>&, const Precision&);
template NewtonOutcome<double> newton_refine(const Vec4<double>&, const Precision&, const double&, int);
template NewtonOutcome<HighReal> newton_refine(const Vec4<HighReal>&, const Precision&, const HighReal&, int);

}  // namespace flatdirac
