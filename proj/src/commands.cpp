#include "flatdirac/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "flatdirac/dispersion_analyzer.hpp"
#include "flatdirac/error.hpp"
#include "flatdirac/su2.hpp"

namespace flatdirac {

namespace {

constexpr double kFitLo = 1e-3;
constexpr double kFitHi = 1e-1;
constexpr int kFitPoints = 41;

struct PublishedValue {
  const char* name;
  double published;
};

constexpr PublishedValue kPublishedDiagnostics[] = {
    {"|grad a2|", 3.75},  {"|grad a4|", 10.33}, {"|grad a6|", 19.14}, {"|grad a8|", 41.82},
    {"det(normalized)", 0.413}, {"|DH|", 43.96}, {"|DH^-1|", 0.35}, {"|H|", 5.2e-15},
};

template <class T>
std::string compare_table(const GradientDiagnostics<T>& d) {
  const double computed[] = {to_double(d.gradient_norms[0]), to_double(d.gradient_norms[1]),
                             to_double(d.gradient_norms[2]), to_double(d.gradient_norms[3]),
                             to_double(d.normalized_determinant), to_double(d.jacobian_norm),
                             to_double(d.inverse_jacobian_norm), to_double(d.residual_norm)};
  std::string out = "quantity            computed        reported        rel.dev\n";
  char line[128];
  for (std::size_t i = 0; i < std::size(kPublishedDiagnostics); ++i) {
    const auto& pv = kPublishedDiagnostics[i];
    std::snprintf(line, sizeof line, "%-18s  %-14.6g  %-14.6g  %+.3e\n", pv.name, computed[i], pv.published,
                  (computed[i] - pv.published) / pv.published);
    out += line;
  }
  return out;
}

void require_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw InvalidArgument(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw InvalidArgument("unknown key '" + key + "' in " + where);
    }
  }
}

std::string real_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) return j.dump();
  throw InvalidArgument("expected a real number, got " + j.dump());
}

template <class T>
bool is_alternating4(const Word<T>& w) {
  return w.size() == 4 && w.letters()[0].sign == 1 && w.alternating();
}

template <class T>
Vec4<T> durations4(const Word<T>& w) {
  return {w.letters()[0].duration, w.letters()[1].duration, w.letters()[2].duration, w.letters()[3].duration};
}

template <class T>
Vec4<T> paper_root_as() {
  if constexpr (is_high_real_v<T>)
    return paper_root();
  else
    return paper_root_double();
}

template <class T>
Vec4<T> load_root(const std::string& root) {
  if (root == "paper-root") return paper_root_as<T>();
  const Json doc = Json::parse(read_file(root));
  const Json& point = doc.at("point");
  if (!point.is_array() || point.size() != 4) throw InvalidArgument("root file: 'point' must hold 4 reals");
  Vec4<T> x;
  for (std::size_t i = 0; i < 4; ++i) x[i] = json_real<T>(point[i]);
  return x;
}

template <class T>
Word<T> source_word(const RunConfig& cfg, const CommandOptions& opt) {
  if (!opt.root.empty()) return Word<T>::alternating4(load_root<T>(opt.root));
  return cfg.word.to_word<T>();
}

template <class T>
Json word_json(const Word<T>& w) {
  Json signs = Json::array();
  std::vector<T> d;
  for (const auto& l : w.letters()) {
    signs.push_back(l.sign);
    d.push_back(l.duration);
  }
  return Json{{"signs", signs}, {"durations", real_array(d)}};
}

template <class T>
T newton_tolerance(const RunConfig& cfg, const Precision& p) {
  const T requested = parse_real<T>(cfg.thresholds.newton_tol);
  return std::max(requested, T(1e3 * p.abs_tol()));
}

template <class T>
struct PreparedWord {
  Word<T> word;
  bool refined = false;
  int newton_iterations = 0;
};

// Alternating 4-letter words close to a flatness root are Newton-refined so
// the low θ derivatives vanish to working precision.
template <class T>
PreparedWord<T> prepare_word(const RunConfig& cfg, const CommandOptions& opt, const Precision& p) {
  PreparedWord<T> out{source_word<T>(cfg, opt)};
  if (!is_alternating4(out.word)) return out;
  const Vec4<T> t = durations4(out.word);
  if (!(residual_norm(t, p) <= T(cfg.thresholds.refine_gate))) return out;
  const NewtonOutcome<T> n = newton_refine(t, p, newton_tolerance<T>(cfg, p), cfg.thresholds.newton_max_iter);
  out.word = Word<T>::alternating4(n.point);
  out.refined = true;
  out.newton_iterations = n.iterations;
  return out;
}

template <class T>
CommandResult jet_impl(const RunConfig& cfg, const CommandOptions& opt) {
  const Precision p = cfg.precision();
  const Word<T> w = cfg.word.to_word<T>();
  const TraceJet<T> tj = trace_jet(word_jet(w, cfg.order), p);
  CommandResult r;
  Json doc{{"a", real_array(tj.even)},
           {"odd_residual_max", real_json(tj.odd_residual_max)},
           {"imag_residual_max", real_json(tj.imag_residual_max)},
           {"order", cfg.order},
           {"precision_bits", p.mantissa_bits},
           {"word", word_json(w)}};
  r.artifacts["json"] = canonical_json(doc);
  if (opt.compare_paper) {
    if (!is_alternating4(w)) throw InvalidArgument("--compare-paper needs an alternating 4-letter word");
    r.report = compare_table(gradient_diagnostics(durations4(w), p));
  }
  return r;
}

struct StageResult {
  SearchOutcome search;
  DescentOutcome descent;
};

std::vector<StageResult> run_restarts(const RunConfig& cfg, int threads) {
  std::vector<StageResult> results(static_cast<std::size_t>(cfg.restarts));
  auto work = [&](int first, int stride) {
    for (int k = first; k < cfg.restarts; k += stride) {
      SearchConfig sc;
      sc.seed = cfg.seed;
      sc.restart = static_cast<std::uint64_t>(k);
      StageResult& s = results[static_cast<std::size_t>(k)];
      s.search = random_search(sc, cfg.validity);
      s.descent = stochastic_descent(s.search.point, sc, cfg.validity);
    }
  };
  const int n = std::max(1, std::min(threads, cfg.restarts));
  if (n == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
      pool.emplace_back([&, t] {
        try {
          work(t, n);
        } catch (...) {
          errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return results;
}

template <class T>
CommandResult solve_impl(const RunConfig& cfg, const CommandOptions& opt) {
  const Precision p = cfg.precision();
  const T tol = newton_tolerance<T>(cfg, p);
  Json log = Json::array();
  Vec4<T> best_point{};
  T best_norm(-1);

  auto consider = [&](const Vec4<T>& point, const T& norm) {
    if (best_norm < T(0) || norm < best_norm) {
      best_point = point;
      best_norm = norm;
    }
  };
  auto newton_stage = [&](const Vec4<T>& start, Json& entry) {
    try {
      const NewtonOutcome<T> n = newton_refine(start, p, tol, cfg.thresholds.newton_max_iter);
      entry["newton_iterations"] = n.iterations;
      entry["newton_norms"] = real_array(n.norms);
      entry["newton_norm"] = real_json(n.norm);
      consider(n.point, n.norm);
    } catch (const ConditioningError& e) {
      entry["newton_error"] = e.what();
    } catch (const NonConvergenceError& e) {
      entry["newton_error"] = e.what();
    }
  };

  if (opt.init == "paper-root") {
    const Vec4<T> start = paper_root_as<T>();
    Json entry{{"init", "paper-root"}, {"start_norm", real_json(residual_norm(start, p))}};
    consider(start, residual_norm(start, p));
    newton_stage(start, entry);
    log.push_back(entry);
  } else if (!opt.init.empty()) {
    throw InvalidArgument("unknown --init value '" + opt.init + "'");
  } else {
    const auto stages = run_restarts(cfg, opt.threads);
    for (std::size_t k = 0; k < stages.size(); ++k) {
      const auto& s = stages[k];
      Json entry{{"restart", k},
                 {"search_norm", real_json(s.search.norm)},
                 {"valid_samples", s.search.valid_samples},
                 {"descent_norm", real_json(s.descent.norm)},
                 {"descent_evaluations", s.descent.evaluations},
                 {"descent_accepted", s.descent.accepted_norms.size()},
                 {"final_eta", real_json(s.descent.final_eta)}};
      Vec4<T> start;
      for (std::size_t i = 0; i < 4; ++i) start[i] = T(s.descent.point[i]);
      consider(start, T(s.descent.norm));
      newton_stage(start, entry);
      log.push_back(entry);
    }
  }

  Json orbit = Json::array();
  for (const auto& q : symmetry_orbit(best_point)) orbit.push_back(real_array(q));
  Json doc{{"point", real_array(best_point)},
           {"residual_norm", real_json(best_norm)},
           {"orbit", orbit},
           {"seed", cfg.seed},
           {"precision_bits", p.mantissa_bits},
           {"stage_log", log}};
  CommandResult r;
  r.artifacts["json"] = canonical_json(doc);
  r.exit_code = best_norm <= T(cfg.thresholds.solve_residual) ? kExitOk : kExitMathFailure;
  r.report = "residual_norm " + to_decimal_string(to_double(best_norm)) + "\n";
  return r;
}

template <class T>
CommandResult certify_impl(const RunConfig& cfg, const CommandOptions& opt) {
  const Precision p = cfg.precision();
  const T radius = parse_real<T>(opt.radius);
  const LipschitzStrategy strategy = parse_strategy(opt.strategy);
  const Word<T> w = source_word<T>(cfg, opt);
  if (!is_alternating4(w)) throw InvalidArgument("certify needs an alternating 4-letter word (+,-,+,-)");
  const Vec4<T> x0 = durations4(w);
  const Certificate<T> c = certify(x0, radius, strategy, p, cfg.seed);
  Json doc{{"x0", real_array(c.x0)},
           {"residual_norm", real_json(c.residual_norm)},
           {"inverse_jacobian_norm", real_json(c.inverse_jacobian_norm)},
           {"alpha", real_json(c.alpha)},
           {"omega_bar", real_json(c.omega_bar)},
           {"radius", real_json(c.radius)},
           {"alpha_omega", real_json(c.alpha_omega)},
           {"radius_lhs", real_json(c.radius_lhs)},
           {"radius_threshold", real_json(c.radius_threshold)},
           {"conditions",
            {{"alpha_bound", c.alpha_bound},
             {"lipschitz_valid", c.lipschitz_valid},
             {"product_condition", c.product_condition},
             {"radius_condition", c.radius_condition}}},
           {"strategy", to_string(c.strategy)},
           {"precision_bits", c.precision_bits},
           {"verdict", c.verdict}};
  CommandResult r;
  r.artifacts["json"] = canonical_json(doc);
  r.exit_code = c.verdict ? kExitOk : kExitMathFailure;
  r.report = std::string("verdict ") + (c.verdict ? "certified" : "not certified") + "\n";
  if (opt.compare_paper) r.report += compare_table(gradient_diagnostics(x0, p));
  return r;
}

template <class T>
T flatness_tolerance(const RunConfig& cfg, const Precision& p) {
  return T(cfg.thresholds.flatness_tol.value_or(default_flatness_tol(p)));
}

template <class T>
CommandResult dispersion_impl(const RunConfig& cfg, const CommandOptions& opt) {
  const Precision p = cfg.precision();
  const PreparedWord<T> pw = prepare_word<T>(cfg, opt, p);
  const DispersionProfile<T> prof = dispersion_profile(pw.word, cfg.order, p, flatness_tolerance<T>(cfg, p));
  const auto grid = theta_grid(pw.word, T(opt.xi_max), opt.grid, p);
  const T exponent = flatness_exponent_fit(pw.word, T(kFitLo), T(kFitHi), kFitPoints, p);

  CsvTable csv({"xi", "theta", "F"});
  for (const auto& g : grid) csv.add_row({to_decimal_string(g.xi), to_decimal_string(g.theta), to_decimal_string(g.F)});

  std::vector<T> derivs;
  T factorial(1);
  for (int j = 0; j <= prof.theta.order(); ++j) {
    if (j > 0) factorial *= T(j);
    derivs.push_back(factorial * prof.theta[j].re);
  }
  Json side{{"theta0", real_json(prof.theta0)},
            {"k", prof.flatness_order},
            {"theta_k0", real_json(prof.leading_derivative)},
            {"s0", real_json(prof.group_velocity)},
            {"theta_derivatives", real_array(derivs)},
            {"flatness_exponent", real_json(to_double(exponent))},
            {"flatness_fit_range", real_array(std::vector<double>{kFitLo, kFitHi})},
            {"refined", pw.refined},
            {"newton_iterations", pw.newton_iterations},
            {"order", cfg.order},
            {"precision_bits", p.mantissa_bits},
            {"word", word_json(pw.word)}};
  CommandResult r;
  r.artifacts["csv"] = csv.str();
  r.artifacts["json"] = canonical_json(side);
  r.report = "k " + std::to_string(prof.flatness_order) + "\n";
  return r;
}

template <class T>
CommandResult decay_impl(const RunConfig& cfg, const CommandOptions& opt) {
  const Precision p = cfg.precision();
  if (opt.n_list.size() < 5) throw InvalidArgument("--n-list needs at least 5 entries");
  for (std::size_t i = 0; i < opt.n_list.size(); ++i) {
    if (opt.n_list[i] < 1) throw InvalidArgument("--n-list entries must be positive");
    if (i > 0 && opt.n_list[i] <= opt.n_list[i - 1]) throw InvalidArgument("--n-list must be strictly increasing");
  }
  const PreparedWord<T> pw = prepare_word<T>(cfg, opt, p);
  const DispersionProfile<T> prof = dispersion_profile(pw.word, cfg.order, p, flatness_tolerance<T>(cfg, p));
  const Word<double> wd = pw.word.template cast<double>();

  BumpProfile bump;
  bump.half_width = opt.bump_width.value_or(default_bump_width(wd));
  if (!(bump.half_width > 0)) throw InvalidArgument("--bump-width must be positive");

  const int k = prof.flatness_order;
  const double theta_k = to_double(prof.leading_derivative);
  const double theta0 = to_double(prof.theta0);
  CsvTable csv({"n", "amplitude_plus", "amplitude_minus", "prediction"});
  std::vector<std::pair<long, double>> samples;
  double last_ratio = 0;
  long max_panels = 0;
  for (long n : opt.n_list) {
    const AmplitudePair a = oscillatory_amplitude(wd, bump, n, 0.0, opt.threads);
    max_panels = std::max(max_panels, a.panels);
    std::string pred;
    if (k % 2 == 0) {
      const double pv = abs(stationary_phase_prediction(k, theta_k, Complex<double>(bump.value(0.0)), theta0, n));
      pred = to_decimal_string(pv);
      last_ratio = abs(a.plus) / pv;
    }
    csv.add_row({std::to_string(n), to_decimal_string(abs(a.plus)), to_decimal_string(abs(a.minus)), pred});
    samples.emplace_back(n, abs(a.plus));
  }
  const DecayFitResult fit = decay_fit(samples);
  Json side{{"slope", real_json(fit.slope)},
            {"intercept", real_json(fit.intercept)},
            {"r2", real_json(fit.r_squared)},
            {"bump_width", real_json(bump.half_width)},
            {"k", k},
            {"theta_k0", real_json(prof.leading_derivative)},
            {"theta0", real_json(prof.theta0)},
            {"max_panels", max_panels},
            {"refined", pw.refined},
            {"precision_bits", p.mantissa_bits}};
  if (k % 2 == 0)
    side["prediction_ratio_at_max_n"] = real_json(last_ratio);
  else
    side["prediction_ratio_at_max_n"] = nullptr;
  CommandResult r;
  r.artifacts["csv"] = csv.str();
  r.artifacts["json"] = canonical_json(side);
  r.report = "slope " + to_decimal_string(fit.slope) + "\n";
  return r;
}

#define FLATDIRAC_DISPATCH(impl)                                  \
  cfg.validate();                                                 \
  const Precision p = cfg.precision();                            \
  PrecisionScope scope(p);                                        \
  return p.is_hardware() ? impl<double>(cfg, opt) : impl<HighReal>(cfg, opt);

}  // namespace

int cli_exit_code(const std::exception& e) {
  if (dynamic_cast<const InvalidArgument*>(&e)) return kExitInvalidInput;
  if (dynamic_cast<const ConsistencyError*>(&e)) return kExitConsistency;
  if (dynamic_cast<const IndeterminateOrderError*>(&e)) return kExitConsistency;
  if (dynamic_cast<const Error*>(&e)) return kExitMathFailure;
  return kExitInvalidInput;
}

template <class T>
Word<T> WordConfig::to_word() const {
  if (paper_root) return Word<T>::alternating4(paper_root_as<T>());
  std::vector<T> d;
  for (const auto& s : durations) d.push_back(parse_real<T>(s));
  return Word<T>(signs, std::move(d));
}

template Word<double> WordConfig::to_word<double>() const;
template Word<HighReal> WordConfig::to_word<HighReal>() const;

void RunConfig::validate() const {
  if (order < 1 || order > 256) throw InvalidArgument("order must lie in [1, 256]");
  if (precision_bits < 53 || precision_bits > 8192) throw InvalidArgument("precision_bits must lie in [53, 8192]");
  if (restarts < 1) throw InvalidArgument("restarts must be >= 1");
  if (thresholds.newton_max_iter < 0) throw InvalidArgument("newton_max_iter must be >= 0");
  if (!word.paper_root) {
    if (word.signs.empty() || word.signs.size() != word.durations.size())
      throw InvalidArgument("word: signs and durations must be non-empty and of equal length");
  }
  validity.validate();
}

RunConfig parse_config(const Json& doc) {
  require_keys(doc, {"word", "order", "precision_bits", "seed", "restarts", "validity", "thresholds"}, "config");
  RunConfig cfg;
  if (doc.contains("word")) {
    const Json& w = doc["word"];
    if (w.is_string()) {
      if (w.get<std::string>() != "paper-root") throw InvalidArgument("unknown word alias '" + w.get<std::string>() + "'");
      cfg.word = WordConfig{true, {}, {}};
    } else {
      require_keys(w, {"signs", "durations"}, "word");
      WordConfig wc;
      for (const auto& s : w.at("signs")) wc.signs.push_back(s.get<int>());
      for (const auto& d : w.at("durations")) wc.durations.push_back(real_text(d));
      cfg.word = std::move(wc);
    }
  }
  if (doc.contains("order")) cfg.order = doc["order"].get<int>();
  if (doc.contains("precision_bits")) cfg.precision_bits = doc["precision_bits"].get<int>();
  if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("restarts")) cfg.restarts = doc["restarts"].get<int>();
  if (doc.contains("validity")) {
    const Json& v = doc["validity"];
    require_keys(v, {"min_duration", "min_abs_alt_sum"}, "validity");
    if (v.contains("min_duration")) cfg.validity.min_duration = json_real<double>(v["min_duration"]);
    if (v.contains("min_abs_alt_sum")) cfg.validity.min_abs_alt_sum = json_real<double>(v["min_abs_alt_sum"]);
  }
  if (doc.contains("thresholds")) {
    const Json& t = doc["thresholds"];
    require_keys(t, {"solve_residual", "newton_tol", "newton_max_iter", "flatness_tol", "refine_gate"}, "thresholds");
    if (t.contains("solve_residual")) cfg.thresholds.solve_residual = json_real<double>(t["solve_residual"]);
    if (t.contains("newton_tol")) cfg.thresholds.newton_tol = real_text(t["newton_tol"]);
    if (t.contains("newton_max_iter")) cfg.thresholds.newton_max_iter = t["newton_max_iter"].get<int>();
    if (t.contains("flatness_tol")) cfg.thresholds.flatness_tol = json_real<double>(t["flatness_tol"]);
    if (t.contains("refine_gate")) cfg.thresholds.refine_gate = json_real<double>(t["refine_gate"]);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  Json doc;
  try {
    doc = Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    throw InvalidArgument("config '" + path + "': " + e.what());
  }
  try {
    return parse_config(doc);
  } catch (const Json::exception& e) {
    throw InvalidArgument("config '" + path + "': " + e.what());
  }
}

RunConfig apply_overrides(RunConfig cfg, const CommandOptions& opt) {
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.precision_bits) cfg.precision_bits = *opt.precision_bits;
  if (opt.order) cfg.order = *opt.order;
  if (opt.threads < 1) throw InvalidArgument("--threads must be >= 1");
  if (opt.grid < 2) throw InvalidArgument("--grid must be >= 2");
  if (!(opt.xi_max > 0)) throw InvalidArgument("--xi-max must be positive");
  cfg.validate();
  return cfg;
}

CommandResult cmd_jet(const RunConfig& cfg, const CommandOptions& opt) { FLATDIRAC_DISPATCH(jet_impl) }
CommandResult cmd_solve(const RunConfig& cfg, const CommandOptions& opt) { FLATDIRAC_DISPATCH(solve_impl) }
CommandResult cmd_certify(const RunConfig& cfg, const CommandOptions& opt) { FLATDIRAC_DISPATCH(certify_impl) }
CommandResult cmd_dispersion(const RunConfig& cfg, const CommandOptions& opt) { FLATDIRAC_DISPATCH(dispersion_impl) }
CommandResult cmd_decay(const RunConfig& cfg, const CommandOptions& opt) { FLATDIRAC_DISPATCH(decay_impl) }

#undef FLATDIRAC_DISPATCH

std::string sidecar_path(const std::string& out) {
  const auto slash = out.find_last_of('/');
  const auto dot = out.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return out + ".json";
  return out.substr(0, dot) + ".json";
}

std::string emit_artifacts(const CommandResult& r, const std::string& out) {
  const bool has_csv = r.artifacts.count("csv") > 0;
  if (out.empty()) {
    std::string s;
    if (has_csv) s += r.artifacts.at("csv");
    if (r.artifacts.count("json")) s += r.artifacts.at("json");
    return s;
  }
  if (has_csv) {
    write_file_atomic(out, r.artifacts.at("csv"));
    if (r.artifacts.count("json")) write_file_atomic(sidecar_path(out), r.artifacts.at("json"));
  } else if (r.artifacts.count("json")) {
    write_file_atomic(out, r.artifacts.at("json"));
  }
  return {};
}

}  // namespace flatdirac
