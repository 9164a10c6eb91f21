// flatdirac: jets, root search, certification and dispersion analysis of
// piecewise-constant Dirac forcing words.
//
//   flatdirac jet        --config cfg.json [--compare-paper]
//   flatdirac solve      --config cfg.json --seed 7 --out root.json
//   flatdirac certify    --root root.json --radius 1e-3 --out cert.json
//   flatdirac dispersion --root paper-root --xi-max 1 --grid 201 --out theta.csv
//   flatdirac decay      --root paper-root --n-list 1000,3162,10000,31623,100000 --out decay.csv

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "flatdirac/commands.hpp"

namespace {

using namespace flatdirac;

struct Flags {
  std::string config;
  CommandOptions opt;
  std::uint64_t seed = 0;
  int precision_bits = 0;
  int order = 0;
  double bump_width = 0;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run configuration");
  sub->add_option("--seed", f.seed, "override the config seed");
  sub->add_option("--precision-bits", f.precision_bits, "working mantissa bits (53 selects hardware doubles)");
  sub->add_option("--order", f.order, "jet truncation order N");
  sub->add_option("--out", f.opt.out, "output path (stdout when omitted)");
  sub->add_option("--threads", f.opt.threads, "worker threads")->check(CLI::PositiveNumber);
}

void add_root(CLI::App* sub, Flags& f) {
  sub->add_option("--root", f.opt.root, "root JSON written by solve, or paper-root");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flat-dispersion Dirac forcing: jets, roots, certificates, decay"};
  app.require_subcommand(1);
  Flags f;

  auto* jet = app.add_subcommand("jet", "trace jet of the configured word");
  add_common(jet, f);
  jet->add_flag("--compare-paper", f.opt.compare_paper, "print computed vs published diagnostics");

  auto* solve = app.add_subcommand("solve", "random search, stochastic descent and Newton refinement");
  add_common(solve, f);
  solve->add_option("--init", f.opt.init, "start Newton at a known point (paper-root)");

  auto* certify = app.add_subcommand("certify", "Newton-Kantorovich certificate for a root");
  add_common(certify, f);
  add_root(certify, f);
  certify->add_option("--radius", f.opt.radius, "ball radius r in (0, 0.5]");
  certify->add_option("--strategy", f.opt.strategy, "Lipschitz bound: analytic or sampled");
  certify->add_flag("--compare-paper", f.opt.compare_paper, "print computed vs published diagnostics");

  auto* dispersion = app.add_subcommand("dispersion", "Floquet exponent profile and flatness order");
  add_common(dispersion, f);
  add_root(dispersion, f);
  dispersion->add_option("--xi-max", f.opt.xi_max, "grid half-width");
  dispersion->add_option("--grid", f.opt.grid, "number of grid points");

  auto* decay = app.add_subcommand("decay", "oscillatory amplitudes and decay-rate fit");
  add_common(decay, f);
  add_root(decay, f);
  decay->add_option("--n-list", f.opt.n_list, "strictly increasing period counts")->delimiter(',');
  decay->add_option("--bump-width", f.bump_width, "half-width of the frequency bump");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    for (auto* sub : {jet, solve, certify, dispersion, decay}) {
      if (sub->count("--seed")) f.opt.seed = f.seed;
      if (sub->count("--precision-bits")) f.opt.precision_bits = f.precision_bits;
      if (sub->count("--order")) f.opt.order = f.order;
    }
    if (decay->count("--bump-width")) f.opt.bump_width = f.bump_width;

    const RunConfig cfg = apply_overrides(f.config.empty() ? RunConfig{} : load_config(f.config), f.opt);
    CommandResult r;
    if (*jet)
      r = cmd_jet(cfg, f.opt);
    else if (*solve)
      r = cmd_solve(cfg, f.opt);
    else if (*certify)
      r = cmd_certify(cfg, f.opt);
    else if (*dispersion)
      r = cmd_dispersion(cfg, f.opt);
    else
      r = cmd_decay(cfg, f.opt);

    std::cout << emit_artifacts(r, f.opt.out);
    (f.opt.out.empty() ? std::cerr : std::cout) << r.report;
    return r.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "flatdirac: " << e.what() << "\n";
    return cli_exit_code(e);
  }
}
