#pragma once

// Batch commands behind the flatdirac executable. Each command is a pure
// function of (RunConfig, CommandOptions) returning the artifacts it would
// write, so the same code runs in-process from tests.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flatdirac/canonical_io.hpp"
#include "flatdirac/flatness_solver.hpp"
#include "flatdirac/nk_certifier.hpp"
#include "flatdirac/su2.hpp"

namespace flatdirac {

enum ExitCode : int {
  kExitOk = 0,
  kExitMathFailure = 1,
  kExitInvalidInput = 2,
  kExitConsistency = 3,
};

// 2 for InvalidArgument, 3 for ConsistencyError and IndeterminateOrderError,
// 1 for the remaining Error kinds; anything else is treated as invalid input.
int cli_exit_code(const std::exception& e);

struct WordConfig {
  bool paper_root = false;
  std::vector<int> signs;
  std::vector<std::string> durations;  // decimal text, parsed at the working precision

  template <class T>
  Word<T> to_word() const;
};

struct Thresholds {
  double solve_residual = 1e-12;  // cmd_solve success
  std::string newton_tol = "1e-60";
  int newton_max_iter = 20;
  std::optional<double> flatness_tol;  // default_flatness_tol when unset
  double refine_gate = 1e-8;           // 4-letter words this close to a root are refined first
};

struct RunConfig {
  WordConfig word{true, {}, {}};
  int order = 12;
  int precision_bits = 256;
  std::uint64_t seed = 1;
  int restarts = 1;
  ValidityConstraints validity;
  Thresholds thresholds;

  Precision precision() const { return Precision{precision_bits}; }
  void validate() const;
};

RunConfig parse_config(const Json& doc);
RunConfig load_config(const std::string& path);

struct CommandOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> precision_bits;
  std::optional<int> order;
  std::string radius = "1e-3";
  double xi_max = 1.0;
  int grid = 201;
  std::vector<long> n_list{1000, 3162, 10000, 31623, 100000};
  std::optional<double> bump_width;
  int threads = 1;
  bool compare_paper = false;
  std::string root;  // root JSON path or "paper-root"; empty selects the config word
  std::string init;  // "paper-root" starts cmd_solve at the published root
  std::string strategy = "analytic";
  std::string out;   // primary artifact; sidecars replace the extension with .json
};

// Flags override the config.
RunConfig apply_overrides(RunConfig cfg, const CommandOptions& opt);

struct CommandResult {
  int exit_code = kExitOk;
  std::map<std::string, std::string> artifacts;  // role -> content ("json", "csv")
  std::string report;                             // human-readable stdout text
};

CommandResult cmd_jet(const RunConfig& cfg, const CommandOptions& opt);
CommandResult cmd_solve(const RunConfig& cfg, const CommandOptions& opt);
CommandResult cmd_certify(const RunConfig& cfg, const CommandOptions& opt);
CommandResult cmd_dispersion(const RunConfig& cfg, const CommandOptions& opt);
CommandResult cmd_decay(const RunConfig& cfg, const CommandOptions& opt);

// Sidecar path: extension of `out` replaced by .json (appended if none).
std::string sidecar_path(const std::string& out);

// Writes artifacts per the --out convention; with no --out the primary
// artifact goes to the returned string instead.
std::string emit_artifacts(const CommandResult& r, const std::string& out);

}  // namespace flatdirac
