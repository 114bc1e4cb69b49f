#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ssvm {

// ---------------------------------------------------------------------------
// Verification harnesses. The CLI exposes these as subcommands; the
// acceptance suite calls them directly so both report the same numbers.
// ---------------------------------------------------------------------------

struct GradCheckOptions {
  int trials = 120;
  std::uint64_t seed = 0;
  std::vector<int> hidden;    // empty: random 1-3 hidden layers, widths <= 64
  std::string act = "random"; // "tanh", "relu", or "random"
  double step = 1e-5;
  int coords = 80;            // parameter coordinates probed per trial
  double tol = 1e-5;

  void validate() const;
};

struct GradCheckReport {
  bool pass = false;
  double max_rel_err = 0.0;
  long long coords_checked = 0;
  long long coords_skipped = 0;  // relu kink crossings near the probe point
  int trials = 0;
};

// Compares analytic factor-network parameter gradients of the frozen-z
// structured objective against central finite differences on random models
// and samples. Logs a summary line; pass means every probed coordinate was
// within tol.
GradCheckReport run_gradcheck(const GradCheckOptions& opts, std::ostream& log);

struct InferCheckOptions {
  int trials = 200;  // per battery
  std::uint64_t seed = 0;
  int max_nodes = 10;
  int max_sweeps = 20;
  double gap_tol = 0.05;

  void validate() const;
};

struct InferCheckReport {
  bool pass = false;
  int binary_trials = 0;
  int binary_exact = 0;
  double mean_gap = 0.0;  // multi-label relative gap vs exhaustive search
  double max_gap = 0.0;
  int local_opt_violations = 0;
  int monotone_violations = 0;
};

// Battery 1: random submodular binary instances, expansion must match
// exhaustive minimization exactly. Battery 2: 3-label Potts-style instances,
// expansion must be single-move optimal with a monotone energy trace; the
// optimality gap is reported and compared against gap_tol.
InferCheckReport run_infercheck(const InferCheckOptions& opts,
                                std::ostream& log);

// Full command-line front end. Returns the process exit code:
// 0 success, 1 usage or config error, 2 data error, 3 verification failure.
int run_cli(int argc, const char* const* argv);

}  // namespace ssvm
