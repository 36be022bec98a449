#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robust_sysid/certifier.hpp"
#include "robust_sysid/types.hpp"

namespace robust_sysid {

// Knobs of the randomized identification experiments. The defaults are the
// reference setup: autonomous 10-state system over 200 steps, attacks at
// rate 0.3 with N(0, 100 I) values, 20 seeds.
struct ExperimentConfig {
  int n = 10;
  int m = 0;                       // 0 = autonomous
  int horizon = 200;
  double attack_probability = 0.3;
  double attack_scale = 10.0;      // std dev of attack entries
  bool noise_on = false;           // N(0, I) disturbance noise off the support
  int trials = 20;
  std::uint64_t rng_seed = 0;
  std::string eigenvalue_law = "uniform01";
  int grid_step = 5;               // prefix-length stride of the error curve

  void validate() const;  // throws on out-of-range fields
};

// A = P Lambda P^-1 with Lambda diagonal ~ U(0,1) and P standard Gaussian,
// redrawn (up to 10 times) while cond(P) > 1e6. Spectral radius < 1 by
// construction. Fixed seed gives identical matrices.
SystemMatrices generate_random_system(int n, std::uint64_t rng_seed);

// One fully realized trial of a config: system, simulated run and the attack
// support that was drawn. The trajectory keeps the true disturbances.
struct ExperimentInstance {
  SystemMatrices sys;
  Trajectory traj;
  IndexSet support;
};

// Deterministic function of (config, trial): derived seeds feed the system
// draw, the input channel and the data draw separately, so e.g. changing the
// horizon leaves the system of each trial unchanged.
ExperimentInstance make_instance(const ExperimentConfig& config, int trial);

// One record per (trial, prefix length, method).
struct ErrorCurveRow {
  int trial = 0;
  int t = 0;
  std::string method;       // "lasso" | "least_squares"
  double err_fro = 0.0;     // ||[A_hat - A, B_hat - B]||_F
  double objective = 0.0;   // sum-of-column-norms at the estimate
  bool converged = false;
  std::uint64_t seed = 0;
};

// Estimation error of both methods on prefixes t = n+m+1, +grid_step, ..,
// horizon (the horizon itself always included). Rows come back sorted by
// (trial, t, method); solver failures are recorded in `converged` and as NaN
// errors, never aborting the sweep. Trials run in parallel; within one trial
// the splitting solver is warm-started from the previous prefix.
std::vector<ErrorCurveRow> run_error_curve(const ExperimentConfig& config);

// One record per (trial, attack-set size).
struct CertificationRow {
  int trial = 0;
  int s_size = 0;
  int horizon = 0;
  std::string method;       // winning method, "none", or "error"
  bool certified = false;
  double c_achieved = 0.0;  // NaN when no constant was certified
  std::uint64_t seed = 0;
};

// For each requested |S|: draw S uniformly, simulate with attacks on S, run
// the certifier verdict. Defaults to the singular-value test only; the xi
// programs are opt-in through `options` (their LP budget grows quickly with
// the horizon). Per-trial failures become method = "error" rows.
std::vector<CertificationRow> run_certification_sweep(
    const ExperimentConfig& config, const std::vector<int>& s_sizes,
    const NspOptions& options = NspOptions{true, false, 1000000});

}  // namespace robust_sysid
