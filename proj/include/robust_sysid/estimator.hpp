#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "robust_sysid/types.hpp"

namespace robust_sysid {

// Parameters of the operator-splitting solver.
struct SolverConfig {
  double penalty = 1.0;       // augmented-Lagrangian parameter, > 0
  int max_iters = 50000;      // >= 1
  double tol_abs = 1e-9;      // > 0
  double tol_rel = 1e-7;      // > 0
  bool adaptive_penalty = true;  // residual balancing (x2 / /2 at ratio 10)

  double ridge = 1e-12;       // Tikhonov term on the data Gramian factorization
  bool polish = true;         // support-restricted refit, kept only if the
                              // objective does not increase
  int checkpoint_every = 250; // objective recording cadence, in iterations
};

struct SolverDiagnostics {
  bool degenerate_data = false;      // directions annihilating the data exist
  bool uniqueness_unverified = true; // uniqueness is the certifier's job
  bool polished = false;
  double final_penalty = 0.0;
  // (iteration, best feasible objective seen so far); non-increasing by
  // construction, recorded for trend inspection.
  std::vector<std::pair<int, double>> checkpoints;
  // Final scaled dual iterate, reusable as a warm start on related data.
  // Empty when the splitting loop never ran (degenerate shortcut).
  Eigen::MatrixXd scaled_dual;
};

struct EstimationResult {
  SystemMatrices sys_hat;     // estimated (A, B)
  Eigen::MatrixXd d_hat;      // n x T, recomputed from the constraint so the
                              // equality x_{i+1} = A x_i + B u_i + d_i is exact
  double objective = 0.0;     // col_group_norm(d_hat), recomputed at return
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
  SolverDiagnostics diagnostics;
};

// Proximal map of tau * ||.||_2: scales v by max(0, 1 - tau/||v||_2).
// This is the per-column kernel of the solver's D-update.
Eigen::VectorXd block_soft_threshold(const Eigen::VectorXd& v, double tau);

// Minimizes sum_i ||x_{i+1} - A x_i - B u_i||_2 over (A, B), the
// disturbance-eliminated form of the sum-of-column-norms program.
//
// Algorithm contract: two-block operator splitting on Theta = [A, B] and D
// with the coupling constraint D = Y - Theta Z, Y = [x_1..x_T],
// Z = [X; U]. The Theta-update is a ridge-regularized least-squares solve
// against a factorization of Z Z^T cached across iterations; the D-update is
// columnwise block soft-thresholding with threshold 1/penalty; the scaled
// dual variable accumulates the constraint violation. Convergence is declared
// when primal and dual residuals fall below
// tol_abs * sqrt(count) + tol_rel * (scale of the iterates).
//
// Non-convergence within max_iters returns converged = false with the final
// residuals. Data admitting no unique answer (e.g. all states zero) returns
// A = 0, B = 0 with the degenerate_data diagnostic set.
EstimationResult solve_lasso(const Trajectory& traj, const SolverConfig& config);
EstimationResult solve_lasso(const Trajectory& traj);

// Initial iterates from a related solve (typically a shorter prefix of the
// same data): Theta seeds the first update, dual columns are kept up to the
// new horizon and missing ones start at zero. Either member may be empty.
struct WarmStart {
  Eigen::MatrixXd theta;  // n x (n+m) or empty
  Eigen::MatrixXd dual;   // n x T_prev scaled dual or empty
};
EstimationResult solve_lasso(const Trajectory& traj, const SolverConfig& config,
                             const WarmStart& warm);

// Ordinary least squares [A, B] = Y Z^T (Z Z^T)^-1 through the SVD of Z.
// Requires [X; U] to have full row rank (smallest singular value
// > 1e-10 * largest); rank deficiency is rejected with the computed gap.
SystemMatrices solve_least_squares(const Trajectory& traj);

// Frobenius distance between stacked [A, B] blocks of two systems.
double estimation_error(const SystemMatrices& estimate,
                        const SystemMatrices& truth);

}  // namespace robust_sysid
