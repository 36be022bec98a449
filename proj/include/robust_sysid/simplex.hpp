#pragma once

#include <Eigen/Dense>

namespace robust_sysid {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd x;       // primal solution in the original variable order
  double objective = 0.0;  // c^T x at the optimum
  int iterations = 0;
};

// Minimize c^T x subject to A x = b, x >= 0.
//
// Dense two-phase tableau simplex. Pricing is Dantzig (most negative reduced
// cost) until the objective stalls on degenerate pivots, after which Bland's
// smallest-index rule takes over so the method cannot cycle. Reduced costs
// are compared against a 1e-10 tolerance. Rows are equilibrated to unit
// infinity norm before solving.
//
// max_iters = 0 picks a bound proportional to the problem size.
LpResult solve_standard_form_lp(const Eigen::MatrixXd& a,
                                const Eigen::VectorXd& b,
                                const Eigen::VectorXd& c, int max_iters = 0);

}  // namespace robust_sysid
