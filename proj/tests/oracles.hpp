#pragma once

// Independent reference implementations used only by the tests. Each oracle
// takes a different algorithmic route than the library so a shared bug cannot
// hide: sorting instead of splitting, vertex enumeration instead of simplex
// pivots, LU normal equations instead of SVD, plain summation instead of
// expm1.

#include <Eigen/Dense>

namespace robust_sysid::oracles {

// Minimizer value of f(a) = sum_i |y_i - a z_i| over scalar a: the weighted
// median of the ratios y_i/z_i with weights |z_i| (entries with z_i = 0 add
// constants). Returns the objective at the optimum and, via argmin, the
// minimizing a.
double l1_scalar_objective(const Eigen::VectorXd& y, const Eigen::VectorXd& z,
                           double a);
double l1_scalar_argmin(const Eigen::VectorXd& y, const Eigen::VectorXd& z);

// min ||gamma||_inf s.t. basis gamma = target, by enumerating the vertices of
// the epigraph polytope in the (nullspace coefficients, t) chart: every
// vertex is the intersection of k+1 linearly independent active bound
// constraints, where k = nullity(basis). Exact for small k (cost grows like
// C(2q, k+1)).
struct InfNormOracle {
  bool feasible = false;
  double value = 0.0;
  double residual = 0.0;  // range-membership residual
};
InfNormOracle min_inf_norm_vertex(const Eigen::MatrixXd& basis,
                                  const Eigen::VectorXd& target);

// min c^T x s.t. A x = b, x >= 0 by enumerating all basic solutions (column
// subsets of size rank(A)). Bounded feasible problems only.
struct LpOracle {
  bool feasible = false;
  double value = 0.0;
  Eigen::VectorXd x;
};
LpOracle lp_basis_enumeration(const Eigen::MatrixXd& a,
                              const Eigen::VectorXd& b,
                              const Eigen::VectorXd& c);

// [A_hat, B_hat] = Y Z^T (Z Z^T)^-1 through LU on the normal equations (the
// library uses an SVD pseudoinverse).
Eigen::MatrixXd least_squares_theta(const Eigen::MatrixXd& y,
                                    const Eigen::MatrixXd& z);

// sum_{i<t} a^i by plain long-double accumulation.
double geometric_sum_direct(double a, int t);

}  // namespace robust_sysid::oracles
