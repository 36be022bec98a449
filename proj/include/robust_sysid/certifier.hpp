#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "robust_sysid/types.hpp"

namespace robust_sysid {

// Outcome of one recovery-certification check. A report can be
//   * inapplicable: the method's hypotheses do not hold for this data,
//   * applicable but not certified: the sufficient condition failed, which
//     says nothing about recovery (the conditions are one-directional),
//   * certified: c_achieved is the infimum of constants the method can
//     certify; recovery_certified additionally requires the constant-1
//     guarantee that makes the ground truth the unique program solution.
struct CertificateReport {
  std::string method;  // "singular_value" | "xi_s" | "xi_1"
  std::optional<double> c_achieved;
  std::optional<double> xi_value;
  bool applicable = true;
  bool certified = false;           // condition held at the requested constant
  bool recovery_certified = false;  // unique-recovery guarantee
  std::map<std::string, double> details;
  std::vector<std::string> inapplicable_reasons;
};

// Feasible decomposition V_I = V_{not in I} Gamma_I found by the inner
// minimization, with its summed max-norm amplitude.
struct DecompositionWitness {
  IndexSet index_set;
  Eigen::MatrixXd gamma;  // (T - s) x s, column order follows index_set
  double amplitude = 0.0; // sum over columns of ||gamma_k||_inf
};

struct MinInfNormResult {
  bool feasible = false;
  Eigen::VectorXd gamma;
  double value = 0.0;     // ||gamma||_inf at the optimum
  double residual = 0.0;  // least-squares range-membership residual
};

// Chebyshev-norm minimizer: argmin ||gamma||_inf subject to
// basis * gamma = target, via the linear program
//   minimize t  s.t.  basis * gamma = target, -t <= gamma_j <= t,
// solved in standard form over (gamma+, gamma-, slack, t). Targets outside
// the range of the basis (least-squares residual > 1e-8 * max(1, ||target||))
// are reported as infeasible together with the residual.
MinInfNormResult min_inf_norm_solve(const Eigen::MatrixXd& basis,
                                    const Eigen::VectorXd& target);

// Self-decomposability amplitude of the stacked data matrix.
struct XiResult {
  bool decomposable = false;
  double value = 0.0;  // xi_s, valid when decomposable
  std::vector<DecompositionWitness> witnesses;
  // On failure: the subset and source column at which decomposition broke,
  // and the range-check residual there.
  std::optional<IndexSet> failed_set;
  int failed_column = -1;
  double failed_residual = 0.0;
};

// xi_1: every column expressed through the remaining ones; one witness per
// column, value = max of the per-column optima.
XiResult xi_1(const Trajectory& traj);

// xi_s: exact outer maximization over all index sets of size s (refused
// beyond subset_cap, which keeps the answer sound rather than sampling a
// lower bound). The witness of the maximizing subset is returned; s = 1
// delegates to xi_1.
XiResult xi_s(const Trajectory& traj, int s, long long subset_cap = 1000000);

// Counts C(T, s) with saturation, for the cap check.
long long subset_count(int horizon, int s, long long cap);

enum class XiMode { xi_s, xi_1 };

// Lemma-based certificates from the amplitudes: mode xi_s certifies every
// c > xi_{|S|}; mode xi_1 certifies every c > |S| xi_1 / (1 - (|S|-1) xi_1)
// provided |S| > 1 and xi_1 <= 1/(|S|-1), with unique recovery once
// xi_1 < 1/(2|S|-1).
CertificateReport certify_via_xi(const Trajectory& traj, const IndexSet& s_set,
                                 XiMode mode, long long subset_cap = 1000000);

// Singular-value sufficient condition: certifies (c, S)-NSP when
// sqrt(|S|) sigma_max([X_S; U_S]) < c sigma_min([X_Sc; U_Sc]). Requires
// |S^c| >= n + m; smaller complements are reported inapplicable, which is
// distinct from a failed check.
CertificateReport check_singular_value_nsp(const Trajectory& traj,
                                           const IndexSet& s_set, double c);

struct NspOptions {
  bool run_singular_value = true;
  bool run_xi = true;
  long long subset_cap = 1000000;
};

// Every method's report, in the order singular_value, xi_s, xi_1.
std::vector<CertificateReport> nsp_all_methods(const Trajectory& traj,
                                               const IndexSet& s_set,
                                               const NspOptions& options = {});

// Strongest verdict across the methods (smallest certified constant).
// "Not certified" is inconclusive, never a disproof.
CertificateReport nsp_verdict(const Trajectory& traj, const IndexSet& s_set,
                              const NspOptions& options = {});

}  // namespace robust_sysid
