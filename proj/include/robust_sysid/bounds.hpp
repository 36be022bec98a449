#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "robust_sysid/types.hpp"

namespace robust_sysid {

// Small-ball probability of the stacked state-input process under the
// block martingale small-ball condition; fixed, not configuration.
inline constexpr double kBmsbSmallBall = 1.0 / 12.0;

// Deterministic estimation-error bound with its ingredients exposed:
// bound = 2 (1+c)/(1-c) * noise_mass / sigma_min_data.
struct ErrorBound {
  double c = 0.0;
  double noise_mass = 0.0;      // ||D_{S^c}||_{2,col} of the true disturbances
  double sigma_min_data = 0.0;  // sigma_min of [X; U]
  double bound = 0.0;
};

// Requires c in (0,1), horizon > n+m, full-row-rank data, and ground-truth
// disturbances stored in the trajectory.
ErrorBound theorem2_bound(double c, const Trajectory& traj,
                          const IndexSet& s_set);

// Growth/decay constants of the closed- and open-loop dynamics.
struct EnvelopeConstants {
  double alpha_min = 0.0;  // min(sigma_min(A+P), sigma_min(A))
  double alpha_max = 0.0;  // max(sigma_max(A+P), sigma_max(A))
  double beta_max = 0.0;   // max(sigma_max(B+Q), sigma_max(B)); 0 when m = 0
  double epsilon = 0.0;
};

EnvelopeConstants envelope_constants(const SystemMatrices& sys,
                                     const AttackModel& model);

// Two-sided PSD envelope of the Gramians E[x_t x_t^T], t = 0..horizon-1:
//   lower_t = alpha_min^2 lower_{t-1} + eps^2 I
//   upper_t = alpha_max^2 upper_{t-1} + (eps^2 + beta_max^2) I
// with lower_0 = upper_0 = Gamma_0.
struct GramianEnvelope {
  EnvelopeConstants constants;
  Eigen::MatrixXd gamma0;
  std::vector<Eigen::MatrixXd> lower;
  std::vector<Eigen::MatrixXd> upper;

  // sum over i in idx of tr(upper_i), the Gramian part of C(I).
  double trace_upper_sum(const IndexSet& idx) const;
};

GramianEnvelope gramian_envelope(const EnvelopeConstants& consts,
                                 const Eigen::MatrixXd& gamma0, int horizon);

// Concentration quantities for a column subset I of the data matrix:
// C(I), the sigma_max threshold sqrt(C(I)/eta), the sigma_min floor
// min(eps,sigma) sqrt(k floor(|I|/k) p^2 / 16), and the two-sided tail
// eta + exp(-|I|p^2/(10k) + 2(m+n)log(10/p) + (m+n)/2 log(C(I)/(...eta^2))),
// all with p = 1/12 hard-wired.
struct Prop1Quantities {
  double c_of_i = 0.0;
  double sigma_max_threshold = 0.0;
  double sigma_min_threshold = 0.0;
  double tail_probability = 0.0;
};

Prop1Quantities prop1_quantities(const AttackModel& model,
                                 const SystemMatrices& sys,
                                 const Eigen::MatrixXd& gamma0,
                                 const IndexSet& idx, double eta, int k = 1);

// Simulated exceedance frequency of the sigma_max threshold over independent
// trajectories started at x0 = 0 (Gamma_0 = 0), with per-trial derived seeds.
struct McSigmaReport {
  double empirical_exceed_rate = 0.0;
  double threshold = 0.0;
  double eta = 0.0;
  int trials = 0;
  double binomial_slack = 0.0;  // 3 sqrt(eta(1-eta)/trials)
};

McSigmaReport monte_carlo_sigma_check(const AttackModel& model,
                                      const SystemMatrices& sys,
                                      const IndexSet& idx, double eta,
                                      int trials, std::uint64_t rng_seed);

}  // namespace robust_sysid
