#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "robust_sysid/types.hpp"

namespace robust_sysid {

// Rolls x_{t+1} = A x_t + B u_t + d_t forward from x0 for T steps, where T is
// the number of input columns. The given disturbances are stored on the
// returned trajectory. Dimension mismatches are rejected with a diagnostic
// naming the offending block.
Trajectory simulate(const SystemMatrices& sys, const Eigen::VectorXd& x0,
                    const Eigen::MatrixXd& inputs,
                    const Eigen::MatrixXd& disturbances);

// Draws inputs u_t ~ N(0, sigma^2 I_m) i.i.d., then rolls the system forward
// with d_t = eps * g_t for t outside the attack support and
// d_t = P x_t + Q u_t + eps * g_t on it (g_t standard normal, independent of
// the past). Identical seeds yield bit-identical trajectories: all inputs are
// drawn first (column by column), then one n-vector of disturbance noise per
// step in time order.
Trajectory sample_attack_disturbances(const AttackModel& model,
                                      const SystemMatrices& sys,
                                      const Eigen::VectorXd& x0,
                                      std::uint64_t rng_seed);

}  // namespace robust_sysid
