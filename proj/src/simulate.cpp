#include "robust_sysid/simulate.hpp"

#include <stdexcept>
#include <string>

namespace robust_sysid {

Trajectory simulate(const SystemMatrices& sys, const Eigen::VectorXd& x0,
                    const Eigen::MatrixXd& inputs,
                    const Eigen::MatrixXd& disturbances) {
  const int n = sys.state_dim();
  const int m = sys.input_dim();
  if (x0.size() != n) {
    throw std::invalid_argument("x0 has dimension " + std::to_string(x0.size()) +
                                ", expected " + std::to_string(n));
  }
  if (inputs.rows() != m) {
    throw std::invalid_argument("input block has " + std::to_string(inputs.rows()) +
                                " rows, expected " + std::to_string(m));
  }
  const auto t_end = inputs.cols();
  if (t_end < 1) throw std::invalid_argument("need horizon T >= 1");
  if (disturbances.rows() != n || disturbances.cols() != t_end) {
    throw std::invalid_argument(
        "disturbance block is " + std::to_string(disturbances.rows()) + "x" +
        std::to_string(disturbances.cols()) + ", expected " + std::to_string(n) +
        "x" + std::to_string(t_end));
  }

  Eigen::MatrixXd states(n, t_end + 1);
  states.col(0) = x0;
  for (Eigen::Index t = 0; t < t_end; ++t) {
    states.col(t + 1) =
        sys.a * states.col(t) + sys.b * inputs.col(t) + disturbances.col(t);
  }
  return Trajectory(std::move(states), inputs, disturbances);
}

Trajectory sample_attack_disturbances(const AttackModel& model,
                                      const SystemMatrices& sys,
                                      const Eigen::VectorXd& x0,
                                      std::uint64_t rng_seed) {
  const int n = sys.state_dim();
  const int m = sys.input_dim();
  const int t_end = model.support.horizon();
  if (model.p_mat.rows() != n) {
    throw std::invalid_argument("attack model P is " +
                                std::to_string(model.p_mat.rows()) +
                                "-dimensional, system has n = " + std::to_string(n));
  }
  if (model.q_mat.cols() != m) {
    throw std::invalid_argument("attack model Q has " +
                                std::to_string(model.q_mat.cols()) +
                                " columns, system has m = " + std::to_string(m));
  }
  if (x0.size() != n) {
    throw std::invalid_argument("x0 has dimension " + std::to_string(x0.size()) +
                                ", expected " + std::to_string(n));
  }
  if (t_end < 1) throw std::invalid_argument("need horizon T >= 1");

  Rng rng(rng_seed);
  const Eigen::MatrixXd inputs = model.sigma * rng.normal_matrix(m, t_end);

  Eigen::MatrixXd states(n, t_end + 1);
  Eigen::MatrixXd dist(n, t_end);
  states.col(0) = x0;
  for (int t = 0; t < t_end; ++t) {
    Eigen::VectorXd d = model.epsilon * rng.normal_vector(n);
    if (model.support.contains(t)) {
      d += model.p_mat * states.col(t) + model.q_mat * inputs.col(t);
    }
    dist.col(t) = d;
    states.col(t + 1) = sys.a * states.col(t) + sys.b * inputs.col(t) + d;
  }
  return Trajectory(std::move(states), inputs, std::move(dist));
}

}  // namespace robust_sysid
