#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "robust_sysid/rng.hpp"

namespace robust_sysid {

// State-space pair (A, B) of x_{t+1} = A x_t + B u_t + d_t.
// m = 0 (autonomous system, no input channel) is a first-class case: b is
// then an n x 0 matrix and every operation accepting inputs takes an empty
// block.
struct SystemMatrices {
  Eigen::MatrixXd a;  // n x n state transition
  Eigen::MatrixXd b;  // n x m input map

  SystemMatrices(Eigen::MatrixXd a_in, Eigen::MatrixXd b_in);
  // Autonomous system (m = 0).
  explicit SystemMatrices(Eigen::MatrixXd a_in);

  int state_dim() const { return static_cast<int>(a.rows()); }
  int input_dim() const { return static_cast<int>(b.cols()); }
};

// Sorted set of time indices drawn from {0, ..., horizon-1}.
class IndexSet {
 public:
  IndexSet(std::vector<int> indices, int horizon);

  static IndexSet empty(int horizon) { return IndexSet({}, horizon); }
  static IndexSet full(int horizon);
  // Each index included independently with probability p.
  static IndexSet bernoulli(int horizon, double p, Rng& rng);
  // Uniformly random subset of the given size (partial Fisher-Yates).
  static IndexSet random_subset(int horizon, int size, Rng& rng);

  IndexSet complement() const;
  bool contains(int i) const;
  int size() const { return static_cast<int>(indices_.size()); }
  int horizon() const { return horizon_; }
  const std::vector<int>& indices() const { return indices_; }

  bool operator==(const IndexSet& other) const {
    return horizon_ == other.horizon_ && indices_ == other.indices_;
  }

 private:
  std::vector<int> indices_;  // sorted, unique
  int horizon_;
};

// One realized run of the system: states x_0..x_T, inputs u_0..u_{T-1} and,
// when produced by the simulator, the disturbances d_0..d_{T-1}. Columns are
// time steps throughout.
struct Trajectory {
  Eigen::MatrixXd states;                        // n x (T+1)
  Eigen::MatrixXd inputs;                        // m x T (m may be 0)
  std::optional<Eigen::MatrixXd> disturbances;   // n x T

  Trajectory(Eigen::MatrixXd states_in, Eigen::MatrixXd inputs_in,
             std::optional<Eigen::MatrixXd> disturbances_in = std::nullopt);

  int state_dim() const { return static_cast<int>(states.rows()); }
  int input_dim() const { return static_cast<int>(inputs.rows()); }
  int horizon() const { return static_cast<int>(states.cols()) - 1; }

  // X = [x_0, ..., x_{T-1}].
  Eigen::MatrixXd state_block() const { return states.leftCols(horizon()); }
  // Y = [x_1, ..., x_T], the regression targets.
  Eigen::MatrixXd next_state_block() const {
    return states.rightCols(horizon());
  }
  // Stacked data matrix [X; U] of size (n+m) x T.
  Eigen::MatrixXd stacked_data() const;

  // Restriction to the first t steps (states 0..t, inputs/disturbances 0..t-1).
  Trajectory prefix(int t) const;
};

// Attack times S with the feedback law d_t = P x_t + Q u_t + e_t on S,
// plain N(0, eps^2 I) noise off S, and N(0, sigma^2 I) inputs.
struct AttackModel {
  IndexSet support;       // attack times, horizon fixes T
  Eigen::MatrixXd p_mat;  // n x n state feedback of the attacker
  Eigen::MatrixXd q_mat;  // n x m input feedback of the attacker
  double epsilon;         // noise scale, >= 0
  double sigma;           // input scale, > 0

  AttackModel(IndexSet support_in, Eigen::MatrixXd p_in, Eigen::MatrixXd q_in,
              double epsilon_in, double sigma_in);
};

}  // namespace robust_sysid
