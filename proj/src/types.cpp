#include "robust_sysid/types.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace robust_sysid {

SystemMatrices::SystemMatrices(Eigen::MatrixXd a_in, Eigen::MatrixXd b_in)
    : a(std::move(a_in)), b(std::move(b_in)) {
  if (a.rows() < 1 || a.rows() != a.cols()) {
    throw std::invalid_argument("system matrix A must be square with n >= 1, got " +
                                std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()));
  }
  if (b.rows() != a.rows()) {
    throw std::invalid_argument("system matrix B has " + std::to_string(b.rows()) +
                                " rows, expected " + std::to_string(a.rows()));
  }
}

SystemMatrices::SystemMatrices(Eigen::MatrixXd a_in)
    : a(std::move(a_in)), b(a.rows(), 0) {
  if (a.rows() < 1 || a.rows() != a.cols()) {
    throw std::invalid_argument("system matrix A must be square with n >= 1, got " +
                                std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()));
  }
}

IndexSet::IndexSet(std::vector<int> indices, int horizon)
    : indices_(std::move(indices)), horizon_(horizon) {
  if (horizon_ < 0) throw std::invalid_argument("index set horizon must be >= 0");
  std::sort(indices_.begin(), indices_.end());
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] < 0 || indices_[k] >= horizon_) {
      throw std::invalid_argument("index " + std::to_string(indices_[k]) +
                                  " outside [0, " + std::to_string(horizon_ - 1) +
                                  "]");
    }
    if (k > 0 && indices_[k] == indices_[k - 1]) {
      throw std::invalid_argument("duplicate index " +
                                  std::to_string(indices_[k]));
    }
  }
}

IndexSet IndexSet::full(int horizon) {
  std::vector<int> all(static_cast<std::size_t>(horizon));
  for (int i = 0; i < horizon; ++i) all[static_cast<std::size_t>(i)] = i;
  return IndexSet(std::move(all), horizon);
}

IndexSet IndexSet::bernoulli(int horizon, double p, Rng& rng) {
  std::vector<int> picked;
  for (int i = 0; i < horizon; ++i) {
    if (rng.uniform() < p) picked.push_back(i);
  }
  return IndexSet(std::move(picked), horizon);
}

IndexSet IndexSet::random_subset(int horizon, int size, Rng& rng) {
  if (size < 0 || size > horizon) {
    throw std::invalid_argument("subset size " + std::to_string(size) +
                                " outside [0, " + std::to_string(horizon) + "]");
  }
  std::vector<int> pool(static_cast<std::size_t>(horizon));
  for (int i = 0; i < horizon; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (int k = 0; k < size; ++k) {
    const auto j = k + static_cast<int>(rng.below(
                           static_cast<std::uint64_t>(horizon - k)));
    std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(size));
  return IndexSet(std::move(pool), horizon);
}

IndexSet IndexSet::complement() const {
  std::vector<int> rest;
  rest.reserve(static_cast<std::size_t>(horizon_ - size()));
  std::size_t k = 0;
  for (int i = 0; i < horizon_; ++i) {
    if (k < indices_.size() && indices_[k] == i) {
      ++k;
    } else {
      rest.push_back(i);
    }
  }
  return IndexSet(std::move(rest), horizon_);
}

bool IndexSet::contains(int i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

Trajectory::Trajectory(Eigen::MatrixXd states_in, Eigen::MatrixXd inputs_in,
                       std::optional<Eigen::MatrixXd> disturbances_in)
    : states(std::move(states_in)),
      inputs(std::move(inputs_in)),
      disturbances(std::move(disturbances_in)) {
  if (states.cols() < 2) {
    throw std::invalid_argument("trajectory needs at least x_0 and x_1");
  }
  if (inputs.cols() != states.cols() - 1) {
    throw std::invalid_argument(
        "trajectory has " + std::to_string(states.cols()) + " states but " +
        std::to_string(inputs.cols()) + " inputs; expected one fewer input");
  }
  if (disturbances) {
    if (disturbances->rows() != states.rows() ||
        disturbances->cols() != states.cols() - 1) {
      throw std::invalid_argument("disturbance block must be n x T");
    }
  }
}

Eigen::MatrixXd Trajectory::stacked_data() const {
  const int t = horizon();
  Eigen::MatrixXd z(state_dim() + input_dim(), t);
  z.topRows(state_dim()) = states.leftCols(t);
  z.bottomRows(input_dim()) = inputs;
  return z;
}

Trajectory Trajectory::prefix(int t) const {
  if (t < 1 || t > horizon()) {
    throw std::invalid_argument("prefix length " + std::to_string(t) +
                                " outside [1, " + std::to_string(horizon()) + "]");
  }
  std::optional<Eigen::MatrixXd> d;
  if (disturbances) d = disturbances->leftCols(t);
  return Trajectory(states.leftCols(t + 1), inputs.leftCols(t), std::move(d));
}

AttackModel::AttackModel(IndexSet support_in, Eigen::MatrixXd p_in,
                         Eigen::MatrixXd q_in, double epsilon_in,
                         double sigma_in)
    : support(std::move(support_in)),
      p_mat(std::move(p_in)),
      q_mat(std::move(q_in)),
      epsilon(epsilon_in),
      sigma(sigma_in) {
  if (p_mat.rows() != p_mat.cols()) {
    throw std::invalid_argument("attack feedback P must be square");
  }
  if (q_mat.rows() != p_mat.rows()) {
    throw std::invalid_argument("attack feedback Q must have n rows");
  }
  if (epsilon < 0) throw std::invalid_argument("epsilon must be >= 0");
  if (sigma <= 0) throw std::invalid_argument("sigma must be > 0");
}

}  // namespace robust_sysid
