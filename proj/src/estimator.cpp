#include "robust_sysid/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "robust_sysid/norms.hpp"

namespace robust_sysid {

Eigen::VectorXd block_soft_threshold(const Eigen::VectorXd& v, double tau) {
  if (tau < 0) throw std::invalid_argument("threshold must be >= 0");
  const double norm = v.norm();
  if (norm <= tau) return Eigen::VectorXd::Zero(v.size());
  return v * (1.0 - tau / norm);
}

namespace {

void validate_config(const SolverConfig& config) {
  if (config.penalty <= 0) throw std::invalid_argument("penalty must be > 0");
  if (config.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (config.tol_abs <= 0 || config.tol_rel <= 0) {
    throw std::invalid_argument("tolerances must be > 0");
  }
}

// Support-restricted refit: identify likely attack columns, least-squares on
// the rest, keep the result only when the objective does not increase.
bool try_polish(const Eigen::MatrixXd& y, const Eigen::MatrixXd& z,
                Eigen::MatrixXd& theta, Eigen::MatrixXd& d_hat,
                double& objective) {
  const auto t_end = y.cols();
  const auto p = z.rows();

  double max_col = 0.0;
  for (Eigen::Index j = 0; j < t_end; ++j) {
    max_col = std::max(max_col, d_hat.col(j).norm());
  }
  const double cutoff = 1e-6 * std::max(1.0, max_col);

  std::vector<Eigen::Index> clean;
  for (Eigen::Index j = 0; j < t_end; ++j) {
    if (d_hat.col(j).norm() <= cutoff) clean.push_back(j);
  }
  if (static_cast<Eigen::Index>(clean.size()) < p) return false;

  Eigen::MatrixXd zc(p, clean.size());
  Eigen::MatrixXd yc(y.rows(), clean.size());
  for (std::size_t k = 0; k < clean.size(); ++k) {
    zc.col(static_cast<Eigen::Index>(k)) = z.col(clean[k]);
    yc.col(static_cast<Eigen::Index>(k)) = y.col(clean[k]);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(zc, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-10 * sv(0)) return false;

  // theta_p = yc * pinv(zc)
  const Eigen::MatrixXd theta_p =
      ((svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose()) *
       yc.transpose())
          .transpose();
  const Eigen::MatrixXd d_p = y - theta_p * z;
  const double obj_p = col_group_norm(d_p);
  if (obj_p > objective + 1e-12 * std::max(1.0, objective)) return false;

  theta = theta_p;
  d_hat = d_p;
  objective = obj_p;
  return true;
}

}  // namespace

EstimationResult solve_lasso(const Trajectory& traj) {
  return solve_lasso(traj, SolverConfig{});
}

EstimationResult solve_lasso(const Trajectory& traj,
                             const SolverConfig& config) {
  return solve_lasso(traj, config, WarmStart{});
}

EstimationResult solve_lasso(const Trajectory& traj, const SolverConfig& config,
                             const WarmStart& warm) {
  validate_config(config);
  const int n = traj.state_dim();
  const int m = traj.input_dim();
  const auto t_end = static_cast<Eigen::Index>(traj.horizon());
  const Eigen::Index p = n + m;

  const Eigen::MatrixXd y = traj.next_state_block();
  const Eigen::MatrixXd z = traj.stacked_data();
  const Eigen::MatrixXd zt = z.transpose();

  EstimationResult result{
      SystemMatrices(Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, m)),
      Eigen::MatrixXd::Zero(n, t_end),
      0.0,
      0,
      0.0,
      0.0,
      false,
      SolverDiagnostics{}};
  result.diagnostics.final_penalty = config.penalty;

  double z_max = 0.0;
  {
    Eigen::JacobiSVD<Eigen::MatrixXd> zsvd(z);
    const auto& sv = zsvd.singularValues();
    z_max = sv.size() > 0 ? sv(0) : 0.0;
    if (z_max == 0.0 || sv.size() < p ||
        sv(sv.size() - 1) <= 1e-12 * std::max(1.0, z_max)) {
      result.diagnostics.degenerate_data = true;
    }
  }
  // With no data to fit (Y = 0) or no regressors (Z = 0) the zero estimate is
  // optimal; return it directly instead of splitting.
  if (y.norm() == 0.0 || z_max == 0.0) {
    result.d_hat = y;
    result.objective = col_group_norm(y);
    result.converged = true;
    result.diagnostics.checkpoints.emplace_back(0, result.objective);
    return result;
  }

  const Eigen::MatrixXd gram =
      z * zt + config.ridge * Eigen::MatrixXd::Identity(p, p);
  const Eigen::LDLT<Eigen::MatrixXd> factor(gram);

  double rho = config.penalty;
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(n, p);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, t_end);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, t_end);  // scaled dual
  if (warm.theta.size() > 0) {
    if (warm.theta.rows() != n || warm.theta.cols() != p) {
      throw std::invalid_argument(
          "warm-start Theta is " + std::to_string(warm.theta.rows()) + "x" +
          std::to_string(warm.theta.cols()) + ", need " + std::to_string(n) +
          "x" + std::to_string(p));
    }
    theta = warm.theta;
    d = y - theta * z;  // start D feasible for the warm Theta
  }
  if (warm.dual.size() > 0) {
    if (warm.dual.rows() != n) {
      throw std::invalid_argument("warm-start dual has " +
                                  std::to_string(warm.dual.rows()) +
                                  " rows, need " + std::to_string(n));
    }
    const Eigen::Index keep = std::min<Eigen::Index>(warm.dual.cols(), t_end);
    w.leftCols(keep) = warm.dual.leftCols(keep);
  }
  Eigen::MatrixXd r(n, t_end);                          // Y - Theta Z
  Eigen::MatrixXd d_prev(n, t_end);
  Eigen::MatrixXd rhs(n, p);

  const double y_norm = y.norm();
  double best_objective = std::numeric_limits<double>::infinity();
  double primal_res = 0.0;
  double dual_res = 0.0;
  bool converged = false;
  int iter = 0;
  const int check_every = 10;

  while (iter < config.max_iters) {
    ++iter;
    // Theta-update: argmin ||Theta Z + D - Y + W||_F^2 (rho-independent).
    rhs.noalias() = (y - d - w) * zt;
    theta.noalias() = factor.solve(rhs.transpose()).transpose();
    r.noalias() = y - theta * z;

    // D-update: columnwise prox of (1/rho)||.||_2 at (R - W).
    d_prev.swap(d);
    const double tau = 1.0 / rho;
    for (Eigen::Index j = 0; j < t_end; ++j) {
      d.col(j).noalias() = r.col(j) - w.col(j);
      const double norm = d.col(j).norm();
      if (norm <= tau) {
        d.col(j).setZero();
      } else {
        d.col(j) *= 1.0 - tau / norm;
      }
    }

    // Dual-update: accumulate the constraint violation D - (Y - Theta Z).
    primal_res = 0.0;
    for (Eigen::Index j = 0; j < t_end; ++j) {
      const double sq = (d.col(j) - r.col(j)).squaredNorm();
      primal_res += sq;
    }
    primal_res = std::sqrt(primal_res);
    w += d - r;

    if (iter % check_every == 0 || iter == config.max_iters) {
      dual_res = rho * ((d - d_prev) * zt).norm();
      const double eps_pri =
          std::sqrt(static_cast<double>(n) * static_cast<double>(t_end)) *
              config.tol_abs +
          config.tol_rel * std::max({(theta * z).norm(), d.norm(), y_norm});
      const double eps_dual =
          std::sqrt(static_cast<double>(n) * static_cast<double>(p)) *
              config.tol_abs +
          config.tol_rel * rho * (w * zt).norm();
      if (primal_res <= eps_pri && dual_res <= eps_dual) {
        converged = true;
      }

      if (config.adaptive_penalty && !converged) {
        if (primal_res > 10.0 * dual_res && rho < 1e6) {
          rho *= 2.0;
          w *= 0.5;
        } else if (dual_res > 10.0 * primal_res && rho > 1e-6) {
          rho *= 0.5;
          w *= 2.0;
        }
      }
    }

    if (iter % config.checkpoint_every == 0 || converged ||
        iter == config.max_iters) {
      best_objective = std::min(best_objective, col_group_norm(y - theta * z));
      result.diagnostics.checkpoints.emplace_back(iter, best_objective);
    }
    if (converged) break;
  }

  result.iterations = iter;
  result.converged = converged;
  result.primal_residual = primal_res;
  result.dual_residual = dual_res;
  result.diagnostics.final_penalty = rho;
  result.diagnostics.scaled_dual = w;

  // Feasibility by construction: D comes from the constraint, not the split.
  Eigen::MatrixXd d_hat = y - theta * z;
  double objective = col_group_norm(d_hat);
  if (config.polish) {
    result.diagnostics.polished = try_polish(y, z, theta, d_hat, objective);
  }

  result.sys_hat.a = theta.leftCols(n);
  result.sys_hat.b = theta.rightCols(m);
  result.d_hat = std::move(d_hat);
  result.objective = objective;
  return result;
}

SystemMatrices solve_least_squares(const Trajectory& traj) {
  const int n = traj.state_dim();
  const int m = traj.input_dim();
  const Eigen::MatrixXd y = traj.next_state_block();
  const Eigen::MatrixXd z = traj.stacked_data();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double sv_min = sv(sv.size() - 1);
  const double sv_max = sv(0);
  if (z.rows() > z.cols() || sv_min <= 1e-10 * sv_max) {
    throw std::invalid_argument(
        "data matrix [X; U] is rank-deficient: smallest singular value " +
        std::to_string(sv_min) + " <= 1e-10 * largest (" +
        std::to_string(sv_max) + ")");
  }

  // Theta = Y Z^+ through the SVD pseudoinverse: Theta^T = U S^-1 V^T Y^T.
  const Eigen::MatrixXd theta =
      (svd.matrixU() * sv.cwiseInverse().asDiagonal() *
       (svd.matrixV().transpose() * y.transpose()))
          .transpose();
  return SystemMatrices(theta.leftCols(n), theta.rightCols(m));
}

double estimation_error(const SystemMatrices& estimate,
                        const SystemMatrices& truth) {
  const double da = (estimate.a - truth.a).norm();
  const double db = (estimate.b - truth.b).norm();
  return std::sqrt(da * da + db * db);
}

}  // namespace robust_sysid
