#include "robust_sysid/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "robust_sysid/estimator.hpp"
#include "robust_sysid/norms.hpp"
#include "robust_sysid/parallel.hpp"
#include "robust_sysid/rng.hpp"
#include "robust_sysid/simulate.hpp"

namespace robust_sysid {

namespace {

// Salts keep the seed streams of independent draws disjoint.
constexpr std::uint64_t kSystemSalt = 0x53595354454d5ull;
constexpr std::uint64_t kInputSalt = 0x494e5055543ull;
constexpr std::uint64_t kDataSalt = 0x444154413ull;
constexpr std::uint64_t kSweepSalt = 0x53574545503ull;

const double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

void ExperimentConfig::validate() const {
  std::ostringstream os;
  if (n < 1)
    os << "n must be >= 1, got " << n;
  else if (m < 0)
    os << "m must be >= 0, got " << m;
  else if (horizon < n + m + 1)
    os << "horizon must be >= n+m+1 = " << (n + m + 1) << ", got " << horizon;
  else if (!(attack_probability >= 0.0 && attack_probability <= 1.0))
    os << "attack_probability must lie in [0,1], got " << attack_probability;
  else if (!(attack_scale >= 0.0))
    os << "attack_scale must be >= 0, got " << attack_scale;
  else if (trials < 1)
    os << "trials must be >= 1, got " << trials;
  else if (grid_step < 1)
    os << "grid_step must be >= 1, got " << grid_step;
  else if (eigenvalue_law != "uniform01")
    os << "unsupported eigenvalue_law '" << eigenvalue_law
       << "' (supported: uniform01)";
  else
    return;
  throw std::invalid_argument("experiment config: " + os.str());
}

SystemMatrices generate_random_system(int n, std::uint64_t rng_seed) {
  if (n < 1) {
    std::ostringstream os;
    os << "generate_random_system needs n >= 1, got " << n;
    throw std::invalid_argument(os.str());
  }
  Rng rng(rng_seed);
  Eigen::VectorXd lambda(n);
  for (int i = 0; i < n; ++i) lambda(i) = rng.uniform();

  double cond = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 10; ++attempt) {
    const Eigen::MatrixXd p = rng.normal_matrix(n, n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(p);
    const auto& sv = svd.singularValues();
    cond = sv(0) / sv(n - 1);
    if (cond <= 1e6) {
      // A = P Lambda P^-1, evaluated as solve(P^T, (P Lambda)^T)^T.
      const Eigen::MatrixXd pl = p * lambda.asDiagonal();
      const Eigen::MatrixXd a =
          p.transpose().partialPivLu().solve(pl.transpose()).transpose();
      return SystemMatrices(a);
    }
  }
  std::ostringstream os;
  os << "generate_random_system: 10 similarity-transform draws for n=" << n
     << ", seed=" << rng_seed << " were all ill-conditioned (last cond="
     << cond << " > 1e6)";
  throw std::runtime_error(os.str());
}

namespace {

SystemMatrices make_system(const ExperimentConfig& config, std::uint64_t seed) {
  SystemMatrices sys = generate_random_system(config.n, seed ^ kSystemSalt);
  if (config.m > 0) {
    Rng rng(seed ^ kInputSalt);
    sys.b = rng.normal_matrix(config.n, config.m);
  }
  return sys;
}

// Draw order (fixed): x0, then all inputs column by column, then one
// disturbance direction per step. Off-support steps consume their draw even
// in the noiseless case so the support never shifts other draws.
Trajectory simulate_with_support(const ExperimentConfig& config,
                                 const SystemMatrices& sys,
                                 const IndexSet& support, Rng& rng) {
  const int t_end = config.horizon;
  const Eigen::VectorXd x0 = rng.normal_vector(config.n);
  const Eigen::MatrixXd inputs = rng.normal_matrix(config.m, t_end);
  Eigen::MatrixXd dist(config.n, t_end);
  for (int t = 0; t < t_end; ++t) {
    const Eigen::VectorXd g = rng.normal_vector(config.n);
    if (support.contains(t))
      dist.col(t) = config.attack_scale * g;
    else if (config.noise_on)
      dist.col(t) = g;
    else
      dist.col(t).setZero();
  }
  return simulate(sys, x0, inputs, dist);
}

}  // namespace

ExperimentInstance make_instance(const ExperimentConfig& config, int trial) {
  config.validate();
  if (trial < 0) throw std::invalid_argument("trial index must be >= 0");
  const std::uint64_t seed = trial_seed(config.rng_seed, trial);
  SystemMatrices sys = make_system(config, seed);
  Rng data_rng(seed ^ kDataSalt);
  IndexSet support =
      IndexSet::bernoulli(config.horizon, config.attack_probability, data_rng);
  Trajectory traj = simulate_with_support(config, sys, support, data_rng);
  return ExperimentInstance{std::move(sys), std::move(traj),
                            std::move(support)};
}

std::vector<ErrorCurveRow> run_error_curve(const ExperimentConfig& config) {
  config.validate();
  std::vector<int> grid;
  for (int t = config.n + config.m + 1; t < config.horizon;
       t += config.grid_step)
    grid.push_back(t);
  grid.push_back(config.horizon);

  std::vector<std::vector<ErrorCurveRow>> per_trial(config.trials);
  parallel_for(config.trials, [&](int trial) {
    const std::uint64_t seed = trial_seed(config.rng_seed, trial);
    const ExperimentInstance inst = make_instance(config, trial);
    std::vector<ErrorCurveRow>& rows = per_trial[trial];
    rows.reserve(2 * grid.size());

    WarmStart warm;
    for (int t : grid) {
      const Trajectory prefix = inst.traj.prefix(t);

      EstimationResult est = solve_lasso(prefix, SolverConfig{}, warm);
      rows.push_back(ErrorCurveRow{trial, t, "lasso",
                                   estimation_error(est.sys_hat, inst.sys),
                                   est.objective, est.converged, seed});
      warm.theta.resize(config.n, config.n + config.m);
      warm.theta << est.sys_hat.a, est.sys_hat.b;
      warm.dual = est.diagnostics.scaled_dual;

      ErrorCurveRow ls_row{trial, t, "least_squares", kNan, kNan, false, seed};
      try {
        const SystemMatrices ls = solve_least_squares(prefix);
        ls_row.err_fro = estimation_error(ls, inst.sys);
        Eigen::MatrixXd theta(config.n, config.n + config.m);
        theta << ls.a, ls.b;
        ls_row.objective = col_group_norm(prefix.next_state_block() -
                                          theta * prefix.stacked_data());
        ls_row.converged = true;
      } catch (const std::invalid_argument&) {
        // rank-deficient prefix: keep the NaN row
      }
      rows.push_back(std::move(ls_row));
    }
  });

  std::vector<ErrorCurveRow> rows;
  rows.reserve(static_cast<std::size_t>(config.trials) * 2 * grid.size());
  for (std::vector<ErrorCurveRow>& chunk : per_trial)
    for (ErrorCurveRow& row : chunk) rows.push_back(std::move(row));
  return rows;
}

std::vector<CertificationRow> run_certification_sweep(
    const ExperimentConfig& config, const std::vector<int>& s_sizes,
    const NspOptions& options) {
  config.validate();
  for (int s : s_sizes) {
    if (s < 0 || s > config.horizon) {
      std::ostringstream os;
      os << "certification sweep: |S|=" << s << " outside [0, horizon="
         << config.horizon << "]";
      throw std::invalid_argument(os.str());
    }
  }

  std::vector<std::vector<CertificationRow>> per_trial(config.trials);
  parallel_for(config.trials, [&](int trial) {
    const std::uint64_t seed = trial_seed(config.rng_seed, trial);
    const SystemMatrices sys = make_system(config, seed);
    std::vector<CertificationRow>& rows = per_trial[trial];
    rows.reserve(s_sizes.size());
    for (int s : s_sizes) {
      CertificationRow row{trial, s, config.horizon, "error", false, kNan,
                           seed};
      try {
        Rng rng(seed ^ kSweepSalt ^
                (static_cast<std::uint64_t>(s) << 32));
        const IndexSet support =
            IndexSet::random_subset(config.horizon, s, rng);
        const Trajectory traj =
            simulate_with_support(config, sys, support, rng);
        const CertificateReport verdict = nsp_verdict(traj, support, options);
        row.method = verdict.method;
        row.certified = verdict.certified;
        row.c_achieved = verdict.c_achieved.value_or(kNan);
      } catch (const std::exception&) {
        // recorded as method = "error"
      }
      rows.push_back(std::move(row));
    }
  });

  std::vector<CertificationRow> rows;
  rows.reserve(static_cast<std::size_t>(config.trials) * s_sizes.size());
  for (std::vector<CertificationRow>& chunk : per_trial)
    for (CertificationRow& row : chunk) rows.push_back(std::move(row));
  return rows;
}

}  // namespace robust_sysid
