#include "robust_sysid/bounds.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "robust_sysid/norms.hpp"
#include "robust_sysid/parallel.hpp"
#include "robust_sysid/rng.hpp"
#include "robust_sysid/simulate.hpp"

namespace robust_sysid {

ErrorBound theorem2_bound(double c, const Trajectory& traj,
                          const IndexSet& s_set) {
  if (!(c > 0.0 && c < 1.0)) {
    std::ostringstream os;
    os << "theorem2_bound needs c in (0,1); the bound is vacuous at c=" << c;
    throw std::invalid_argument(os.str());
  }
  if (s_set.horizon() != traj.horizon()) {
    std::ostringstream os;
    os << "theorem2_bound: index set horizon " << s_set.horizon()
       << " != trajectory horizon " << traj.horizon();
    throw std::invalid_argument(os.str());
  }
  if (!traj.disturbances) {
    throw std::invalid_argument(
        "theorem2_bound needs the ground-truth disturbances stored in the "
        "trajectory (simulation output)");
  }
  const int dim = traj.state_dim() + traj.input_dim();
  if (traj.horizon() <= dim) {
    std::ostringstream os;
    os << "theorem2_bound needs horizon > n+m=" << dim << ", got "
       << traj.horizon();
    throw std::invalid_argument(os.str());
  }
  const Eigen::MatrixXd data = traj.stacked_data();
  const double smin = row_sigma_min(data);
  const double rank_tol = 1e-10 * std::max(1.0, sigma_max(data));
  if (smin <= rank_tol) {
    std::ostringstream os;
    os << "theorem2_bound: stacked data is rank deficient (sigma_min=" << smin
       << " <= tol=" << rank_tol << ")";
    throw std::invalid_argument(os.str());
  }

  ErrorBound out;
  out.c = c;
  out.noise_mass =
      col_group_norm(submatrix(*traj.disturbances, s_set.complement()));
  out.sigma_min_data = smin;
  out.bound = 2.0 * (1.0 + c) / (1.0 - c) * out.noise_mass / smin;
  return out;
}

EnvelopeConstants envelope_constants(const SystemMatrices& sys,
                                     const AttackModel& model) {
  const int n = sys.state_dim();
  const int m = sys.input_dim();
  if (model.p_mat.rows() != n || model.p_mat.cols() != n ||
      model.q_mat.rows() != n || model.q_mat.cols() != m) {
    std::ostringstream os;
    os << "envelope_constants: attack feedback P is " << model.p_mat.rows()
       << "x" << model.p_mat.cols() << ", Q is " << model.q_mat.rows() << "x"
       << model.q_mat.cols() << "; system needs " << n << "x" << n << " and "
       << n << "x" << m;
    throw std::invalid_argument(os.str());
  }
  EnvelopeConstants out;
  const Eigen::MatrixXd closed = sys.a + model.p_mat;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_open(sys.a);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_closed(closed);
  const auto& so = svd_open.singularValues();
  const auto& sc = svd_closed.singularValues();
  out.alpha_min = std::min(so(so.size() - 1), sc(sc.size() - 1));
  out.alpha_max = std::max(so(0), sc(0));
  out.beta_max =
      m == 0 ? 0.0 : std::max(sigma_max(sys.b), sigma_max(sys.b + model.q_mat));
  out.epsilon = model.epsilon;
  return out;
}

double GramianEnvelope::trace_upper_sum(const IndexSet& idx) const {
  if (idx.horizon() != static_cast<int>(upper.size())) {
    std::ostringstream os;
    os << "trace_upper_sum: index set horizon " << idx.horizon()
       << " != envelope length " << upper.size();
    throw std::invalid_argument(os.str());
  }
  double total = 0.0;
  for (int i : idx.indices()) total += upper[i].trace();
  return total;
}

namespace {

// sum_{i<t} a^i, stable near a = 1 via expm1/log1p.
double geometric_sum(double a, int t) {
  if (t <= 0) return 0.0;
  if (a == 1.0) return static_cast<double>(t);
  if (a == 0.0) return 1.0;
  return std::expm1(t * std::log1p(a - 1.0)) / (a - 1.0);
}

}  // namespace

GramianEnvelope gramian_envelope(const EnvelopeConstants& consts,
                                 const Eigen::MatrixXd& gamma0, int horizon) {
  if (horizon < 1) {
    std::ostringstream os;
    os << "gramian_envelope needs horizon >= 1, got " << horizon;
    throw std::invalid_argument(os.str());
  }
  for (double v : {consts.alpha_min, consts.alpha_max, consts.beta_max,
                   consts.epsilon}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << "gramian_envelope constants must be finite and >= 0, got " << v;
      throw std::invalid_argument(os.str());
    }
  }
  if (gamma0.rows() != gamma0.cols() || gamma0.rows() == 0) {
    std::ostringstream os;
    os << "gramian_envelope: Gamma_0 must be square and nonempty, got "
       << gamma0.rows() << "x" << gamma0.cols();
    throw std::invalid_argument(os.str());
  }
  const double scale = std::max(1.0, gamma0.cwiseAbs().maxCoeff());
  if ((gamma0 - gamma0.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("gramian_envelope: Gamma_0 is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gamma0);
  const double lambda_min = eig.eigenvalues()(0);
  if (lambda_min < -1e-10 * scale) {
    std::ostringstream os;
    os << "gramian_envelope: Gamma_0 is not PSD (lambda_min=" << lambda_min
       << ")";
    throw std::invalid_argument(os.str());
  }

  const Eigen::Index n = gamma0.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const double a2min = consts.alpha_min * consts.alpha_min;
  const double a2max = consts.alpha_max * consts.alpha_max;
  const double q_low = consts.epsilon * consts.epsilon;
  const double q_up = q_low + consts.beta_max * consts.beta_max;

  GramianEnvelope env;
  env.constants = consts;
  env.gamma0 = gamma0;
  env.lower.reserve(horizon);
  env.upper.reserve(horizon);
  env.lower.push_back(gamma0);
  env.upper.push_back(gamma0);
  for (int t = 1; t < horizon; ++t) {
    env.lower.push_back(a2min * env.lower.back() + q_low * id);
    env.upper.push_back(a2max * env.upper.back() + q_up * id);
  }

  // Independent closed form: upper_t = a2max^t Gamma_0 + q_up (sum_{i<t}
  // a2max^i) I. Disagreement means the recursion overflowed or drifted.
  for (int t = 0; t < horizon; ++t) {
    const Eigen::MatrixXd closed =
        std::pow(a2max, t) * gamma0 + q_up * geometric_sum(a2max, t) * id;
    const double level = std::max(1.0, env.upper[t].cwiseAbs().maxCoeff());
    if (!std::isfinite(level) ||
        (closed - env.upper[t]).cwiseAbs().maxCoeff() > 1e-10 * level) {
      std::ostringstream os;
      os << "gramian_envelope: closed form and recursion disagree at t=" << t
         << " (alpha_max=" << consts.alpha_max << ", horizon=" << horizon
         << "); the envelope is numerically unusable";
      throw std::invalid_argument(os.str());
    }
  }
  return env;
}

Prop1Quantities prop1_quantities(const AttackModel& model,
                                 const SystemMatrices& sys,
                                 const Eigen::MatrixXd& gamma0,
                                 const IndexSet& idx, double eta, int k) {
  if (!(eta > 0.0 && eta < 1.0)) {
    std::ostringstream os;
    os << "prop1_quantities needs eta in (0,1), got " << eta;
    throw std::invalid_argument(os.str());
  }
  if (k < 1) {
    std::ostringstream os;
    os << "prop1_quantities needs k >= 1, got " << k;
    throw std::invalid_argument(os.str());
  }
  if (idx.size() < 1)
    throw std::invalid_argument("prop1_quantities needs a nonempty index set");
  if (!(model.epsilon > 0.0)) {
    std::ostringstream os;
    os << "prop1_quantities needs epsilon > 0 (the attack model assumption), "
          "got "
       << model.epsilon;
    throw std::invalid_argument(os.str());
  }

  const int n = sys.state_dim();
  const int m = sys.input_dim();
  const EnvelopeConstants consts = envelope_constants(sys, model);
  const GramianEnvelope env = gramian_envelope(consts, gamma0, idx.horizon());

  const double size_i = static_cast<double>(idx.size());
  const double p = kBmsbSmallBall;
  const double min_es = std::min(model.epsilon, model.sigma);
  const double floor_term =
      k * std::floor(size_i / k) * p * p / 16.0;  // k floor(|I|/k) p^2/16

  Prop1Quantities out;
  out.c_of_i = m * model.sigma * model.sigma * size_i + env.trace_upper_sum(idx);
  out.sigma_max_threshold = std::sqrt(out.c_of_i / eta);
  out.sigma_min_threshold = min_es * std::sqrt(floor_term);
  const double exponent =
      -size_i * p * p / (10.0 * k) + 2.0 * (m + n) * std::log(10.0 / p) +
      0.5 * (m + n) *
          std::log(out.c_of_i / (min_es * min_es * floor_term * eta * eta));
  out.tail_probability = eta + std::exp(exponent);
  return out;
}

McSigmaReport monte_carlo_sigma_check(const AttackModel& model,
                                      const SystemMatrices& sys,
                                      const IndexSet& idx, double eta,
                                      int trials, std::uint64_t rng_seed) {
  if (trials < 100) {
    std::ostringstream os;
    os << "monte_carlo_sigma_check needs trials >= 100, got " << trials;
    throw std::invalid_argument(os.str());
  }
  if (idx.horizon() != model.support.horizon()) {
    std::ostringstream os;
    os << "monte_carlo_sigma_check: index set horizon " << idx.horizon()
       << " != attack support horizon " << model.support.horizon();
    throw std::invalid_argument(os.str());
  }
  const int n = sys.state_dim();
  const Eigen::MatrixXd gamma0 = Eigen::MatrixXd::Zero(n, n);
  const Prop1Quantities q = prop1_quantities(model, sys, gamma0, idx, eta);

  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  std::vector<char> exceeded(trials, 0);
  parallel_for(trials, [&](int trial) {
    const Trajectory traj =
        sample_attack_disturbances(model, sys, x0, trial_seed(rng_seed, trial));
    const double smax = sigma_max(submatrix(traj.stacked_data(), idx));
    exceeded[trial] = smax > q.sigma_max_threshold ? 1 : 0;
  });
  int count = 0;
  for (char flag : exceeded) count += flag;

  McSigmaReport out;
  out.empirical_exceed_rate = static_cast<double>(count) / trials;
  out.threshold = q.sigma_max_threshold;
  out.eta = eta;
  out.trials = trials;
  out.binomial_slack = 3.0 * std::sqrt(eta * (1.0 - eta) / trials);
  return out;
}

}  // namespace robust_sysid
