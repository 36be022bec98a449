#include "robust_sysid/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "robust_sysid/norms.hpp"
#include "robust_sysid/simplex.hpp"

namespace robust_sysid {

namespace {

std::string set_to_string(const IndexSet& set) {
  std::ostringstream os;
  os << "{";
  const auto& idx = set.indices();
  for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
  os << "}";
  return os.str();
}

}  // namespace

MinInfNormResult min_inf_norm_solve(const Eigen::MatrixXd& basis,
                                    const Eigen::VectorXd& target) {
  if (basis.rows() != target.size()) {
    std::ostringstream os;
    os << "min_inf_norm_solve: basis has " << basis.rows()
       << " rows but target has " << target.size();
    throw std::invalid_argument(os.str());
  }
  MinInfNormResult out;
  const Eigen::Index q = basis.cols();
  const double target_norm = target.norm();
  const double range_tol = 1e-8 * std::max(1.0, target_norm);
  if (q == 0) {
    out.residual = target_norm;
    out.feasible = target_norm <= range_tol;
    out.gamma = Eigen::VectorXd(0);
    return out;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      basis, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double rank_tol = static_cast<double>(std::max(basis.rows(), q)) *
                          std::numeric_limits<double>::epsilon() * smax;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > rank_tol) ++rank;

  const Eigen::VectorXd ut = svd.matrixU().leftCols(rank).transpose() * target;
  out.residual = (target - svd.matrixU().leftCols(rank) * ut).norm();
  if (out.residual > range_tol) return out;
  if (target_norm <= 1e-14) {
    out.feasible = true;
    out.gamma = Eigen::VectorXd::Zero(q);
    return out;
  }

  // Constraints projected onto the row space: S_r V_r^T gamma = U_r^T target.
  const Eigen::MatrixXd bred =
      sv.head(rank).asDiagonal() * svd.matrixV().leftCols(rank).transpose();

  // Standard form over (gamma+, gamma-, slack, t):
  //   bred gamma+ - bred gamma- = ut
  //   gamma+_j + gamma-_j + slack_j - t = 0
  const Eigen::Index rows = rank + q;
  const Eigen::Index nv = 3 * q + 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, nv);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nv);
  a.block(0, 0, rank, q) = bred;
  a.block(0, q, rank, q) = -bred;
  b.head(rank) = ut;
  for (Eigen::Index j = 0; j < q; ++j) {
    a(rank + j, j) = 1.0;
    a(rank + j, q + j) = 1.0;
    a(rank + j, 2 * q + j) = 1.0;
    a(rank + j, 3 * q) = -1.0;
  }
  c(3 * q) = 1.0;

  const LpResult lp = solve_standard_form_lp(a, b, c);
  if (lp.status != LpStatus::optimal) {
    std::ostringstream os;
    os << "min_inf_norm_solve: LP solver returned "
       << (lp.status == LpStatus::infeasible    ? "infeasible"
           : lp.status == LpStatus::unbounded   ? "unbounded"
                                                : "iteration_limit")
       << " on a range-checked instance (" << rank << " projected rows, " << q
       << " columns)";
    throw std::runtime_error(os.str());
  }
  out.feasible = true;
  out.gamma = lp.x.head(q) - lp.x.segment(q, q);
  out.value = out.gamma.size() > 0 ? out.gamma.cwiseAbs().maxCoeff() : 0.0;
  return out;
}

XiResult xi_1(const Trajectory& traj) {
  const int t = traj.horizon();
  if (t < 2) {
    std::ostringstream os;
    os << "xi_1 needs horizon >= 2 so every column has peers, got " << t;
    throw std::invalid_argument(os.str());
  }
  const Eigen::MatrixXd v = traj.stacked_data();
  XiResult out;
  out.decomposable = true;
  for (int j = 0; j < t; ++j) {
    Eigen::MatrixXd basis(v.rows(), t - 1);
    int k = 0;
    for (int col = 0; col < t; ++col)
      if (col != j) basis.col(k++) = v.col(col);
    const MinInfNormResult lp = min_inf_norm_solve(basis, v.col(j));
    if (!lp.feasible) {
      out.decomposable = false;
      out.witnesses.clear();
      out.failed_set = IndexSet({j}, t);
      out.failed_column = j;
      out.failed_residual = lp.residual;
      out.value = 0.0;
      return out;
    }
    out.witnesses.push_back(
        DecompositionWitness{IndexSet({j}, t), lp.gamma, lp.value});
    out.value = std::max(out.value, lp.value);
  }
  return out;
}

long long subset_count(int horizon, int s, long long cap) {
  if (cap < 1) throw std::invalid_argument("subset_count: cap must be >= 1");
  cap = std::min(cap, std::numeric_limits<long long>::max() - 1);
  if (s < 0 || s > horizon) return 0;
  const int k = std::min(s, horizon - s);
  long long result = 1;
  for (int i = 1; i <= k; ++i) {
    const long long factor = horizon - k + i;
    if (result > std::numeric_limits<long long>::max() / factor)
      return cap + 1;
    result = result * factor / i;  // exact: running value is a binomial
    if (result > cap) return cap + 1;
  }
  return result;
}

XiResult xi_s(const Trajectory& traj, int s, long long subset_cap) {
  const int t = traj.horizon();
  if (s < 1) {
    std::ostringstream os;
    os << "xi_s needs s >= 1, got " << s;
    throw std::invalid_argument(os.str());
  }
  if (t - s < 1) {
    std::ostringstream os;
    os << "xi_s needs at least one remaining column, got s=" << s
       << " with horizon " << t;
    throw std::invalid_argument(os.str());
  }
  if (s == 1) return xi_1(traj);
  const long long count = subset_count(t, s, subset_cap);
  if (count > subset_cap) {
    std::ostringstream os;
    os << "xi_s would enumerate C(" << t << "," << s << ") > " << subset_cap
       << " index sets; refusing (a sampled maximum only lower-bounds xi_s)";
    throw std::invalid_argument(os.str());
  }

  const Eigen::MatrixXd v = traj.stacked_data();
  std::vector<int> idx(s);
  std::iota(idx.begin(), idx.end(), 0);
  XiResult out;
  out.decomposable = true;
  std::optional<DecompositionWitness> best;
  while (true) {
    const IndexSet iset(idx, t);
    const Eigen::MatrixXd basis = submatrix(v, iset.complement());
    Eigen::MatrixXd gamma(t - s, s);
    double amplitude = 0.0;
    for (int k = 0; k < s; ++k) {
      const MinInfNormResult lp = min_inf_norm_solve(basis, v.col(idx[k]));
      if (!lp.feasible) {
        out.decomposable = false;
        out.failed_set = iset;
        out.failed_column = idx[k];
        out.failed_residual = lp.residual;
        out.value = 0.0;
        return out;
      }
      gamma.col(k) = lp.gamma;
      amplitude += lp.value;
    }
    if (!best || amplitude > best->amplitude)
      best = DecompositionWitness{iset, std::move(gamma), amplitude};

    int i = s - 1;
    while (i >= 0 && idx[i] == t - s + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
  }
  out.value = best->amplitude;
  out.witnesses.push_back(std::move(*best));
  return out;
}

CertificateReport certify_via_xi(const Trajectory& traj, const IndexSet& s_set,
                                 XiMode mode, long long subset_cap) {
  if (s_set.horizon() != traj.horizon()) {
    std::ostringstream os;
    os << "certify_via_xi: index set horizon " << s_set.horizon()
       << " != trajectory horizon " << traj.horizon();
    throw std::invalid_argument(os.str());
  }
  CertificateReport rep;
  rep.method = mode == XiMode::xi_s ? "xi_s" : "xi_1";
  const int s = s_set.size();
  const int t = traj.horizon();
  rep.details["s"] = static_cast<double>(s);

  const Eigen::MatrixXd v = traj.stacked_data();
  const double smin = row_sigma_min(v);
  const double rank_tol = 1e-10 * std::max(1.0, sigma_max(v));
  if (smin <= rank_tol) {
    rep.applicable = false;
    std::ostringstream os;
    os << "stacked data [X;U] is not full row rank (sigma_min=" << smin
       << " <= tol=" << rank_tol
       << "); the NSP fails for every c and the program cannot have a unique "
          "minimizer";
    rep.inapplicable_reasons.push_back(os.str());
    return rep;
  }
  if (s == 0) {
    // Empty attack set: with full row rank the strict inequality is vacuous.
    rep.c_achieved = 0.0;
    rep.certified = true;
    rep.recovery_certified = true;
    return rep;
  }

  if (mode == XiMode::xi_s) {
    if (t - s < 1) {
      rep.applicable = false;
      std::ostringstream os;
      os << "no columns remain outside a size-" << s << " set at horizon " << t;
      rep.inapplicable_reasons.push_back(os.str());
      return rep;
    }
    if (s > 1) {
      const long long count = subset_count(t, s, subset_cap);
      if (count > subset_cap) {
        rep.applicable = false;
        std::ostringstream os;
        os << "exact xi_" << s << " needs C(" << t << "," << s << ") > "
           << subset_cap << " subset enumerations; raise the cap or use the "
           << "singular-value test";
        rep.inapplicable_reasons.push_back(os.str());
        return rep;
      }
    }
    const XiResult xr = xi_s(traj, s, subset_cap);
    if (!xr.decomposable) {
      rep.applicable = false;
      std::ostringstream os;
      os << "data is not " << s << "-self-decomposable: column "
         << xr.failed_column << " of set " << set_to_string(*xr.failed_set)
         << " lies outside the span of the remaining columns (residual "
         << xr.failed_residual << ")";
      rep.inapplicable_reasons.push_back(os.str());
      return rep;
    }
    rep.xi_value = xr.value;
    rep.c_achieved = xr.value;
    rep.details["xi_s"] = xr.value;
    rep.certified = xr.value < 1.0;
    rep.recovery_certified = rep.certified;
    return rep;
  }

  // xi_1 route.
  if (s < 2) {
    rep.applicable = false;
    rep.inapplicable_reasons.push_back(
        "the xi_1 bound needs |S| >= 2; for singletons xi_s and xi_1 coincide, "
        "use the xi_s certificate");
    return rep;
  }
  const XiResult xr = xi_1(traj);
  if (!xr.decomposable) {
    rep.applicable = false;
    std::ostringstream os;
    os << "data is not 1-self-decomposable: column " << xr.failed_column
       << " lies outside the span of the remaining columns (residual "
       << xr.failed_residual << ")";
    rep.inapplicable_reasons.push_back(os.str());
    return rep;
  }
  const double x1 = xr.value;
  rep.xi_value = x1;
  rep.details["xi_1"] = x1;
  rep.details["recovery_threshold"] = 1.0 / (2.0 * s - 1.0);
  const double denom = 1.0 - (s - 1) * x1;
  rep.details["denominator"] = denom;
  if (denom < 0.0) {
    rep.applicable = false;
    std::ostringstream os;
    os << "xi_1=" << x1 << " exceeds 1/(|S|-1)=" << 1.0 / (s - 1)
       << ", violating the hypothesis for |S|=" << s;
    rep.inapplicable_reasons.push_back(os.str());
    return rep;
  }
  if (denom == 0.0) return rep;  // constant degenerates to infinity
  const double c = s * x1 / denom;
  rep.c_achieved = c;
  rep.details["c"] = c;
  rep.certified = c < 1.0;
  rep.recovery_certified = rep.certified;
  return rep;
}

CertificateReport check_singular_value_nsp(const Trajectory& traj,
                                           const IndexSet& s_set, double c) {
  if (!(c > 0.0)) {
    std::ostringstream os;
    os << "NSP constant c must be positive, got " << c;
    throw std::invalid_argument(os.str());
  }
  if (s_set.horizon() != traj.horizon()) {
    std::ostringstream os;
    os << "check_singular_value_nsp: index set horizon " << s_set.horizon()
       << " != trajectory horizon " << traj.horizon();
    throw std::invalid_argument(os.str());
  }
  CertificateReport rep;
  rep.method = "singular_value";
  rep.details["c"] = c;
  rep.details["s"] = static_cast<double>(s_set.size());

  const Eigen::MatrixXd v = traj.stacked_data();
  const int dim = static_cast<int>(v.rows());
  const IndexSet comp = s_set.complement();
  if (comp.size() < dim) {
    rep.applicable = false;
    std::ostringstream os;
    os << "complement has " << comp.size() << " columns < n+m=" << dim
       << ", so sigma_min of [X_Sc;U_Sc] is structurally zero";
    rep.inapplicable_reasons.push_back(os.str());
    return rep;
  }
  const double sig_max_s =
      s_set.size() == 0 ? 0.0 : sigma_max(submatrix(v, s_set));
  const double sig_min_c = row_sigma_min(submatrix(v, comp));
  const double lhs = std::sqrt(static_cast<double>(s_set.size())) * sig_max_s;
  rep.details["sqrt_s_sigma_max"] = lhs;
  rep.details["sigma_min_complement"] = sig_min_c;
  rep.certified = lhs < c * sig_min_c;
  if (sig_min_c > 0.0) {
    rep.c_achieved = lhs / sig_min_c;
    rep.details["ratio"] = lhs / sig_min_c;
    rep.recovery_certified = *rep.c_achieved < 1.0;
  }
  return rep;
}

std::vector<CertificateReport> nsp_all_methods(const Trajectory& traj,
                                               const IndexSet& s_set,
                                               const NspOptions& options) {
  std::vector<CertificateReport> reports;
  if (options.run_singular_value)
    reports.push_back(check_singular_value_nsp(traj, s_set, 1.0));
  if (options.run_xi) {
    reports.push_back(
        certify_via_xi(traj, s_set, XiMode::xi_s, options.subset_cap));
    reports.push_back(
        certify_via_xi(traj, s_set, XiMode::xi_1, options.subset_cap));
  }
  return reports;
}

CertificateReport nsp_verdict(const Trajectory& traj, const IndexSet& s_set,
                              const NspOptions& options) {
  const std::vector<CertificateReport> reports =
      nsp_all_methods(traj, s_set, options);
  const CertificateReport* best = nullptr;
  for (const CertificateReport& rep : reports) {
    if (!rep.applicable || !rep.certified || !rep.c_achieved) continue;
    if (!best || *rep.c_achieved < *best->c_achieved) best = &rep;
  }
  if (best) return *best;

  // Inconclusive: no method certified. Collect everything for diagnosis.
  CertificateReport agg;
  agg.method = "none";
  agg.applicable = false;
  for (const CertificateReport& rep : reports) {
    agg.applicable = agg.applicable || rep.applicable;
    for (const std::string& reason : rep.inapplicable_reasons)
      agg.inapplicable_reasons.push_back(rep.method + ": " + reason);
    for (const auto& [key, val] : rep.details)
      agg.details[rep.method + "." + key] = val;
    if (rep.applicable && rep.c_achieved)
      agg.details[rep.method + ".c_achieved"] = *rep.c_achieved;
  }
  if (reports.empty())
    agg.inapplicable_reasons.push_back("no certification method enabled");
  return agg;
}

}  // namespace robust_sysid
