#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace robust_sysid::oracles {

double l1_scalar_objective(const Eigen::VectorXd& y, const Eigen::VectorXd& z,
                           double a) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i)
    total += std::abs(y(i) - a * z(i));
  return total;
}

double l1_scalar_argmin(const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
  // f is piecewise linear with breakpoints y_i/z_i; the slope left of a
  // breakpoint flips sign where the cumulative weight crosses half the total.
  std::vector<std::pair<double, double>> points;  // (ratio, weight)
  double total_weight = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (z(i) != 0.0) {
      points.emplace_back(y(i) / z(i), std::abs(z(i)));
      total_weight += std::abs(z(i));
    }
  }
  if (points.empty()) return 0.0;  // objective constant in a
  std::sort(points.begin(), points.end());
  double cum = 0.0;
  for (const auto& [ratio, weight] : points) {
    cum += weight;
    if (cum >= 0.5 * total_weight) return ratio;
  }
  return points.back().first;
}

InfNormOracle min_inf_norm_vertex(const Eigen::MatrixXd& basis,
                                  const Eigen::VectorXd& target) {
  InfNormOracle out;
  const Eigen::Index q = basis.cols();
  const double tnorm = target.norm();
  if (q == 0) {
    out.residual = tnorm;
    out.feasible = tnorm <= 1e-8 * std::max(1.0, tnorm);
    return out;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      basis, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double rank_tol = static_cast<double>(std::max(basis.rows(), q)) *
                          std::numeric_limits<double>::epsilon() * smax;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > rank_tol) ++rank;

  // Particular solution and range check via the pseudoinverse.
  Eigen::VectorXd gp = Eigen::VectorXd::Zero(q);
  for (Eigen::Index r = 0; r < rank; ++r) {
    gp += svd.matrixV().col(r) *
          (svd.matrixU().col(r).dot(target) / sv(r));
  }
  out.residual = (basis * gp - target).norm();
  if (out.residual > 1e-8 * std::max(1.0, tnorm)) return out;
  out.feasible = true;

  const Eigen::Index k = q - rank;  // nullity
  if (k == 0) {
    out.value = gp.lpNorm<Eigen::Infinity>();
    return out;
  }
  const Eigen::MatrixXd nullsp = svd.matrixV().rightCols(k);

  // Vertices of min t s.t. s_j (gp + N l)_j <= t: pick k+1 rows and signs,
  // solve the square system, keep feasible candidates.
  double best = gp.lpNorm<Eigen::Infinity>();  // l = 0 is always feasible
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(k) + 1);
  std::vector<int> signs(static_cast<std::size_t>(k) + 1, 0);

  const std::function<void(Eigen::Index, std::size_t)> choose =
      [&](Eigen::Index start, std::size_t depth) {
        if (depth == rows.size()) {
          const Eigen::Index nsel = static_cast<Eigen::Index>(rows.size());
          Eigen::MatrixXd sys(nsel, k + 1);
          Eigen::VectorXd rhs(nsel);
          for (Eigen::Index i = 0; i < nsel; ++i) {
            const Eigen::Index j = rows[static_cast<std::size_t>(i)];
            const double s = signs[static_cast<std::size_t>(i)];
            sys.row(i).head(k) = s * nullsp.row(j);
            sys(i, k) = -1.0;
            rhs(i) = -s * gp(j);
          }
          Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
          if (lu.rank() < k + 1) return;
          const Eigen::VectorXd sol = lu.solve(rhs);
          const Eigen::VectorXd gamma =
              gp + nullsp * sol.head(k);
          const double t = sol(k);
          const double inf = gamma.lpNorm<Eigen::Infinity>();
          if (inf <= t + 1e-9 * std::max(1.0, std::abs(t)))
            best = std::min(best, inf);
          return;
        }
        for (Eigen::Index j = start; j < q; ++j) {
          rows[depth] = j;
          for (int s : {1, -1}) {
            signs[depth] = s;
            choose(j + 1, depth + 1);
          }
        }
      };
  choose(0, 0);
  out.value = best;
  return out;
}

LpOracle lp_basis_enumeration(const Eigen::MatrixXd& a,
                              const Eigen::VectorXd& b,
                              const Eigen::VectorXd& c) {
  LpOracle out;
  const Eigen::Index n = a.cols();

  // Row equilibration preserves the feasible set exactly and keeps the rank
  // decisions below honest on badly scaled inputs.
  Eigen::MatrixXd aeq = a;
  Eigen::VectorXd beq = b;
  for (Eigen::Index i = 0; i < aeq.rows(); ++i) {
    const double scale = aeq.row(i).cwiseAbs().maxCoeff();
    if (scale > 0.0) {
      aeq.row(i) /= scale;
      beq(i) /= scale;
    }
  }

  // Row-space reduction so rank-deficient constraint sets enumerate over
  // square bases of the right size.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      aeq, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double rank_tol = static_cast<double>(std::max(aeq.rows(), n)) *
                          std::numeric_limits<double>::epsilon() *
                          std::max(smax, 1.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > rank_tol) ++rank;
  const Eigen::MatrixXd ared = sv.head(rank).asDiagonal() *
                               svd.matrixV().leftCols(rank).transpose();
  const Eigen::VectorXd bred = svd.matrixU().leftCols(rank).transpose() * beq;
  if ((svd.matrixU().leftCols(rank) * bred - beq).norm() >
      1e-8 * std::max(1.0, beq.norm()))
    return out;  // b outside the row space: infeasible

  if (rank == 0) {
    // Only x = 0 is basic; feasible iff b ~ 0 (checked above).
    out.feasible = true;
    out.x = Eigen::VectorXd::Zero(n);
    out.value = 0.0;
    return out;
  }

  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x;
  std::vector<Eigen::Index> cols(static_cast<std::size_t>(rank));
  const std::function<void(Eigen::Index, std::size_t)> choose =
      [&](Eigen::Index start, std::size_t depth) {
        if (depth == cols.size()) {
          Eigen::MatrixXd basis(rank, rank);
          for (Eigen::Index i = 0; i < rank; ++i)
            basis.col(i) = ared.col(cols[static_cast<std::size_t>(i)]);
          const Eigen::VectorXd xb =
              basis.fullPivLu().solve(bred);
          // accept by residual: rank gates misjudge valid ill-conditioned
          // bases, and a bad solve shows up here anyway
          if ((basis * xb - bred).norm() > 1e-9 * std::max(1.0, bred.norm()))
            return;
          if (xb.minCoeff() < -1e-9) return;
          Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
          for (Eigen::Index i = 0; i < rank; ++i)
            x(cols[static_cast<std::size_t>(i)]) = std::max(0.0, xb(i));
          const double value = c.dot(x);
          if (value < best) {
            best = value;
            best_x = x;
          }
          return;
        }
        for (Eigen::Index j = start; j < n; ++j) {
          cols[depth] = j;
          choose(j + 1, depth + 1);
        }
      };
  choose(0, 0);

  if (best_x.size() == 0) return out;  // no basic feasible solution found
  out.feasible = true;
  out.value = best;
  out.x = best_x;
  return out;
}

Eigen::MatrixXd least_squares_theta(const Eigen::MatrixXd& y,
                                    const Eigen::MatrixXd& z) {
  const Eigen::MatrixXd gram = z * z.transpose();
  return gram.partialPivLu().solve(z * y.transpose()).transpose();
}

double geometric_sum_direct(double a, int t) {
  long double total = 0.0L;
  long double power = 1.0L;
  for (int i = 0; i < t; ++i) {
    total += power;
    power *= a;
  }
  return static_cast<double>(total);
}

}  // namespace robust_sysid::oracles
