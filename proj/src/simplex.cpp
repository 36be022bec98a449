#include "robust_sysid/simplex.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace robust_sysid {

namespace {

constexpr double kReducedCostTol = 1e-10;
constexpr double kPivotTol = 1e-9;

// Tableau layout: rows 0..r-1 are the constraints in canonical form with the
// right-hand side in the last column; row r is the reduced-cost row with the
// negated objective value in its last column.
struct Tableau {
  Eigen::MatrixXd t;
  std::vector<int> basis;  // basic variable of each constraint row
  int rows;                // constraint count
  int cols;                // variable count (excludes the RHS column)
};

void pivot(Tableau& tab, int prow, int pcol) {
  tab.t.row(prow) /= tab.t(prow, pcol);
  for (int i = 0; i <= tab.rows; ++i) {
    if (i == prow) continue;
    const double factor = tab.t(i, pcol);
    if (factor != 0.0) tab.t.row(i) -= factor * tab.t.row(prow);
  }
  tab.basis[static_cast<std::size_t>(prow)] = pcol;
}

// Returns the entering column, or -1 at optimality. `allowed` masks columns
// that may enter (artificials are barred in phase 2).
int choose_entering(const Tableau& tab, const std::vector<char>& allowed,
                    bool bland) {
  int best = -1;
  double most_negative = -kReducedCostTol;
  for (int j = 0; j < tab.cols; ++j) {
    if (!allowed[static_cast<std::size_t>(j)]) continue;
    const double rc = tab.t(tab.rows, j);
    if (bland) {
      if (rc < -kReducedCostTol) return j;
    } else if (rc < most_negative) {
      most_negative = rc;
      best = j;
    }
  }
  return best;
}

// Ratio test with Bland-compatible tie-breaking (smallest basis variable).
int choose_leaving(const Tableau& tab, int pcol) {
  int row = -1;
  double best_ratio = 0.0;
  for (int i = 0; i < tab.rows; ++i) {
    const double aij = tab.t(i, pcol);
    if (aij <= kPivotTol) continue;
    const double ratio = tab.t(i, tab.cols) / aij;
    if (row < 0 || ratio < best_ratio - 1e-14 ||
        (std::abs(ratio - best_ratio) <= 1e-14 &&
         tab.basis[static_cast<std::size_t>(i)] <
             tab.basis[static_cast<std::size_t>(row)])) {
      row = i;
      best_ratio = ratio;
    }
  }
  return row;
}

// Runs the simplex loop on the current tableau. Returns false on iteration
// exhaustion; sets *unbounded when a ray is found.
bool run_simplex(Tableau& tab, const std::vector<char>& allowed, int max_iters,
                 int& iters, bool* unbounded) {
  *unbounded = false;
  bool bland = false;
  int stall = 0;
  double last_obj = -tab.t(tab.rows, tab.cols);
  while (iters < max_iters) {
    const int pcol = choose_entering(tab, allowed, bland);
    if (pcol < 0) return true;  // optimal
    const int prow = choose_leaving(tab, pcol);
    if (prow < 0) {
      *unbounded = true;
      return true;
    }
    pivot(tab, prow, pcol);
    ++iters;

    const double obj = -tab.t(tab.rows, tab.cols);
    if (obj < last_obj - 1e-12) {
      stall = 0;
    } else if (++stall > 100) {
      bland = true;  // degeneracy guard
    }
    last_obj = obj;
  }
  return false;
}

}  // namespace

LpResult solve_standard_form_lp(const Eigen::MatrixXd& a_in,
                                const Eigen::VectorXd& b_in,
                                const Eigen::VectorXd& c, int max_iters) {
  const int rows = static_cast<int>(a_in.rows());
  const int nv = static_cast<int>(a_in.cols());
  if (b_in.size() != rows || c.size() != nv) {
    throw std::invalid_argument("LP dimensions inconsistent");
  }
  if (max_iters <= 0) max_iters = 20000 + 50 * (rows + nv);

  // Equilibrate rows and orient them so the RHS is nonnegative.
  Eigen::MatrixXd a = a_in;
  Eigen::VectorXd b = b_in;
  for (int i = 0; i < rows; ++i) {
    double scale = a.row(i).cwiseAbs().maxCoeff();
    if (scale > 0.0) {
      a.row(i) /= scale;
      b(i) /= scale;
    }
    if (b(i) < 0.0) {
      a.row(i) = -a.row(i);
      b(i) = -b(i);
    }
  }

  LpResult result;
  const int total = nv + rows;  // original variables + artificials
  Tableau tab;
  tab.rows = rows;
  tab.cols = total;
  tab.t.setZero(rows + 1, total + 1);
  tab.t.block(0, 0, rows, nv) = a;
  tab.t.block(0, nv, rows, rows) = Eigen::MatrixXd::Identity(rows, rows);
  tab.t.col(total).head(rows) = b;
  tab.basis.resize(static_cast<std::size_t>(rows));
  for (int i = 0; i < rows; ++i) tab.basis[static_cast<std::size_t>(i)] = nv + i;

  // Phase 1: minimize the artificial sum; canonical reduced costs follow from
  // subtracting every constraint row from the artificial cost vector.
  for (int j = 0; j < nv; ++j) tab.t(rows, j) = -tab.t.col(j).head(rows).sum();
  tab.t(rows, total) = -b.sum();

  std::vector<char> allowed(static_cast<std::size_t>(total), 1);
  int iters = 0;
  bool unbounded = false;
  if (!run_simplex(tab, allowed, max_iters, iters, &unbounded)) {
    result.status = LpStatus::iteration_limit;
    result.iterations = iters;
    return result;
  }
  const double infeas = -tab.t(rows, total);
  if (infeas > 1e-7 * std::max(1.0, b.lpNorm<1>())) {
    result.status = LpStatus::infeasible;
    result.iterations = iters;
    return result;
  }

  // Drive lingering artificials out of the basis; a row with no eligible
  // pivot is redundant and can stay (its artificial remains at zero).
  for (int i = 0; i < rows; ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] < nv) continue;
    for (int j = 0; j < nv; ++j) {
      if (std::abs(tab.t(i, j)) > kPivotTol) {
        pivot(tab, i, j);
        break;
      }
    }
  }

  // Phase 2: swap in the real objective, re-canonicalize, bar artificials.
  for (int j = 0; j < total; ++j) tab.t(rows, j) = j < nv ? c(j) : 0.0;
  tab.t(rows, total) = 0.0;
  for (int i = 0; i < rows; ++i) {
    const int bi = tab.basis[static_cast<std::size_t>(i)];
    const double cost = bi < nv ? c(bi) : 0.0;
    if (cost != 0.0) tab.t.row(rows) -= cost * tab.t.row(i);
  }
  for (int j = nv; j < total; ++j) allowed[static_cast<std::size_t>(j)] = 0;

  if (!run_simplex(tab, allowed, max_iters, iters, &unbounded)) {
    result.status = LpStatus::iteration_limit;
    result.iterations = iters;
    return result;
  }
  if (unbounded) {
    result.status = LpStatus::unbounded;
    result.iterations = iters;
    return result;
  }

  result.status = LpStatus::optimal;
  result.iterations = iters;
  result.x = Eigen::VectorXd::Zero(nv);
  for (int i = 0; i < rows; ++i) {
    const int bi = tab.basis[static_cast<std::size_t>(i)];
    if (bi < nv) result.x(bi) = tab.t(i, total);
  }
  result.objective = c.dot(result.x);
  return result;
}

}  // namespace robust_sysid
