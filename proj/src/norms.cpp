#include "robust_sysid/norms.hpp"

#include <stdexcept>
#include <string>

namespace robust_sysid {

double col_group_norm(const Eigen::MatrixXd& mat) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < mat.cols(); ++j) total += mat.col(j).norm();
  return total;
}

namespace {
void check_horizon(const Eigen::MatrixXd& mat, const IndexSet& idx) {
  if (idx.horizon() != mat.cols()) {
    throw std::invalid_argument("index set horizon " +
                                std::to_string(idx.horizon()) +
                                " does not match matrix with " +
                                std::to_string(mat.cols()) + " columns");
  }
}
}  // namespace

Eigen::MatrixXd project_columns(const Eigen::MatrixXd& mat, const IndexSet& idx) {
  check_horizon(mat, idx);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(mat.rows(), mat.cols());
  for (int j : idx.indices()) out.col(j) = mat.col(j);
  return out;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& mat, const IndexSet& idx) {
  check_horizon(mat, idx);
  Eigen::MatrixXd out(mat.rows(), idx.size());
  Eigen::Index k = 0;
  for (int j : idx.indices()) out.col(k++) = mat.col(j);
  return out;
}

double sigma_max(const Eigen::MatrixXd& mat) {
  if (mat.rows() == 0 || mat.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat);
  return svd.singularValues()(0);
}

double row_sigma_min(const Eigen::MatrixXd& mat) {
  if (mat.cols() < mat.rows() || mat.rows() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat);
  return svd.singularValues()(mat.rows() - 1);
}

}  // namespace robust_sysid
