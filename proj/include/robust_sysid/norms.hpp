#pragma once

#include <Eigen/Dense>

#include "robust_sysid/types.hpp"

namespace robust_sysid {

// Sum over columns of the Euclidean norm of each column. This is the
// group-sparsity norm the estimator minimizes.
double col_group_norm(const Eigen::MatrixXd& mat);

// Copy of mat with every column outside idx zeroed. Satisfies
// project_columns(M, I) + project_columns(M, I.complement()) == M exactly.
Eigen::MatrixXd project_columns(const Eigen::MatrixXd& mat, const IndexSet& idx);

// Columns of mat listed in idx, extracted in ascending index order.
Eigen::MatrixXd submatrix(const Eigen::MatrixXd& mat, const IndexSet& idx);

// Largest singular value; 0 for an empty matrix.
double sigma_max(const Eigen::MatrixXd& mat);

// Smallest of the first `rows` singular values, i.e. the value whose
// positivity makes the matrix full row rank; 0 when cols < rows.
double row_sigma_min(const Eigen::MatrixXd& mat);

}  // namespace robust_sysid
