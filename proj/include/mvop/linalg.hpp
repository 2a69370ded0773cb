#pragma once

#include <Eigen/Dense>

namespace mvop::linalg {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Symmetric eigendecomposition with eigenvalues in non-increasing order.
struct SymmetricEigen {
  VectorXd values;
  MatrixXd vectors;  ///< columns are eigenvectors, sign-fixed
};

/// Flip each column so that its largest-magnitude entry is positive (lowest
/// row index wins ties).
void fix_column_signs(MatrixXd& columns);
void fix_sign(VectorXd& v);

SymmetricEigen eig_descending(const MatrixXd& symmetric);

/// (S + S^T) / 2
MatrixXd symmetrized(const MatrixXd& s);

/// Symmetric PSD square root. Eigenvalues in [-negative_tol * scale, 0) are
/// clamped to zero, where scale = max(1, largest eigenvalue); returns false if
/// any eigenvalue is more negative than that.
bool psd_sqrt(const MatrixXd& s, double negative_tol, MatrixXd& root);

/// Vector y with y y^T closest to the symmetric PSD matrix s (leading
/// eigenpair). Same clamping rule as psd_sqrt. Sign fixed by fix_sign.
bool rank_one_factor(const MatrixXd& s, double negative_tol, VectorXd& y);

/// Nearest orthogonal matrix (orthogonal polar factor).
MatrixXd polar_orthogonal(const MatrixXd& m);

/// 2-norm condition number of a symmetric matrix from its eigenvalues;
/// +infinity when the smallest magnitude eigenvalue is zero or the matrix is
/// indefinite to working precision.
double condition_number_symmetric(const MatrixXd& symmetric);

/// 2-norm condition number from singular values; +infinity when singular.
double condition_number(const MatrixXd& m);

double max_abs(const MatrixXd& m);

}  // namespace mvop::linalg
