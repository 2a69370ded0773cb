#include "mvop/linalg.hpp"

#include <cmath>
#include <limits>

namespace mvop::linalg {

void fix_sign(VectorXd& v) {
  if (v.size() == 0) return;
  Eigen::Index arg = 0;
  for (Eigen::Index k = 1; k < v.size(); ++k)
    if (std::abs(v(k)) > std::abs(v(arg))) arg = k;
  if (v(arg) < 0) v = -v;
}

void fix_column_signs(MatrixXd& columns) {
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    Eigen::Index arg = 0;
    for (Eigen::Index k = 1; k < columns.rows(); ++k)
      if (std::abs(columns(k, c)) > std::abs(columns(arg, c))) arg = k;
    if (columns.rows() > 0 && columns(arg, c) < 0) columns.col(c) *= -1.0;
  }
}

SymmetricEigen eig_descending(const MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(symmetric, Eigen::ComputeEigenvectors);
  SymmetricEigen out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  fix_column_signs(out.vectors);
  return out;
}

MatrixXd symmetrized(const MatrixXd& s) { return 0.5 * (s + s.transpose()); }

bool psd_sqrt(const MatrixXd& s, double negative_tol, MatrixXd& root) {
  if (s.rows() == 0) {
    root.resize(0, 0);
    return true;
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(symmetrized(s), Eigen::ComputeEigenvectors);
  VectorXd lam = solver.eigenvalues();
  const double scale = std::max(1.0, lam.maxCoeff());
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    if (lam(k) < -negative_tol * scale) return false;
    lam(k) = std::sqrt(std::max(lam(k), 0.0));
  }
  root = solver.eigenvectors() * lam.asDiagonal() * solver.eigenvectors().transpose();
  return true;
}

bool rank_one_factor(const MatrixXd& s, double negative_tol, VectorXd& y) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(symmetrized(s), Eigen::ComputeEigenvectors);
  const VectorXd& lam = solver.eigenvalues();
  const Eigen::Index top = lam.size() - 1;
  const double scale = std::max(1.0, lam(top));
  if (lam(0) < -negative_tol * scale) return false;
  y = solver.eigenvectors().col(top) * std::sqrt(std::max(lam(top), 0.0));
  fix_sign(y);
  return true;
}

MatrixXd polar_orthogonal(const MatrixXd& m) {
  Eigen::JacobiSVD<MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

double condition_number_symmetric(const MatrixXd& symmetric) {
  if (symmetric.rows() == 0) return 1.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  const VectorXd mags = solver.eigenvalues().cwiseAbs();
  const double lo = mags.minCoeff();
  const double hi = mags.maxCoeff();
  if (!(lo > 0) || !std::isfinite(hi)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

double condition_number(const MatrixXd& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<MatrixXd> svd(m);
  const VectorXd& s = svd.singularValues();
  const double lo = s(s.size() - 1);
  if (!(lo > 0)) return std::numeric_limits<double>::infinity();
  return s(0) / lo;
}

double max_abs(const MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace mvop::linalg
