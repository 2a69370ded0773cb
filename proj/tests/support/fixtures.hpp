#pragma once

// Small measures and recurrences shared by several test files.

#include <vector>

#include <Eigen/Dense>

#include "mvop/measure.hpp"
#include "mvop/mindex.hpp"
#include "mvop/recurrence.hpp"
#include "mvop/tensor_oracle.hpp"
#include "mvop/univariate.hpp"
#include "oracles.hpp"

namespace fixture {

/// Uniform measure on [-1, 1]^d from the test-side Gauss-Legendre rule.
inline mvop::DiscreteMeasure legendre_box(int d, int n_points) {
  const auto rule = oracle::gauss_legendre(n_points);
  Eigen::Index M = 1;
  for (int i = 0; i < d; ++i) M *= n_points;
  Eigen::MatrixXd nodes(M, d);
  Eigen::VectorXd w(M);
  for (Eigen::Index m = 0; m < M; ++m) {
    Eigen::Index rest = m;
    long double weight = 1;
    for (int i = 0; i < d; ++i) {
      const auto k = static_cast<std::size_t>(rest % n_points);
      rest /= n_points;
      nodes(m, i) = static_cast<double>(rule.x[k]);
      weight *= rule.w[k];
    }
    w(m) = static_cast<double>(weight);
  }
  return mvop::DiscreteMeasure(nodes, w, "legendre box");
}

inline std::vector<mvop::UnivariateRecurrence> jacobi_family(const std::vector<double>& alphas,
                                                             const std::vector<double>& betas, int N) {
  std::vector<mvop::UnivariateRecurrence> uni;
  for (std::size_t i = 0; i < alphas.size(); ++i) uni.push_back(mvop::jacobi_coeffs(N, alphas[i], betas[i]));
  return uni;
}

/// Canonical tensor-oracle recurrence through degree N.
inline mvop::RecurrenceData tensor_canonical(const std::vector<double>& alphas, const std::vector<double>& betas,
                                             int N) {
  const auto uni = jacobi_family(alphas, betas, N);
  const mvop::MultiIndexSet set(static_cast<int>(alphas.size()), N);
  return mvop::canonical_permutation(mvop::tensor_recurrence(uni, set, N));
}

inline mvop::RecurrenceData legendre_canonical(int d, int N) {
  return tensor_canonical(std::vector<double>(static_cast<std::size_t>(d), 0.0),
                          std::vector<double>(static_cast<std::size_t>(d), 0.0), N);
}

/// Sorted eigenvalues of a symmetric matrix, descending.
inline Eigen::VectorXd spectrum(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

/// max_k |a_k - b_k| / max(|b_k|, floor)
inline double relative_gap(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double floor = 1e-300) {
  double worst = 0;
  for (Eigen::Index k = 0; k < a.size(); ++k)
    worst = std::max(worst, std::abs(a(k) - b(k)) / std::max(std::abs(b(k)), floor));
  return worst;
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace fixture
