#pragma once

#include <Eigen/Dense>

#include "mvop/measure.hpp"

namespace mvop {

/// Coefficients of the orthonormal recurrence
///   x p_n = b_{n+1} p_{n+1} + a_{n+1} p_n + b_n p_{n-1},  p_0 = 1/b_0, p_{-1} = 0
/// stored for a_1..a_N and b_0..b_N.
class UnivariateRecurrence {
 public:
  UnivariateRecurrence() = default;
  /// a has N entries (a_1..a_N), b has N + 1 entries (b_0..b_N), all b > 0.
  UnivariateRecurrence(Eigen::VectorXd a, Eigen::VectorXd b);

  int degree() const { return static_cast<int>(b_.size()) - 1; }
  double a(int n) const;  ///< 1 <= n <= N
  double b(int n) const;  ///< 0 <= n <= N

 private:
  Eigen::VectorXd a_;
  Eigen::VectorXd b_;
};

/// Orthonormal Jacobi polynomials for (1-x)^alpha (1+x)^beta normalised to
/// unit mass (so b_0 = 1).
UnivariateRecurrence jacobi_coeffs(int N, double alpha, double beta);

/// Discretised Stieltjes procedure on a one-dimensional measure.
UnivariateRecurrence stieltjes_1d(const DiscreteMeasure& measure, int N);

/// Rows 0..n hold p_0..p_n evaluated at x.
Eigen::MatrixXd eval_1d(const UnivariateRecurrence& rec, int n, const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace mvop
