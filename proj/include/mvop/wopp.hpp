#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mvop/errors.hpp"

namespace mvop {

struct WoppOptions {
  int max_iter = 500;      ///< total iterations across all restarts
  double tol = 1e-8;       ///< target residual
  std::uint64_t seed = 0;  ///< restart initialisations
  int degree = 0;          ///< reported in errors
};

struct WoppResult {
  std::vector<Eigen::MatrixXd> W;  ///< W[0] is the identity gauge
  double residual = 0.0;
  int iterations = 0;
  int restarts = 0;
};

/// Orthogonal W_0..W_{m-1} with W_0 = I minimising
///   sum_{i != j} || E_i W_i W_j^T E_j^T - H_ij ||_F^2,
/// where E_i is p_i x q and H[i][j] is p_i x p_j (only i < j entries are read;
/// H_ji is taken as H_ij^T). residual is the square root of that sum.
///
/// Riemannian Levenberg-Marquardt with a Cayley retraction, restarting from
/// seeded random orthogonal matrices when progress stalls.
WoppResult solve_wopp(const std::vector<Eigen::MatrixXd>& E, const std::vector<std::vector<Eigen::MatrixXd>>& H,
                      const WoppOptions& options = {});

/// solve_wopp failed to reach the tolerance; carries the best iterate found.
class WoppConvergenceError : public NumericalError {
 public:
  WoppConvergenceError(const std::string& what, int degree, WoppResult best)
      : NumericalError(what, degree), best_(std::move(best)) {}
  const WoppResult& best() const { return best_; }

 private:
  WoppResult best_;
};

/// Objective value sqrt(sum_{i != j} ||E_i W_i W_j^T E_j^T - H_ij||_F^2).
double wopp_residual(const std::vector<Eigen::MatrixXd>& E, const std::vector<std::vector<Eigen::MatrixXd>>& H,
                     const std::vector<Eigen::MatrixXd>& W);

/// Haar-distributed orthogonal matrix of size q from a seeded generator state.
Eigen::MatrixXd random_orthogonal(int q, std::uint64_t seed);

}  // namespace mvop
