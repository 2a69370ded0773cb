#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mvop/recurrence.hpp"

namespace mvop {

/// Degree-blocked basis values: blocks[m] is r_m x M with entry (j, k) equal to
/// p_{(m,j)}(points.row(k)).
struct BasisEvaluation {
  Eigen::MatrixXd points;  ///< M x d
  std::vector<Eigen::MatrixXd> blocks;

  int max_degree() const { return static_cast<int>(blocks.size()) - 1; }
  Eigen::Index num_points() const { return points.rows(); }
  /// All blocks stacked, R_n x M.
  Eigen::MatrixXd stacked() const;
};

/// Node batch size for streamed reductions over large measures.
inline constexpr Eigen::Index kNodeChunk = 4096;

/// Relative floor on Lambda eigenvalues below which the stacked B_n is rank deficient.
inline constexpr double kLambdaRankTol = 1e-12;

/// Rotates arbitrary valid recurrence matrices into canonical form: every
/// Lambda_n diagonal, non-increasing, recorded in the output.
RecurrenceData to_canonical(const RecurrenceData& rec);

/// Canonicalises degree n in place, assuming degree n - 1 has just been
/// rotated by u_prev (pass an empty matrix for the identity). Returns U_n.
Eigen::MatrixXd canonicalize_degree(RecurrenceData& rec, int n, const Eigen::MatrixXd& u_prev);

/// p_{n+1} from p_n and p_{n-1} (pass an empty matrix for p_{-1}) via the
/// Lambda-diagonal stacked recurrence. Requires Lambda_{n+1}.
Eigen::MatrixXd next_block(const RecurrenceData& rec, int n, const Eigen::Ref<const Eigen::MatrixXd>& points,
                           const Eigen::MatrixXd& p_n, const Eigen::MatrixXd& p_prev);

/// Basis values through degree n_max at the given M x d points.
BasisEvaluation evaluate(const RecurrenceData& rec, const Eigen::MatrixXd& points, int n_max);

/// Same values stacked as R_{n_max} x M without keeping the points.
Eigen::MatrixXd evaluate_stacked(const RecurrenceData& rec, const Eigen::Ref<const Eigen::MatrixXd>& points,
                                 int n_max);

/// max over nodes and rows of |x_i p_n - B_{n+1,i} p_{n+1} - A_{n+1,i} p_n - B_{n,i}^T p_{n-1}|.
double apply_ttr_residual(const RecurrenceData& rec, const BasisEvaluation& evaluation, int n, int i);

}  // namespace mvop
