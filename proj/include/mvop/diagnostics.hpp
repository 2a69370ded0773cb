#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mvop/evaluation.hpp"
#include "mvop/measure.hpp"
#include "mvop/recurrence.hpp"

namespace mvop {

/// Max-norm defects of the three commuting conditions for one (n, i, j), i < j.
/// cc2 and cc3 involve B_n and are zero at n = 0, where they do not apply.
struct CommutingResidual {
  int n = 0;
  int i = 0;
  int j = 0;
  double cc1 = 0.0;
  double cc2 = 0.0;
  double cc3 = 0.0;

  double max() const;
};

struct ErrorReport {
  Eigen::MatrixXd E;  ///< block Gram of p_0..p_N minus identity
  double max_abs = 0.0;
  std::vector<double> condition;  ///< per degree n = 0..N
  std::vector<CommutingResidual> cc;
  /// Degree of a numerical breakdown during construction, -1 if none.
  int breakdown_degree = -1;
};

/// E = Gram(p_0..p_N) - I from stored evaluations at the measure's nodes.
Eigen::MatrixXd gram_error(const BasisEvaluation& values, const DiscreteMeasure& measure);

/// Same matrix, evaluating the basis from `rec` over node batches so that the
/// R_N x M value matrix is never held at once.
Eigen::MatrixXd gram_error(const RecurrenceData& rec, const DiscreteMeasure& measure, int N);

/// Residuals for n = 0..N-1 and all i < j:
///   cc1: B_{n+1,i} B_{n+1,j}^T + A_{n+1,i} A_{n+1,j} + B_{n,i}^T B_{n,j} - (i <-> j)
///   cc2: B_{n,i} A_{n+1,j} + A_{n,i} B_{n,j} - (i <-> j)
///   cc3: B_{n,i} B_{n+1,j} - B_{n,j} B_{n+1,i}
std::vector<CommutingResidual> commuting_residuals(const RecurrenceData& rec);
double max_residual(const std::vector<CommutingResidual>& residuals);

/// Mean over i of cond(B_{n+1,i} B_{n+1,i}^T) for n = 0..N, the exact
/// counterpart of the Stieltjes T_{n,i,i}. Needs matrices through degree N + 1.
std::vector<double> recurrence_t_condition(const RecurrenceData& rec, int N);

struct ChristoffelValues {
  Eigen::VectorXd K;       ///< (1/R_N) sum_n |p_n(x)|^2
  Eigen::VectorXd lambda;  ///< 1 / K
};

/// Christoffel quantities from stacked basis values (R_N x M). Throws
/// NumericalError if K is not positive somewhere.
ChristoffelValues christoffel(const Eigen::MatrixXd& stacked_values, int N);

/// Same, evaluating the basis from `rec` at the query points (M x d).
ChristoffelValues christoffel(const RecurrenceData& rec, const Eigen::MatrixXd& points, int N);

/// integral of K_N against the measure and the minimum of K_N over its nodes.
struct ChristoffelMass {
  double integral = 0.0;
  double min_value = 0.0;
};
ChristoffelMass christoffel_mass(const RecurrenceData& rec, const DiscreteMeasure& measure, int N);

}  // namespace mvop
