#pragma once

#include <span>
#include <vector>

#include "mvop/mindex.hpp"
#include "mvop/recurrence.hpp"
#include "mvop/univariate.hpp"

namespace mvop {

/// Exact recurrence matrices of the tensor-product basis p_alpha = prod_j p_{j,alpha_j}
/// for a product measure, in the ordering of `set`. uni[j] must reach degree N.
RecurrenceData tensor_recurrence(std::span<const UnivariateRecurrence> uni, const MultiIndexSet& set, int N);

/// For each degree n (index n, entry 0 unused) the stable permutation that
/// puts diag(B_n^T B_n) in non-increasing order: new position k holds old
/// basis element order[n][k]. Requires diagonal B_n^T B_n.
std::vector<std::vector<Eigen::Index>> canonical_order(const RecurrenceData& rec);

/// Reorders every degree by canonical_order and records Lambda_n.
RecurrenceData canonical_permutation(const RecurrenceData& rec);

/// Explicit tensor products p_alpha(x) for the indices of degree <= n, rows in
/// graded order (R_n x M). Points are M x d.
Eigen::MatrixXd tensor_product_values(std::span<const UnivariateRecurrence> uni, const MultiIndexSet& set, int n,
                                      const Eigen::MatrixXd& points);

}  // namespace mvop
