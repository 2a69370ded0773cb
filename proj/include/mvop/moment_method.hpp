#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mvop/evaluation.hpp"
#include "mvop/measure.hpp"
#include "mvop/mindex.hpp"
#include "mvop/recurrence.hpp"

namespace mvop {

/// Fixed polynomial basis phi_1, phi_2, ... in graded order: monomials x^alpha,
/// or products of orthonormal Legendre polynomials for the uniform measure on a box.
class SpanningBasis {
 public:
  enum class Kind { monomial, tensor_legendre };

  static SpanningBasis monomial(int d, int max_degree);
  /// Box given as per-axis [lo, hi] with lo < hi.
  static SpanningBasis tensor_legendre(std::vector<std::pair<double, double>> box, int max_degree);
  /// Tightest axis-aligned box around the nodes of `measure`.
  static SpanningBasis tensor_legendre(const DiscreteMeasure& measure, int max_degree);

  Kind kind() const { return kind_; }
  int dim() const { return set_.dim(); }
  int max_degree() const { return set_.max_degree(); }
  const MultiIndexSet& index_set() const { return set_; }
  const std::vector<std::pair<double, double>>& box() const { return box_; }

  /// phi_1..phi_{R_n} at the points (M x d), as an R_n x M matrix.
  Eigen::MatrixXd evaluate(const Eigen::Ref<const Eigen::MatrixXd>& points, int n) const;

 private:
  SpanningBasis(Kind kind, int d, int max_degree, std::vector<std::pair<double, double>> box);

  Kind kind_;
  MultiIndexSet set_;
  std::vector<std::pair<double, double>> box_;
};

/// Gram matrices of a spanning basis and the Cholesky factor of G.
struct GramData {
  int d = 0;
  int N = 0;
  Eigen::MatrixXd G;               ///< R_N x R_N, <phi_a, phi_b>
  std::vector<Eigen::MatrixXd> Gx;  ///< Gx[i] is R_{N-1} x R_N, <x_i phi_a, phi_b>
  /// Lower-triangular factor of G, valid on the leading factored_size() columns.
  Eigen::MatrixXd L;
  /// Inverse of the valid leading block of L.
  Eigen::MatrixXd L_inv;
  /// Degree of the first column whose pivot was not positive, -1 if none.
  int breakdown_degree = -1;

  Eigen::Index factored_size() const { return L_inv.rows(); }
  /// Largest degree n whose whole G_n block factored.
  int factored_degree() const { return breakdown_degree < 0 ? N : breakdown_degree - 1; }
};

/// Accumulates G and Gx over the measure's nodes, then factors G.
GramData build_gram(const SpanningBasis& basis, const DiscreteMeasure& measure, int N);

/// Column-by-column Cholesky without pivoting. Stops at the first non-positive
/// or non-finite pivot and records its degree in `gram.breakdown_degree`.
void factor_gram(GramData& gram, const MultiIndexSet& set);

/// Orthonormal basis L^{-1} Phi at the points through degree n. Throws
/// ConditioningError when G_n did not factor.
BasisEvaluation orthonormalize(const GramData& gram, const SpanningBasis& basis,
                               const Eigen::MatrixXd& points, int n);

/// A_{n+1,i} = Lt_n^{-1} G_{n,i} Lt_n^{-T}, B_{n+1,i} = Lt_n^{-1} Gt_{n+1,i} Lt_{n+1}^{-T}
/// for degrees 1..N, where Lt_n^{-1} are the rows of L^{-1} belonging to degree n.
/// Throws ConditioningError naming the breakdown degree when G_N did not factor.
RecurrenceData extract_recurrence(const GramData& gram, int N);

/// 2-norm condition numbers of the leading blocks G_0, ..., G_N.
std::vector<double> gram_condition_numbers(const GramData& gram, const MultiIndexSet& set);

}  // namespace mvop
