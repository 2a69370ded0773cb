#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mvop/measure.hpp"
#include "mvop/recurrence.hpp"
#include "mvop/wopp.hpp"

namespace mvop {

/// Singular values below this fraction of the largest count as zero.
inline constexpr double kStieltjesRankTol = 1e-10;
/// Eigenvalues of a matrix that must be PSD may dip this far below zero.
inline constexpr double kPsdNegativeTol = 1e-10;
/// Bound on ||W^T W - I|| for the d = 3 orthogonal completion.
inline constexpr double kClosureTol = 1e-8;

/// Running state of the Stieltjes iteration: canonical recurrence data through
/// degree n and the basis values p_{n-1}, p_n at every node of the measure.
class StieltjesState {
 public:
  explicit StieltjesState(const DiscreteMeasure& measure);

  int degree() const { return rec_.max_degree(); }
  int dim() const { return rec_.dim(); }
  const DiscreteMeasure& measure() const { return *measure_; }
  const RecurrenceData& recurrence() const { return rec_; }
  /// p_n over the nodes, r_n x M.
  const Eigen::MatrixXd& current() const { return cur_; }
  /// p_{n-1} over the nodes (empty at n = 0).
  const Eigen::MatrixXd& previous() const { return prev_; }

  /// S_{n,i} = <x_i p_n, p_n^T>, symmetrised.
  Eigen::MatrixXd compute_S(int i) const;
  /// T_{n,i,j} = <pt_i, pt_j^T> for all i <= j, pt_i = x_i p_n - A_i p_n - B_{n,i}^T p_{n-1}.
  /// Entry [i][j] with i > j holds the transpose; diagonal blocks are symmetrised.
  std::vector<std::vector<Eigen::MatrixXd>> compute_T(const std::vector<Eigen::MatrixXd>& A) const;

  /// Appends degree n + 1, rotates it to canonical form and evaluates p_{n+1}.
  void commit(const std::vector<Eigen::MatrixXd>& A, const std::vector<Eigen::MatrixXd>& B);

  /// Largest |<p_a, p_b^T> - delta_ab| over the blocks a, b in {n-1, n}.
  double local_drift() const;

 private:
  const DiscreteMeasure* measure_;
  RecurrenceData rec_;
  Eigen::MatrixXd prev_;
  Eigen::MatrixXd cur_;
};

/// U and Sigma with T_ii = U Sigma^2 U^T, Sigma non-increasing.
struct SymmetricFactor {
  Eigen::MatrixXd U;
  Eigen::VectorXd sigma;
};

/// Throws RankError(n, i) when sigma_min < kStieltjesRankTol * sigma_max.
SymmetricFactor factor_symmetric(const Eigen::MatrixXd& T_ii, int n, int i);

/// Vhat_j = Sigma_1^{-1} U_1^T T_1j U_j Sigma_j^{-1}
Eigen::MatrixXd compute_Vhat(const SymmetricFactor& f1, const SymmetricFactor& fj, const Eigen::MatrixXd& T_1j);

/// y with y y^T = I - Vhat^T Vhat (d = 2). Throws ConsistencyError(n) when that
/// matrix is indefinite beyond kPsdNegativeTol.
Eigen::VectorXd close_d2(const Eigen::MatrixXd& Vhat, int n);

/// B_{1,i} for d > 2 from the Cholesky factor of the degree-1 monomial Gram matrix.
std::vector<Eigen::MatrixXd> fallback_n0(const DiscreteMeasure& measure);

/// Orthonormal basis of ker(B_{n,1} U_j Sigma_j), r_n x Delta r_n. Throws
/// RankError(n, j) when the kernel does not have dimension delta_r.
Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& B_n1, const SymmetricFactor& fj, Eigen::Index delta_r, int n,
                             int j);

/// sqrt(D_j) padded with Delta r_{n+1} - Delta r_n zero columns, D_j = I - Psi^T Vhat^T Vhat Psi.
Eigen::MatrixXd closure_E(const Eigen::MatrixXd& Psi, const Eigen::MatrixXd& Vhat, Eigen::Index delta_next, int n,
                          int j);

/// H_ij = Psi_i^T (F_ij - Vhat_i^T Vhat_j) Psi_j
Eigen::MatrixXd closure_H(const Eigen::MatrixXd& Psi_i, const Eigen::MatrixXd& Psi_j, const Eigen::MatrixXd& F_ij,
                          const Eigen::MatrixXd& Vhat_i, const Eigen::MatrixXd& Vhat_j);

/// d = 3 closure: with W_2 = I solves E_2 W_3^T E_3^T = H_23 by completing the
/// known principal block to an orthogonal matrix. Returns (W_2, W_3).
/// Throws ClosureError(n) when the completion is not orthogonal to kClosureTol.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> close_d3(const Eigen::MatrixXd& E2, const Eigen::MatrixXd& E3,
                                                     const Eigen::MatrixXd& H23, int n);

struct MsOptions {
  /// Enables the iterative WOPP closure required for d > 3.
  bool experimental_wopp = false;
  WoppOptions wopp;
  /// On a NumericalError return the degrees completed so far instead of throwing.
  bool keep_partial = false;
};

struct MsDiagnostics {
  /// Mean over i of cond(T_{n,i,i}) for n = 0..N.
  std::vector<double> t_condition;
  /// local_drift() after each committed degree 1..N.
  std::vector<double> drift;
  int fallback_count = 0;
  int d3_closures = 0;
  int wopp_solves = 0;
  std::vector<double> wopp_residuals;
};

struct MsResult {
  RecurrenceData rec;
  MsDiagnostics diagnostics;
  /// Set only with keep_partial: the step n at which the iteration stopped and why.
  int failure_degree = -1;
  std::string failure;
};

/// Canonical recurrence data through degree N for a measure in d >= 2 dimensions.
MsResult ms_run(const DiscreteMeasure& measure, int N, const MsOptions& options = {});

}  // namespace mvop
