#pragma once

#include <vector>

#include <Eigen/Dense>

namespace mvop {

/// Recurrence matrices of an orthonormal basis through degree N:
///   x_i p_n = B_{n+1,i} p_{n+1} + A_{n+1,i} p_n + B_{n,i}^T p_{n-1}
/// A(n, i) is r_{n-1} x r_{n-1}, B(n, i) is r_{n-1} x r_n, for 1 <= n <= N and
/// 0 <= i < d. lambda(n) holds the diagonal of sum_i B(n,i)^T B(n,i) when the
/// data is in canonical form, and is empty otherwise.
class RecurrenceData {
 public:
  RecurrenceData() = default;
  /// Zero matrices of the right shapes, no Lambda.
  RecurrenceData(int d, int N);

  int dim() const { return d_; }
  int max_degree() const { return N_; }
  /// r_n for this dimension.
  Eigen::Index level_size(int n) const;

  Eigen::MatrixXd& A(int n, int i) { return A_[slot(n, i)]; }
  const Eigen::MatrixXd& A(int n, int i) const { return A_[slot(n, i)]; }
  Eigen::MatrixXd& B(int n, int i) { return B_[slot(n, i)]; }
  const Eigen::MatrixXd& B(int n, int i) const { return B_[slot(n, i)]; }

  bool has_lambda(int n) const;
  const Eigen::VectorXd& lambda(int n) const;
  void set_lambda(int n, Eigen::VectorXd values);
  void clear_lambda();
  /// Lambda present for every degree.
  bool canonical() const;

  /// B_n^T B_n = sum_i B(n,i)^T B(n,i)
  Eigen::MatrixXd stacked_gram(int n) const;
  /// Vertically stacked (B(n,0); ...; B(n,d-1)).
  Eigen::MatrixXd stacked(int n) const;

  /// Copy restricted to degrees <= n.
  RecurrenceData truncated(int n) const;
  /// Appends a zero-initialised degree N + 1.
  void grow();

  bool all_finite() const;

 private:
  std::size_t slot(int n, int i) const;

  int d_ = 0;
  int N_ = 0;
  std::vector<Eigen::MatrixXd> A_;
  std::vector<Eigen::MatrixXd> B_;
  std::vector<Eigen::VectorXd> lambda_;
};

}  // namespace mvop
