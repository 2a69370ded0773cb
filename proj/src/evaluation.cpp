#include "mvop/evaluation.hpp"

#include "mvop/errors.hpp"
#include "mvop/linalg.hpp"

namespace mvop {

Eigen::MatrixXd BasisEvaluation::stacked() const {
  Eigen::Index rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  Eigen::MatrixXd out(rows, num_points());
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.middleRows(at, b.rows()) = b;
    at += b.rows();
  }
  return out;
}

Eigen::MatrixXd canonicalize_degree(RecurrenceData& rec, int n, const Eigen::MatrixXd& u_prev) {
  const int d = rec.dim();
  if (u_prev.size() > 0) {
    for (int i = 0; i < d; ++i) {
      rec.A(n, i) = linalg::symmetrized(u_prev * rec.A(n, i) * u_prev.transpose());
      rec.B(n, i) = u_prev * rec.B(n, i);
    }
  }
  const auto eig = linalg::eig_descending(rec.stacked_gram(n));
  const double top = eig.values(0);
  const double bottom = eig.values(eig.values.size() - 1);
  if (!(top > 0) || !(bottom > kLambdaRankTol * top))
    throw RankError("B_n^T B_n is not positive definite", n);
  for (int i = 0; i < d; ++i) rec.B(n, i) = rec.B(n, i) * eig.vectors;
  rec.set_lambda(n, eig.values);
  return eig.vectors.transpose();
}

RecurrenceData to_canonical(const RecurrenceData& rec) {
  RecurrenceData out = rec;
  out.clear_lambda();
  Eigen::MatrixXd u;
  for (int n = 1; n <= out.max_degree(); ++n) u = canonicalize_degree(out, n, u);
  return out;
}

Eigen::MatrixXd next_block(const RecurrenceData& rec, int n, const Eigen::Ref<const Eigen::MatrixXd>& points,
                           const Eigen::MatrixXd& p_n, const Eigen::MatrixXd& p_prev) {
  const int d = rec.dim();
  if (!rec.has_lambda(n + 1)) throw DomainError("evaluation requires canonical recurrence matrices");
  const Eigen::Index rows = rec.level_size(n + 1);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(rows, points.rows());
  for (int i = 0; i < d; ++i) {
    // B^T (x_i p_n - A p_n - B_{n,i}^T p_{n-1})
    Eigen::MatrixXd mod = p_n.array().rowwise() * points.col(i).transpose().array();
    mod.noalias() -= rec.A(n + 1, i) * p_n;
    if (n > 0) mod.noalias() -= rec.B(n, i).transpose() * p_prev;
    acc.noalias() += rec.B(n + 1, i).transpose() * mod;
  }
  const Eigen::VectorXd& lam = rec.lambda(n + 1);
  const double top = lam(0);
  for (Eigen::Index k = 0; k < lam.size(); ++k)
    if (!(lam(k) > kLambdaRankTol * top)) throw RankError("singular Lambda entry", n + 1);
  return lam.cwiseInverse().asDiagonal() * acc;
}

Eigen::MatrixXd evaluate_stacked(const RecurrenceData& rec, const Eigen::Ref<const Eigen::MatrixXd>& points,
                                 int n_max) {
  if (n_max < 0 || n_max > rec.max_degree()) throw DomainError("evaluation degree exceeds recurrence");
  if (points.cols() != rec.dim()) throw DomainError("points must have d columns");
  Eigen::Index total = 0;
  for (int m = 0; m <= n_max; ++m) total += rec.level_size(m);
  Eigen::MatrixXd out(total, points.rows());
  Eigen::MatrixXd prev, cur = Eigen::MatrixXd::Ones(1, points.rows());
  out.topRows(1) = cur;
  Eigen::Index at = 1;
  for (int n = 0; n < n_max; ++n) {
    Eigen::MatrixXd next = next_block(rec, n, points, cur, prev);
    out.middleRows(at, next.rows()) = next;
    at += next.rows();
    prev = std::move(cur);
    cur = std::move(next);
  }
  return out;
}

BasisEvaluation evaluate(const RecurrenceData& rec, const Eigen::MatrixXd& points, int n_max) {
  if (n_max < 0 || n_max > rec.max_degree()) throw DomainError("evaluation degree exceeds recurrence");
  if (points.cols() != rec.dim()) throw DomainError("points must have d columns");
  BasisEvaluation ev;
  ev.points = points;
  ev.blocks.push_back(Eigen::MatrixXd::Ones(1, points.rows()));
  for (int n = 0; n < n_max; ++n) {
    const Eigen::MatrixXd empty;
    ev.blocks.push_back(next_block(rec, n, points, ev.blocks[static_cast<std::size_t>(n)],
                                   n > 0 ? ev.blocks[static_cast<std::size_t>(n - 1)] : empty));
  }
  return ev;
}

double apply_ttr_residual(const RecurrenceData& rec, const BasisEvaluation& evaluation, int n, int i) {
  if (n < 0 || n + 1 > evaluation.max_degree() || n + 1 > rec.max_degree())
    throw DomainError("residual needs evaluations and matrices through degree n + 1");
  const auto& p_n = evaluation.blocks[static_cast<std::size_t>(n)];
  Eigen::MatrixXd r = p_n.array().rowwise() * evaluation.points.col(i).transpose().array();
  r.noalias() -= rec.B(n + 1, i) * evaluation.blocks[static_cast<std::size_t>(n + 1)];
  r.noalias() -= rec.A(n + 1, i) * p_n;
  if (n > 0) r.noalias() -= rec.B(n, i).transpose() * evaluation.blocks[static_cast<std::size_t>(n - 1)];
  return linalg::max_abs(r);
}

}  // namespace mvop
