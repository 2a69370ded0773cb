#include "mvop/tensor_oracle.hpp"

#include <algorithm>
#include <numeric>

#include "mvop/errors.hpp"

namespace mvop {

RecurrenceData tensor_recurrence(std::span<const UnivariateRecurrence> uni, const MultiIndexSet& set, int N) {
  const int d = set.dim();
  if (static_cast<int>(uni.size()) != d) throw DomainError("need one univariate recurrence per dimension");
  if (N > set.max_degree()) throw DomainError("index set does not reach the requested degree");
  for (const auto& u : uni)
    if (u.degree() < N) throw DomainError("univariate recurrence too short for requested degree");

  RecurrenceData rec(d, N);
  for (int n = 0; n < N; ++n) {
    const auto& lvl = set.level(n);
    for (int i = 0; i < d; ++i) {
      const auto& ui = uni[static_cast<std::size_t>(i)];
      auto& A = rec.A(n + 1, i);
      auto& B = rec.B(n + 1, i);
      for (std::size_t k = 0; k < lvl.size(); ++k) {
        const int ai = lvl[k][i];
        const auto row = static_cast<Eigen::Index>(k);
        A(row, row) = ui.a(ai + 1);
        B(row, static_cast<Eigen::Index>(set.successor(n, k, i))) = ui.b(ai + 1);
      }
    }
  }
  return rec;
}

std::vector<std::vector<Eigen::Index>> canonical_order(const RecurrenceData& rec) {
  std::vector<std::vector<Eigen::Index>> order(static_cast<std::size_t>(rec.max_degree()) + 1);
  order[0] = {0};
  for (int n = 1; n <= rec.max_degree(); ++n) {
    const Eigen::VectorXd diag = rec.stacked_gram(n).diagonal();
    auto& perm = order[static_cast<std::size_t>(n)];
    perm.resize(static_cast<std::size_t>(diag.size()));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    std::stable_sort(perm.begin(), perm.end(), [&](Eigen::Index a, Eigen::Index b) { return diag(a) > diag(b); });
  }
  return order;
}

RecurrenceData canonical_permutation(const RecurrenceData& rec) {
  const auto order = canonical_order(rec);
  RecurrenceData out(rec.dim(), rec.max_degree());
  for (int n = 1; n <= rec.max_degree(); ++n) {
    const auto& rows = order[static_cast<std::size_t>(n - 1)];
    const auto& cols = order[static_cast<std::size_t>(n)];
    for (int i = 0; i < rec.dim(); ++i) {
      const auto& A = rec.A(n, i);
      const auto& B = rec.B(n, i);
      auto& A2 = out.A(n, i);
      auto& B2 = out.B(n, i);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        for (std::size_t l = 0; l < rows.size(); ++l)
          A2(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = A(rows[k], rows[l]);
        for (std::size_t l = 0; l < cols.size(); ++l)
          B2(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = B(rows[k], cols[l]);
      }
    }
    out.set_lambda(n, out.stacked_gram(n).diagonal());
  }
  return out;
}

Eigen::MatrixXd tensor_product_values(std::span<const UnivariateRecurrence> uni, const MultiIndexSet& set, int n,
                                      const Eigen::MatrixXd& points) {
  const int d = set.dim();
  if (points.cols() != d) throw DomainError("points must have d columns");
  std::vector<Eigen::MatrixXd> axis;
  for (int j = 0; j < d; ++j) axis.push_back(eval_1d(uni[static_cast<std::size_t>(j)], n, points.col(j)));
  const auto indices = set.flattened(n);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(indices.size()), points.rows());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    Eigen::ArrayXd v = Eigen::ArrayXd::Ones(points.rows());
    for (int j = 0; j < d; ++j) v *= axis[static_cast<std::size_t>(j)].row(indices[r][j]).transpose().array();
    out.row(static_cast<Eigen::Index>(r)) = v.transpose();
  }
  return out;
}

}  // namespace mvop
