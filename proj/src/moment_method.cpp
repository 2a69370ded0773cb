#include "mvop/moment_method.hpp"

#include <algorithm>
#include <cmath>

#include "mvop/errors.hpp"
#include "mvop/linalg.hpp"
#include "mvop/univariate.hpp"

namespace mvop {

namespace {

Eigen::Index total(int d, int n) { return n < 0 ? 0 : static_cast<Eigen::Index>(dims(d, n).R); }

BasisEvaluation split_blocks(const Eigen::MatrixXd& stacked, const Eigen::MatrixXd& points, int d, int n) {
  BasisEvaluation ev;
  ev.points = points;
  for (int m = 0; m <= n; ++m) {
    const Eigen::Index lo = total(d, m - 1), hi = total(d, m);
    ev.blocks.push_back(stacked.middleRows(lo, hi - lo));
  }
  return ev;
}

}  // namespace

SpanningBasis::SpanningBasis(Kind kind, int d, int max_degree, std::vector<std::pair<double, double>> box)
    : kind_(kind), set_(d, max_degree), box_(std::move(box)) {}

SpanningBasis SpanningBasis::monomial(int d, int max_degree) { return SpanningBasis(Kind::monomial, d, max_degree, {}); }

SpanningBasis SpanningBasis::tensor_legendre(std::vector<std::pair<double, double>> box, int max_degree) {
  for (const auto& [lo, hi] : box)
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("bounding box must have positive width");
  const int d = static_cast<int>(box.size());
  return SpanningBasis(Kind::tensor_legendre, d, max_degree, std::move(box));
}

SpanningBasis SpanningBasis::tensor_legendre(const DiscreteMeasure& measure, int max_degree) {
  return tensor_legendre(measure.bounding_box(), max_degree);
}

Eigen::MatrixXd SpanningBasis::evaluate(const Eigen::Ref<const Eigen::MatrixXd>& points, int n) const {
  const int d = dim();
  if (points.cols() != d) throw DomainError("points must have d columns");
  if (n < 0 || n > max_degree()) throw DomainError("spanning basis degree out of range");
  const Eigen::Index m = points.rows();

  // axis[j] row k: the degree-k univariate factor along coordinate j.
  std::vector<Eigen::MatrixXd> axis(static_cast<std::size_t>(d));
  if (kind_ == Kind::monomial) {
    for (int j = 0; j < d; ++j) {
      auto& pw = axis[static_cast<std::size_t>(j)];
      pw.resize(n + 1, m);
      pw.row(0).setOnes();
      for (int k = 1; k <= n; ++k) pw.row(k) = pw.row(k - 1).cwiseProduct(points.col(j).transpose());
    }
  } else {
    const UnivariateRecurrence legendre = jacobi_coeffs(n, 0.0, 0.0);
    for (int j = 0; j < d; ++j) {
      const auto [lo, hi] = box_[static_cast<std::size_t>(j)];
      const Eigen::VectorXd t = ((2.0 * points.col(j).array() - (lo + hi)) / (hi - lo)).matrix();
      axis[static_cast<std::size_t>(j)] = eval_1d(legendre, n, t);
    }
  }

  Eigen::MatrixXd out(total(d, n), m);
  Eigen::Index row = 0;
  for (int deg = 0; deg <= n; ++deg) {
    for (const auto& alpha : set_.level(deg)) {
      Eigen::ArrayXXd v = axis[0].row(alpha[0]).array();
      for (int j = 1; j < d; ++j) v *= axis[static_cast<std::size_t>(j)].row(alpha[j]).array();
      out.row(row++) = v.matrix();
    }
  }
  return out;
}

GramData build_gram(const SpanningBasis& basis, const DiscreteMeasure& measure, int N) {
  const int d = basis.dim();
  if (measure.dim() != d) throw DomainError("measure and basis dimensions differ");
  if (N < 0 || N > basis.max_degree()) throw DomainError("Gram degree exceeds the spanning basis");
  GramData gram;
  gram.d = d;
  gram.N = N;
  const Eigen::Index R = total(d, N), R_prev = total(d, N - 1);
  gram.G = Eigen::MatrixXd::Zero(R, R);
  gram.Gx.assign(static_cast<std::size_t>(d), Eigen::MatrixXd::Zero(R_prev, R));

  const auto& nodes = measure.nodes();
  const auto& w = measure.weights();
  for (Eigen::Index start = 0; start < measure.size(); start += kNodeChunk) {
    const Eigen::Index len = std::min(kNodeChunk, measure.size() - start);
    const Eigen::MatrixXd phi = basis.evaluate(nodes.middleRows(start, len), N);
    const Eigen::MatrixXd scaled = phi * w.segment(start, len).cwiseSqrt().asDiagonal();
    gram.G.selfadjointView<Eigen::Lower>().rankUpdate(scaled);
    for (int i = 0; i < d; ++i) {
      const Eigen::VectorXd wx = w.segment(start, len).cwiseProduct(nodes.col(i).segment(start, len));
      gram.Gx[static_cast<std::size_t>(i)].noalias() += phi.topRows(R_prev) * wx.asDiagonal() * phi.transpose();
    }
  }
  gram.G.triangularView<Eigen::StrictlyUpper>() = gram.G.transpose();
  if (!gram.G.allFinite()) throw ConditioningError("non-finite Gram entries", N);
  for (const auto& g : gram.Gx)
    if (!g.allFinite()) throw ConditioningError("non-finite weighted Gram entries", N);

  factor_gram(gram, basis.index_set());
  return gram;
}

void factor_gram(GramData& gram, const MultiIndexSet& set) {
  const Eigen::Index R = gram.G.rows();
  gram.L = Eigen::MatrixXd::Zero(R, R);
  gram.breakdown_degree = -1;
  auto& L = gram.L;
  for (Eigen::Index j = 0; j < R; ++j) {
    const double pivot = gram.G(j, j) - L.row(j).head(j).squaredNorm();
    if (!(pivot > 0) || !std::isfinite(pivot)) {
      gram.breakdown_degree = set.degree_of(static_cast<std::size_t>(j));
      break;
    }
    const double ljj = std::sqrt(pivot);
    L(j, j) = ljj;
    const Eigen::Index below = R - j - 1;
    if (below > 0) {
      L.col(j).tail(below) = (gram.G.col(j).tail(below) - L.bottomLeftCorner(below, j) * L.row(j).head(j).transpose()) / ljj;
    }
  }
  const Eigen::Index valid = total(gram.d, gram.factored_degree());
  gram.L_inv = L.topLeftCorner(valid, valid)
                   .triangularView<Eigen::Lower>()
                   .solve(Eigen::MatrixXd::Identity(valid, valid));
}

BasisEvaluation orthonormalize(const GramData& gram, const SpanningBasis& basis, const Eigen::MatrixXd& points,
                               int n) {
  if (n > gram.factored_degree())
    throw ConditioningError("Gram matrix is not positive definite", gram.breakdown_degree);
  const Eigen::Index R = total(gram.d, n);
  const Eigen::MatrixXd values =
      gram.L_inv.topLeftCorner(R, R).triangularView<Eigen::Lower>() * basis.evaluate(points, n);
  return split_blocks(values, points, gram.d, n);
}

RecurrenceData extract_recurrence(const GramData& gram, int N) {
  if (N > gram.N) throw DomainError("recurrence degree exceeds the Gram data");
  if (N > gram.factored_degree())
    throw ConditioningError("Gram matrix is not positive definite", gram.breakdown_degree);
  const int d = gram.d;
  RecurrenceData rec(d, N);
  for (int n = 0; n < N; ++n) {
    const Eigen::Index lo = total(d, n - 1), R = total(d, n), R_next = total(d, n + 1);
    const Eigen::MatrixXd lt = gram.L_inv.block(lo, 0, R - lo, R);
    const Eigen::MatrixXd lt_next = gram.L_inv.block(R, 0, R_next - R, R_next);
    for (int i = 0; i < d; ++i) {
      const auto& gx = gram.Gx[static_cast<std::size_t>(i)];
      rec.A(n + 1, i) = lt * gx.topLeftCorner(R, R) * lt.transpose();
      rec.B(n + 1, i) = lt * gx.topLeftCorner(R, R_next) * lt_next.transpose();
    }
  }
  return rec;
}

std::vector<double> gram_condition_numbers(const GramData& gram, const MultiIndexSet& set) {
  std::vector<double> out;
  for (int n = 0; n <= gram.N; ++n) {
    const auto R = static_cast<Eigen::Index>(set.total_size(n));
    out.push_back(linalg::condition_number_symmetric(gram.G.topLeftCorner(R, R)));
  }
  return out;
}

}  // namespace mvop
