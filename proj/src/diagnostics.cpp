#include "mvop/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "mvop/errors.hpp"
#include "mvop/linalg.hpp"
#include "mvop/mindex.hpp"

namespace mvop {

using Eigen::MatrixXd;

double CommutingResidual::max() const { return std::max({cc1, cc2, cc3}); }

MatrixXd gram_error(const BasisEvaluation& values, const DiscreteMeasure& measure) {
  if (values.num_points() != measure.size()) throw DomainError("evaluations do not match the measure's nodes");
  const MatrixXd scaled = values.stacked() * measure.weights().cwiseSqrt().asDiagonal();
  MatrixXd G = MatrixXd::Zero(scaled.rows(), scaled.rows());
  G.selfadjointView<Eigen::Lower>().rankUpdate(scaled);
  G.triangularView<Eigen::StrictlyUpper>() = G.transpose();
  return G - MatrixXd::Identity(G.rows(), G.cols());
}

MatrixXd gram_error(const RecurrenceData& rec, const DiscreteMeasure& measure, int N) {
  const auto R = static_cast<Eigen::Index>(dims(rec.dim(), N).R);
  MatrixXd G = MatrixXd::Zero(R, R);
  const auto& w = measure.weights();
  for (Eigen::Index start = 0; start < measure.size(); start += kNodeChunk) {
    const Eigen::Index len = std::min(kNodeChunk, measure.size() - start);
    const MatrixXd values = evaluate_stacked(rec, measure.nodes().middleRows(start, len), N);
    G.selfadjointView<Eigen::Lower>().rankUpdate(values * w.segment(start, len).cwiseSqrt().asDiagonal());
  }
  G.triangularView<Eigen::StrictlyUpper>() = G.transpose();
  return G - MatrixXd::Identity(R, R);
}

std::vector<CommutingResidual> commuting_residuals(const RecurrenceData& rec) {
  std::vector<CommutingResidual> out;
  const int d = rec.dim();
  for (int n = 0; n < rec.max_degree(); ++n) {
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        CommutingResidual c;
        c.n = n;
        c.i = i;
        c.j = j;
        MatrixXd m1 = rec.B(n + 1, i) * rec.B(n + 1, j).transpose() + rec.A(n + 1, i) * rec.A(n + 1, j) -
                      rec.B(n + 1, j) * rec.B(n + 1, i).transpose() - rec.A(n + 1, j) * rec.A(n + 1, i);
        if (n > 0) {
          m1 += rec.B(n, i).transpose() * rec.B(n, j) - rec.B(n, j).transpose() * rec.B(n, i);
          c.cc2 = linalg::max_abs(rec.B(n, i) * rec.A(n + 1, j) + rec.A(n, i) * rec.B(n, j) -
                                  rec.B(n, j) * rec.A(n + 1, i) - rec.A(n, j) * rec.B(n, i));
          c.cc3 = linalg::max_abs(rec.B(n, i) * rec.B(n + 1, j) - rec.B(n, j) * rec.B(n + 1, i));
        }
        c.cc1 = linalg::max_abs(m1);
        out.push_back(c);
      }
    }
  }
  return out;
}

double max_residual(const std::vector<CommutingResidual>& residuals) {
  double m = 0.0;
  for (const auto& c : residuals) m = std::max(m, c.max());
  return m;
}

std::vector<double> recurrence_t_condition(const RecurrenceData& rec, int N) {
  if (N + 1 > rec.max_degree()) throw DomainError("need recurrence matrices through degree N + 1");
  std::vector<double> out;
  for (int n = 0; n <= N; ++n) {
    double sum = 0.0;
    for (int i = 0; i < rec.dim(); ++i)
      sum += linalg::condition_number_symmetric(rec.B(n + 1, i) * rec.B(n + 1, i).transpose());
    out.push_back(sum / rec.dim());
  }
  return out;
}

ChristoffelValues christoffel(const MatrixXd& stacked_values, int N) {
  ChristoffelValues c;
  c.K = stacked_values.colwise().squaredNorm().transpose() / static_cast<double>(stacked_values.rows());
  for (Eigen::Index k = 0; k < c.K.size(); ++k)
    if (!(c.K(k) > 0)) throw NumericalError("Christoffel kernel is not positive", N);
  c.lambda = c.K.cwiseInverse();
  return c;
}

ChristoffelValues christoffel(const RecurrenceData& rec, const MatrixXd& points, int N) {
  ChristoffelValues out;
  out.K.resize(points.rows());
  out.lambda.resize(points.rows());
  for (Eigen::Index start = 0; start < points.rows(); start += kNodeChunk) {
    const Eigen::Index len = std::min(kNodeChunk, points.rows() - start);
    const auto c = christoffel(evaluate_stacked(rec, points.middleRows(start, len), N), N);
    out.K.segment(start, len) = c.K;
    out.lambda.segment(start, len) = c.lambda;
  }
  return out;
}

ChristoffelMass christoffel_mass(const RecurrenceData& rec, const DiscreteMeasure& measure, int N) {
  const auto c = christoffel(rec, measure.nodes(), N);
  return {measure.weights().dot(c.K), c.K.minCoeff()};
}

}  // namespace mvop
