#include "mvop/univariate.hpp"

#include <cmath>
#include <string>

#include "mvop/errors.hpp"

namespace mvop {

UnivariateRecurrence::UnivariateRecurrence(Eigen::VectorXd a, Eigen::VectorXd b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (b_.size() == 0 || a_.size() != b_.size() - 1)
    throw DomainError("univariate recurrence needs N centres and N+1 widths");
  for (Eigen::Index k = 0; k < b_.size(); ++k)
    if (!(b_(k) > 0) || !std::isfinite(b_(k))) throw DomainError("recurrence widths must be positive and finite");
  if (!a_.allFinite()) throw DomainError("recurrence centres must be finite");
}

double UnivariateRecurrence::a(int n) const {
  if (n < 1 || n > degree()) throw DomainError("a_" + std::to_string(n) + " not stored");
  return a_(n - 1);
}

double UnivariateRecurrence::b(int n) const {
  if (n < 0 || n > degree()) throw DomainError("b_" + std::to_string(n) + " not stored");
  return b_(n);
}

UnivariateRecurrence jacobi_coeffs(int N, double alpha, double beta) {
  if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("Jacobi parameters must exceed -1");
  if (N < 0) throw DomainError("degree must be >= 0");
  const double s = alpha + beta;
  Eigen::VectorXd a(N), b(N + 1);
  b(0) = 1.0;
  // Monic recurrence pi_{k+1} = (x - c_k) pi_k - g_k pi_{k-1}; a_{k+1} = c_k, b_k = sqrt(g_k).
  for (int k = 0; k < N; ++k) {
    double c;
    if (k == 0) {
      c = (beta - alpha) / (s + 2.0);
    } else {
      const double t = 2.0 * k + s;
      c = (beta * beta - alpha * alpha) / (t * (t + 2.0));
    }
    a(k) = c;
  }
  for (int k = 1; k <= N; ++k) {
    double g;
    if (k == 1) {
      g = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + s) * (2.0 + s) * (3.0 + s));
    } else {
      const double t = 2.0 * k + s;
      g = 4.0 * k * (k + alpha) * (k + beta) * (k + s) / (t * t * (t + 1.0) * (t - 1.0));
    }
    b(k) = std::sqrt(g);
  }
  return UnivariateRecurrence(std::move(a), std::move(b));
}

UnivariateRecurrence stieltjes_1d(const DiscreteMeasure& measure, int N) {
  if (measure.dim() != 1) throw DomainError("stieltjes_1d needs a one-dimensional measure");
  if (N < 0) throw DomainError("degree must be >= 0");
  const Eigen::ArrayXd x = measure.coordinate(0).array();
  const Eigen::ArrayXd w = measure.weights().array();

  Eigen::VectorXd a(N), b(N + 1);
  b(0) = std::sqrt(w.sum());
  Eigen::ArrayXd p_prev = Eigen::ArrayXd::Zero(x.size());
  Eigen::ArrayXd p = Eigen::ArrayXd::Constant(x.size(), 1.0 / b(0));
  for (int n = 0; n < N; ++n) {
    const double a_next = (w * x * p * p).sum();
    Eigen::ArrayXd q = (x - a_next) * p;
    if (n > 0) q -= b(n) * p_prev;
    const double b_next = std::sqrt((w * q * q).sum());
    if (!(b_next >= 1e-12 * b(0)))
      throw DegeneracyError("recurrence width vanished; measure supports too few polynomials", n + 1);
    a(n) = a_next;
    b(n + 1) = b_next;
    p_prev = p;
    p = q / b_next;
  }
  return UnivariateRecurrence(std::move(a), std::move(b));
}

Eigen::MatrixXd eval_1d(const UnivariateRecurrence& rec, int n, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (n < 0 || n > rec.degree()) throw DomainError("eval_1d: degree exceeds stored recurrence");
  Eigen::MatrixXd out(n + 1, x.size());
  out.row(0).setConstant(1.0 / rec.b(0));
  for (int k = 1; k <= n; ++k) {
    Eigen::ArrayXd next = (x.array() - rec.a(k)) * out.row(k - 1).transpose().array();
    if (k > 1) next -= rec.b(k - 1) * out.row(k - 2).transpose().array();
    out.row(k) = (next / rec.b(k)).transpose();
  }
  return out;
}

}  // namespace mvop
