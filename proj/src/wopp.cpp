#include "mvop/wopp.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mvop {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Problem {
  const std::vector<MatrixXd>& E;
  const std::vector<std::vector<MatrixXd>>& H;
  int m;
  int q;
  Eigen::Index rows;  // residual length over pairs i < j

  Problem(const std::vector<MatrixXd>& e, const std::vector<std::vector<MatrixXd>>& h)
      : E(e), H(h), m(static_cast<int>(e.size())), q(e.empty() ? 0 : static_cast<int>(e[0].cols())), rows(0) {
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) rows += E[static_cast<std::size_t>(i)].rows() * E[static_cast<std::size_t>(j)].rows();
  }

  const MatrixXd& e(int i) const { return E[static_cast<std::size_t>(i)]; }
  const MatrixXd& h(int i, int j) const { return H[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  Eigen::Index unknowns() const { return static_cast<Eigen::Index>(m - 1) * q * (q - 1) / 2; }
};

std::vector<MatrixXd> products(const Problem& pb, const std::vector<MatrixXd>& W) {
  std::vector<MatrixXd> P;
  for (int i = 0; i < pb.m; ++i) P.push_back(pb.e(i) * W[static_cast<std::size_t>(i)]);
  return P;
}

VectorXd residual_vector(const Problem& pb, const std::vector<MatrixXd>& P) {
  VectorXd r(pb.rows);
  Eigen::Index at = 0;
  for (int i = 0; i < pb.m; ++i) {
    for (int j = i + 1; j < pb.m; ++j) {
      const MatrixXd R = P[static_cast<std::size_t>(i)] * P[static_cast<std::size_t>(j)].transpose() - pb.h(i, j);
      r.segment(at, R.size()) = Eigen::Map<const VectorXd>(R.data(), R.size());
      at += R.size();
    }
  }
  return r;
}

// Derivative of the residual along W_a -> W_a (I + K), K = e_s e_t^T - e_t e_s^T.
MatrixXd jacobian(const Problem& pb, const std::vector<MatrixXd>& P) {
  MatrixXd J = MatrixXd::Zero(pb.rows, pb.unknowns());
  Eigen::Index at = 0;
  for (int i = 0; i < pb.m; ++i) {
    for (int j = i + 1; j < pb.m; ++j) {
      const MatrixXd& Pi = P[static_cast<std::size_t>(i)];
      const MatrixXd& Pj = P[static_cast<std::size_t>(j)];
      const Eigen::Index len = Pi.rows() * Pj.rows();
      Eigen::Index col = 0;
      for (int a = 1; a < pb.m; ++a) {
        for (int s = 0; s < pb.q; ++s) {
          for (int t = s + 1; t < pb.q; ++t, ++col) {
            if (a != i && a != j) continue;
            MatrixXd d = Pi.col(s) * Pj.col(t).transpose() - Pi.col(t) * Pj.col(s).transpose();
            if (a == j) d = -d;
            J.col(col).segment(at, len) = Eigen::Map<const VectorXd>(d.data(), len);
          }
        }
      }
      at += len;
    }
  }
  return J;
}

MatrixXd cayley(const MatrixXd& K) {
  const MatrixXd I = MatrixXd::Identity(K.rows(), K.cols());
  return (I - 0.5 * K).partialPivLu().solve(I + 0.5 * K);
}

std::vector<MatrixXd> retract(const Problem& pb, const std::vector<MatrixXd>& W, const VectorXd& step) {
  std::vector<MatrixXd> out = W;
  Eigen::Index col = 0;
  for (int a = 1; a < pb.m; ++a) {
    MatrixXd K = MatrixXd::Zero(pb.q, pb.q);
    for (int s = 0; s < pb.q; ++s)
      for (int t = s + 1; t < pb.q; ++t, ++col) {
        K(s, t) = step(col);
        K(t, s) = -step(col);
      }
    out[static_cast<std::size_t>(a)] = W[static_cast<std::size_t>(a)] * cayley(K);
  }
  return out;
}

}  // namespace

MatrixXd random_orthogonal(int q, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  MatrixXd g(q, q);
  for (Eigen::Index c = 0; c < q; ++c)
    for (Eigen::Index r = 0; r < q; ++r) g(r, c) = normal(gen);
  Eigen::HouseholderQR<MatrixXd> qr(g);
  MatrixXd Q = qr.householderQ() * MatrixXd::Identity(q, q);
  const MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < q; ++k)
    if (R(k, k) < 0) Q.col(k) *= -1.0;
  return Q;
}

double wopp_residual(const std::vector<MatrixXd>& E, const std::vector<std::vector<MatrixXd>>& H,
                     const std::vector<MatrixXd>& W) {
  const Problem pb(E, H);
  return std::sqrt(2.0) * residual_vector(pb, products(pb, W)).norm();
}

WoppResult solve_wopp(const std::vector<MatrixXd>& E, const std::vector<std::vector<MatrixXd>>& H,
                      const WoppOptions& options) {
  const Problem pb(E, H);
  if (pb.m < 2) throw DomainError("WOPP needs at least two unknown blocks");
  for (int i = 0; i < pb.m; ++i) {
    if (pb.e(i).cols() != pb.q || pb.e(i).rows() > pb.q) throw DomainError("WOPP blocks E_i must be p_i x q with p_i <= q");
    for (int j = i + 1; j < pb.m; ++j)
      if (pb.h(i, j).rows() != pb.e(i).rows() || pb.h(i, j).cols() != pb.e(j).rows())
        throw DomainError("WOPP right-hand side has the wrong shape");
  }

  const MatrixXd I = MatrixXd::Identity(pb.q, pb.q);
  WoppResult best;
  best.W.assign(static_cast<std::size_t>(pb.m), I);
  best.residual = wopp_residual(E, H, best.W);

  constexpr int kWindow = 20;          // iterations between progress checks
  constexpr double kStallRatio = 0.5;  // required objective reduction per window
  int used = 0;
  int restart = 0;
  while (best.residual > options.tol && used < options.max_iter) {
    std::vector<MatrixXd> W(static_cast<std::size_t>(pb.m), I);
    if (restart > 0)
      for (int a = 1; a < pb.m; ++a)
        W[static_cast<std::size_t>(a)] =
            random_orthogonal(pb.q, options.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(restart * pb.m + a));
    std::vector<MatrixXd> P = products(pb, W);
    VectorXd r = residual_vector(pb, P);
    double F = 0.5 * r.squaredNorm();
    double window_start = F;
    double mu = -1.0, nu = 2.0;
    for (int it = 1; used < options.max_iter; ++it) {
      ++used;
      const MatrixXd J = jacobian(pb, P);
      const MatrixXd JtJ = J.transpose() * J;
      const VectorXd g = J.transpose() * r;
      if (mu < 0) mu = 1e-3 * std::max(JtJ.diagonal().maxCoeff(), 1e-12);
      const VectorXd step =
          (JtJ + mu * MatrixXd::Identity(JtJ.rows(), JtJ.cols())).ldlt().solve(-g);
      const auto trial = retract(pb, W, step);
      const auto trial_P = products(pb, trial);
      const VectorXd trial_r = residual_vector(pb, trial_P);
      const double trial_F = 0.5 * trial_r.squaredNorm();
      const double predicted = 0.5 * step.dot(mu * step - g);
      const double rho = predicted > 0 ? (F - trial_F) / predicted : -1.0;
      if (rho > 0 && std::isfinite(trial_F)) {
        W = trial;
        P = trial_P;
        r = trial_r;
        F = trial_F;
        mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
        nu = 2.0;
      } else {
        mu *= nu;
        nu *= 2.0;
      }
      const double res = std::sqrt(4.0 * F);  // both orderings of every pair
      if (res < best.residual) {
        best.W = W;
        best.residual = res;
      }
      if (res <= options.tol) break;
      if (it % kWindow == 0) {
        if (F > kStallRatio * window_start || !std::isfinite(mu) || mu > 1e16) break;
        window_start = F;
      }
    }
    ++restart;
  }
  best.iterations = used;
  best.restarts = std::max(0, restart - 1);
  // Report the residual of the returned matrices exactly.
  best.residual = wopp_residual(E, H, best.W);
  if (best.residual > options.tol)
    throw WoppConvergenceError("WOPP did not reach the residual tolerance", options.degree, best);
  return best;
}

}  // namespace mvop
