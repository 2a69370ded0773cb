#include "mvop/stieltjes.hpp"

#include <algorithm>
#include <cmath>

#include "mvop/errors.hpp"
#include "mvop/evaluation.hpp"
#include "mvop/linalg.hpp"
#include "mvop/mindex.hpp"
#include "mvop/moment_method.hpp"

namespace mvop {

using Eigen::MatrixXd;
using Eigen::VectorXd;

StieltjesState::StieltjesState(const DiscreteMeasure& measure) : measure_(&measure), rec_(measure.dim(), 0) {
  if (std::abs(measure.total_mass() - 1.0) > 1e-12) throw DomainError("Stieltjes iteration needs a unit-mass measure");
  cur_ = MatrixXd::Ones(1, measure.size());
}

MatrixXd StieltjesState::compute_S(int i) const {
  const auto& w = measure_->weights();
  const auto x = measure_->coordinate(i);
  MatrixXd S = MatrixXd::Zero(cur_.rows(), cur_.rows());
  for (Eigen::Index start = 0; start < measure_->size(); start += kNodeChunk) {
    const Eigen::Index len = std::min(kNodeChunk, measure_->size() - start);
    const VectorXd wx = w.segment(start, len).cwiseProduct(x.segment(start, len));
    const auto p = cur_.middleCols(start, len);
    S.noalias() += p * wx.asDiagonal() * p.transpose();
  }
  return linalg::symmetrized(S);
}

std::vector<std::vector<MatrixXd>> StieltjesState::compute_T(const std::vector<MatrixXd>& A) const {
  const int d = dim();
  const int n = degree();
  const Eigen::Index r = cur_.rows();
  std::vector<std::vector<MatrixXd>> T(static_cast<std::size_t>(d), std::vector<MatrixXd>(static_cast<std::size_t>(d)));
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = MatrixXd::Zero(r, r);

  const auto& w = measure_->weights();
  std::vector<MatrixXd> pt(static_cast<std::size_t>(d));
  for (Eigen::Index start = 0; start < measure_->size(); start += kNodeChunk) {
    const Eigen::Index len = std::min(kNodeChunk, measure_->size() - start);
    const VectorXd sw = w.segment(start, len).cwiseSqrt();
    const auto p = cur_.middleCols(start, len);
    for (int i = 0; i < d; ++i) {
      auto& q = pt[static_cast<std::size_t>(i)];
      q = p * measure_->coordinate(i).segment(start, len).asDiagonal();
      q.noalias() -= A[static_cast<std::size_t>(i)] * p;
      if (n > 0) q.noalias() -= rec_.B(n, i).transpose() * prev_.middleCols(start, len);
      q = q * sw.asDiagonal();
    }
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j)
        T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].noalias() +=
            pt[static_cast<std::size_t>(i)] * pt[static_cast<std::size_t>(j)].transpose();
  }
  for (int i = 0; i < d; ++i) {
    auto& Tii = T[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    Tii = linalg::symmetrized(Tii);
    for (int j = i + 1; j < d; ++j)
      T[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
          T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].transpose();
  }
  return T;
}

void StieltjesState::commit(const std::vector<MatrixXd>& A, const std::vector<MatrixXd>& B) {
  const int n = degree();
  rec_.grow();
  for (int i = 0; i < dim(); ++i) {
    rec_.A(n + 1, i) = A[static_cast<std::size_t>(i)];
    rec_.B(n + 1, i) = B[static_cast<std::size_t>(i)];
  }
  MatrixXd next(rec_.level_size(n + 1), measure_->size());
  try {
    canonicalize_degree(rec_, n + 1, MatrixXd());
    const MatrixXd empty;
    for (Eigen::Index start = 0; start < measure_->size(); start += kNodeChunk) {
      const Eigen::Index len = std::min(kNodeChunk, measure_->size() - start);
      next.middleCols(start, len) = next_block(rec_, n, measure_->nodes().middleRows(start, len),
                                               cur_.middleCols(start, len),
                                               n > 0 ? MatrixXd(prev_.middleCols(start, len)) : empty);
    }
  } catch (...) {
    rec_ = rec_.truncated(n);
    throw;
  }
  prev_ = std::move(cur_);
  cur_ = std::move(next);
}

double StieltjesState::local_drift() const {
  const auto& w = measure_->weights();
  const Eigen::Index rc = cur_.rows(), rp = prev_.rows();
  MatrixXd cc = MatrixXd::Zero(rc, rc), pc = MatrixXd::Zero(rp, rc), pp = MatrixXd::Zero(rp, rp);
  for (Eigen::Index start = 0; start < measure_->size(); start += kNodeChunk) {
    const Eigen::Index len = std::min(kNodeChunk, measure_->size() - start);
    const VectorXd sw = w.segment(start, len).cwiseSqrt();
    const MatrixXd c = cur_.middleCols(start, len) * sw.asDiagonal();
    cc.noalias() += c * c.transpose();
    if (rp > 0) {
      const MatrixXd p = prev_.middleCols(start, len) * sw.asDiagonal();
      pc.noalias() += p * c.transpose();
      pp.noalias() += p * p.transpose();
    }
  }
  double drift = linalg::max_abs(cc - MatrixXd::Identity(rc, rc));
  if (rp > 0) drift = std::max({drift, linalg::max_abs(pc), linalg::max_abs(pp - MatrixXd::Identity(rp, rp))});
  return drift;
}

SymmetricFactor factor_symmetric(const MatrixXd& T_ii, int n, int i) {
  const auto eig = linalg::eig_descending(linalg::symmetrized(T_ii));
  SymmetricFactor f;
  f.U = eig.vectors;
  f.sigma = eig.values.cwiseMax(0.0).cwiseSqrt();
  const double top = f.sigma(0);
  if (!(top > 0) || !(f.sigma(f.sigma.size() - 1) >= kStieltjesRankTol * top))
    throw RankError("T_{n,i,i} is rank deficient", n, i);
  return f;
}

MatrixXd compute_Vhat(const SymmetricFactor& f1, const SymmetricFactor& fj, const MatrixXd& T_1j) {
  return f1.sigma.cwiseInverse().asDiagonal() * (f1.U.transpose() * T_1j * fj.U) *
         fj.sigma.cwiseInverse().asDiagonal();
}

VectorXd close_d2(const MatrixXd& Vhat, int n) {
  const MatrixXd rhs = MatrixXd::Identity(Vhat.cols(), Vhat.cols()) - Vhat.transpose() * Vhat;
  VectorXd y;
  if (!linalg::rank_one_factor(rhs, kPsdNegativeTol, y))
    throw ConsistencyError("I - Vhat^T Vhat is not positive semidefinite", n, 1);
  return y;
}

std::vector<MatrixXd> fallback_n0(const DiscreteMeasure& measure) {
  const int d = measure.dim();
  const GramData gram = build_gram(SpanningBasis::monomial(d, 1), measure, 1);
  if (gram.factored_degree() < 1) throw ConditioningError("degree-1 moment matrix is not positive definite", 0);
  const RecurrenceData rec = extract_recurrence(gram, 1);
  std::vector<MatrixXd> B;
  for (int i = 0; i < d; ++i) B.push_back(rec.B(1, i));
  return B;
}

MatrixXd kernel_basis(const MatrixXd& B_n1, const SymmetricFactor& fj, Eigen::Index delta_r, int n, int j) {
  const MatrixXd K = B_n1 * fj.U * fj.sigma.asDiagonal();
  Eigen::JacobiSVD<MatrixXd> svd(K, Eigen::ComputeFullV);
  const VectorXd& s = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > kStieltjesRankTol * s(0)) ++rank;
  if (K.cols() - rank != delta_r) throw RankError("kernel of K_{n+1,j} has the wrong dimension", n, j);
  MatrixXd psi = svd.matrixV().rightCols(delta_r);
  linalg::fix_column_signs(psi);
  return psi;
}

MatrixXd closure_E(const MatrixXd& Psi, const MatrixXd& Vhat, Eigen::Index delta_next, int n, int j) {
  const Eigen::Index p = Psi.cols();
  const MatrixXd VP = Vhat * Psi;
  const MatrixXd D = MatrixXd::Identity(p, p) - VP.transpose() * VP;
  MatrixXd root;
  if (!linalg::psd_sqrt(D, kPsdNegativeTol, root)) throw ConsistencyError("D_j is not positive semidefinite", n, j);
  MatrixXd E = MatrixXd::Zero(p, delta_next);
  E.leftCols(p) = root;
  return E;
}

MatrixXd closure_H(const MatrixXd& Psi_i, const MatrixXd& Psi_j, const MatrixXd& F_ij, const MatrixXd& Vhat_i,
                   const MatrixXd& Vhat_j) {
  return Psi_i.transpose() * (F_ij - Vhat_i.transpose() * Vhat_j) * Psi_j;
}

std::pair<MatrixXd, MatrixXd> close_d3(const MatrixXd& E2, const MatrixXd& E3, const MatrixXd& H23, int n) {
  const Eigen::Index p = E2.rows(), q = E2.cols();
  if (q != p + 1 || E3.rows() != p || E3.cols() != q) throw DomainError("d = 3 closure needs E_j of size p x (p + 1)");

  // E_j = X_j (Y_j 0) Z_j^T with X_j = Q_j, Y_j = diag(s_j), Z_j = diag(Q_j, 1).
  auto factor = [&](const MatrixXd& E, MatrixXd& Z, VectorXd& s) {
    const auto eig = linalg::eig_descending(linalg::symmetrized(E.leftCols(p)));
    s = eig.values;
    if (!(s(p - 1) > 0)) throw ClosureError("sqrt(D_j) is singular", n);
    Z = MatrixXd::Identity(q, q);
    Z.topLeftCorner(p, p) = eig.vectors;
  };
  MatrixXd Z2, Z3;
  VectorXd s2, s3;
  factor(E2, Z2, s2);
  factor(E3, Z3, s3);
  const MatrixXd X2 = Z2.topLeftCorner(p, p), X3 = Z3.topLeftCorner(p, p);

  MatrixXd W = MatrixXd::Zero(q, q);
  const MatrixXd W11 = s2.cwiseInverse().asDiagonal() * (X2.transpose() * H23 * X3) * s3.cwiseInverse().asDiagonal();
  VectorXd w;
  if (!linalg::rank_one_factor(MatrixXd::Identity(p, p) - W11.transpose() * W11, kPsdNegativeTol, w))
    throw ClosureError("principal block of W is not a contraction", n);
  W.topLeftCorner(p, p) = W11;
  W.row(p).head(p) = w.transpose();
  Eigen::HouseholderQR<MatrixXd> qr(W.leftCols(p));
  VectorXd v = qr.householderQ() * VectorXd::Unit(q, p);
  linalg::fix_sign(v);
  W.col(p) = v;
  if (linalg::max_abs(W.transpose() * W - MatrixXd::Identity(q, q)) > kClosureTol)
    throw ClosureError("completed W is not orthogonal", n);

  const MatrixXd G = Z2 * W * Z3.transpose();  // = W_3^T
  return {MatrixXd::Identity(q, q), G.transpose()};
}

namespace {

double mean_condition(const std::vector<std::vector<MatrixXd>>& T) {
  double sum = 0.0;
  for (std::size_t i = 0; i < T.size(); ++i) sum += linalg::condition_number_symmetric(T[i][i]);
  return sum / static_cast<double>(T.size());
}

// One step n -> n + 1 of the iteration.
void advance(StieltjesState& state, const DiscreteMeasure& measure, const MsOptions& options, MsDiagnostics& diag) {
  const int n = state.degree();
  const int d = state.dim();
  const auto rn = static_cast<Eigen::Index>(dims(d, n).r);
  const auto r_next = static_cast<Eigen::Index>(dims(d, n + 1).r);
  std::vector<MatrixXd> A;
  for (int i = 0; i < d; ++i) A.push_back(state.compute_S(i));
  const auto T = state.compute_T(A);
  diag.t_condition.push_back(mean_condition(T));

  std::vector<MatrixXd> B(static_cast<std::size_t>(d));
  if (d > 2 && n == 0) {
    B = fallback_n0(measure);
    ++diag.fallback_count;
  } else {
    std::vector<SymmetricFactor> f;
    for (int i = 0; i < d; ++i) f.push_back(factor_symmetric(T[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)], n, i));
    std::vector<MatrixXd> Vhat(static_cast<std::size_t>(d));
    std::vector<MatrixXd> Vtilde(static_cast<std::size_t>(d));  // Delta r_{n+1} x r_n
    for (int j = 1; j < d; ++j) Vhat[static_cast<std::size_t>(j)] = compute_Vhat(f[0], f[static_cast<std::size_t>(j)], T[0][static_cast<std::size_t>(j)]);

    if (d == 2) {
      Vtilde[1] = close_d2(Vhat[1], n).transpose();
    } else {
      const auto delta_r = static_cast<Eigen::Index>(dims(d, n).delta_r);
      const auto delta_next = static_cast<Eigen::Index>(dims(d, n + 1).delta_r);
      std::vector<MatrixXd> Psi(static_cast<std::size_t>(d)), E(static_cast<std::size_t>(d));
      for (int j = 1; j < d; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        Psi[sj] = kernel_basis(state.recurrence().B(n, 0), f[sj], delta_r, n, j);
        E[sj] = closure_E(Psi[sj], Vhat[sj], delta_next, n, j);
      }
      auto H = [&](int i, int j) {
        const auto si = static_cast<std::size_t>(i), sj = static_cast<std::size_t>(j);
        return closure_H(Psi[si], Psi[sj], compute_Vhat(f[si], f[sj], T[si][sj]), Vhat[si], Vhat[sj]);
      };
      std::vector<MatrixXd> W(static_cast<std::size_t>(d));
      if (d == 3) {
        auto [W2, W3] = close_d3(E[1], E[2], H(1, 2), n);
        W[1] = std::move(W2);
        W[2] = std::move(W3);
        ++diag.d3_closures;
      } else {
        std::vector<MatrixXd> Es(E.begin() + 1, E.end());
        std::vector<std::vector<MatrixXd>> Hs(static_cast<std::size_t>(d - 1),
                                              std::vector<MatrixXd>(static_cast<std::size_t>(d - 1)));
        for (int i = 1; i < d; ++i)
          for (int j = i + 1; j < d; ++j) Hs[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = H(i, j);
        WoppOptions wopt = options.wopp;
        wopt.degree = n;
        const WoppResult res = solve_wopp(Es, Hs, wopt);
        for (int j = 1; j < d; ++j) W[static_cast<std::size_t>(j)] = res.W[static_cast<std::size_t>(j - 1)];
        ++diag.wopp_solves;
        diag.wopp_residuals.push_back(res.residual);
      }
      for (int j = 1; j < d; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        Vtilde[sj] = (Psi[sj] * E[sj] * W[sj]).transpose();
      }
    }

    MatrixXd V1t = MatrixXd::Zero(rn, r_next);
    V1t.leftCols(rn).setIdentity();
    B[0] = f[0].U * f[0].sigma.asDiagonal() * V1t;
    for (int j = 1; j < d; ++j) {
      const auto sj = static_cast<std::size_t>(j);
      MatrixXd Vt(rn, r_next);
      Vt.leftCols(rn) = Vhat[sj].transpose();
      Vt.rightCols(r_next - rn) = Vtilde[sj].transpose();
      B[sj] = f[sj].U * f[sj].sigma.asDiagonal() * Vt;
    }
  }
  state.commit(A, B);
  diag.drift.push_back(state.local_drift());
}

}  // namespace

MsResult ms_run(const DiscreteMeasure& input, int N, const MsOptions& options) {
  const int d = input.dim();
  if (d < 2) throw DomainError("the multivariate Stieltjes iteration needs d >= 2");
  if (N < 0) throw DomainError("degree must be >= 0");
  if (d > 3 && N > 1 && !options.experimental_wopp)
    throw DomainError("d > 3 needs the experimental WOPP closure to be enabled");
  const DiscreteMeasure measure = input.normalized();

  StieltjesState state(measure);
  MsDiagnostics diag;
  MsResult result;
  for (int n = 0; n < N; ++n) {
    try {
      advance(state, measure, options, diag);
    } catch (const NumericalError& e) {
      if (!options.keep_partial) throw;
      result.failure_degree = n;
      result.failure = e.what();
      break;
    }
  }

  if (result.failure_degree < 0) {
    std::vector<MatrixXd> A;
    for (int i = 0; i < d; ++i) A.push_back(state.compute_S(i));
    diag.t_condition.push_back(mean_condition(state.compute_T(A)));
  }
  result.rec = state.recurrence();
  result.diagnostics = std::move(diag);
  return result;
}

}  // namespace mvop
