#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "generators.hpp"
#include "mvop/diagnostics.hpp"
#include "mvop/errors.hpp"
#include "mvop/stieltjes.hpp"

namespace {

Eigen::MatrixXd identity(Eigen::Index n) { return Eigen::MatrixXd::Identity(n, n); }

}  // namespace

TEST_CASE("first step quantities on the uniform square") {
  const auto mu = fixture::legendre_box(2, 6);
  mvop::StieltjesState state(mu);
  CHECK(state.degree() == 0);
  CHECK(state.previous().size() == 0);
  std::vector<Eigen::MatrixXd> A;
  for (int i = 0; i < 2; ++i) {
    A.push_back(state.compute_S(i));
    CHECK(std::abs(A.back()(0, 0)) <= 1e-16);
  }
  const auto T = state.compute_T(A);
  CHECK(T[0][0](0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(T[1][1](0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(std::abs(T[0][1](0, 0)) <= 1e-16);
  CHECK(T[1][0] == T[0][1].transpose());

  const auto f0 = mvop::factor_symmetric(T[0][0], 0, 0);
  CHECK(std::abs(f0.U(0, 0)) == 1.0);
  CHECK(f0.sigma(0) == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-14));
  const auto f1 = mvop::factor_symmetric(T[1][1], 0, 1);
  const Eigen::MatrixXd Vhat = mvop::compute_Vhat(f0, f1, T[0][1]);
  CHECK(std::abs(Vhat(0, 0)) <= 1e-15);
  const Eigen::VectorXd y = mvop::close_d2(Vhat, 0);
  CHECK(std::abs(y(0)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("S vanishes on symmetric measures") {
  const auto mu = fixture::legendre_box(2, 8);
  const auto res = mvop::ms_run(mu, 5);
  for (int n = 1; n <= 5; ++n)
    for (int i = 0; i < 2; ++i) CHECK(fixture::max_abs(res.rec.A(n, i)) <= 1e-14);
}

TEST_CASE("T_{n,i,j} is B_{n+1,i} B_{n+1,j}^T for the Legendre basis") {
  const auto mu = fixture::legendre_box(2, 9);
  const auto ref = fixture::legendre_canonical(2, 6);
  mvop::StieltjesState state(mu);
  // equal Lambda entries leave the committed basis free up to a rotation V within
  // eigenspaces; p_n = V^T p_n(oracle), so the oracle matrices are carried into that frame
  Eigen::MatrixXd V = identity(1);
  for (int n = 0; n <= 5; ++n) {
    std::vector<Eigen::MatrixXd> A, B;
    for (int i = 0; i < 2; ++i) {
      A.push_back(state.compute_S(i));
      CHECK(fixture::max_abs(A.back() - V.transpose() * ref.A(n + 1, i) * V) <= 1e-13);
      B.push_back(V.transpose() * ref.B(n + 1, i));
    }
    const auto T = state.compute_T(A);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(fixture::max_abs(T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                               B[static_cast<std::size_t>(i)] * B[static_cast<std::size_t>(j)].transpose()) <= 1e-13);
    state.commit(A, B);
    CHECK(state.local_drift() <= 1e-13);
    Eigen::MatrixXd in(2 * B[0].rows(), B[0].cols()), out(in.rows(), in.cols());
    in << B[0], B[1];
    out << state.recurrence().B(n + 1, 0), state.recurrence().B(n + 1, 1);
    const Eigen::MatrixXd U = in.colPivHouseholderQr().solve(out);
    CHECK(fixture::max_abs(U.transpose() * U - identity(U.rows())) <= 1e-12);
    V = U;
  }
}

TEST_CASE("symmetric factor") {
  const auto one = mvop::factor_symmetric(identity(3), 2, 0);
  CHECK(fixture::max_abs(one.U * one.U.transpose() - identity(3)) <= 1e-15);
  CHECK(fixture::max_abs(one.sigma - Eigen::VectorXd::Ones(3)) <= 1e-15);

  gen::for_seeds(10, [](std::uint64_t seed) {
    CAPTURE(seed);
    gen::Gen g(seed);
    const Eigen::MatrixXd T = g.spd(g.integer(1, 8), 1e-3, 10.0);
    const auto f = mvop::factor_symmetric(T, 0, 0);
    CHECK(fixture::max_abs(f.U * f.sigma.cwiseAbs2().asDiagonal() * f.U.transpose() - T) <= 1e-12 * fixture::max_abs(T));
    for (Eigen::Index k = 1; k < f.sigma.size(); ++k) CHECK(f.sigma(k) <= f.sigma(k - 1));
  });

  Eigen::MatrixXd singular = identity(3);
  singular(2, 2) = 0;
  try {
    mvop::factor_symmetric(singular, 4, 1);
    FAIL("expected a rank error");
  } catch (const mvop::RankError& e) {
    CHECK(e.degree() == 4);
    CHECK(e.coordinate() == 1);
  }
}

TEST_CASE("d = 2 closure") {
  // I - Vhat^T Vhat = e_1 e_1^T
  Eigen::MatrixXd Vhat = Eigen::MatrixXd::Zero(2, 3);
  Vhat(0, 1) = 1;
  Vhat(1, 2) = 1;
  const Eigen::VectorXd y = mvop::close_d2(Vhat, 0);
  CHECK(fixture::max_abs(y - Eigen::Vector3d(1, 0, 0)) <= 1e-15);

  gen::for_seeds(10, [](std::uint64_t seed) {
    CAPTURE(seed);
    gen::Gen g(seed);
    const int r = g.integer(1, 6);
    // rows of an orthogonal matrix with one row removed
    const Eigen::MatrixXd Q = g.orthogonal(r + 1);
    const Eigen::MatrixXd V = Q.topRows(r);
    const Eigen::VectorXd yy = mvop::close_d2(V, 0);
    CHECK(fixture::max_abs(yy * yy.transpose() - (identity(r + 1) - V.transpose() * V)) <= 1e-12);
  });

  try {
    mvop::close_d2(2 * identity(2), 3);
    FAIL("expected a consistency error");
  } catch (const mvop::ConsistencyError& e) {
    CHECK(e.degree() == 3);
  }
}

TEST_CASE("first degree from the moment matrix for d > 2") {
  const auto mu = fixture::legendre_box(3, 4);
  const auto B = mvop::fallback_n0(mu);
  REQUIRE(B.size() == 3);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(3, 3);
  for (const auto& b : B) L += b.transpose() * b;
  const Eigen::VectorXd s = fixture::spectrum(L);
  for (Eigen::Index k = 0; k < 3; ++k) CHECK(s(k) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

  Eigen::MatrixXd flat(3, 3);
  flat << 0, 0, 0, 1, 1, 1, 2, 2, 2;
  CHECK_THROWS_AS(mvop::fallback_n0(mvop::DiscreteMeasure(flat, Eigen::VectorXd::Constant(3, 1.0 / 3))),
                  mvop::ConditioningError);
}

TEST_CASE("kernel basis and closure factors for d = 3") {
  const auto ref = fixture::legendre_canonical(3, 3);
  const auto mu = fixture::legendre_box(3, 5);
  mvop::StieltjesState state(mu);
  std::vector<Eigen::MatrixXd> A, B;
  for (int i = 0; i < 3; ++i) {
    A.push_back(state.compute_S(i));
    B.push_back(ref.B(1, i));
  }
  state.commit(A, B);
  A.clear();
  for (int i = 0; i < 3; ++i) A.push_back(state.compute_S(i));
  const auto T = state.compute_T(A);
  for (int j = 1; j < 3; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    const auto f = mvop::factor_symmetric(T[sj][sj], 1, j);
    const Eigen::MatrixXd Psi = mvop::kernel_basis(state.recurrence().B(1, 0), f, 2, 1, j);
    REQUIRE(Psi.rows() == 3);
    REQUIRE(Psi.cols() == 2);
    CHECK(fixture::max_abs(Psi.transpose() * Psi - identity(2)) <= 1e-12);
    CHECK(fixture::max_abs(state.recurrence().B(1, 0) * f.U * f.sigma.asDiagonal() * Psi) <= 1e-12);
    CHECK_THROWS_AS(mvop::kernel_basis(state.recurrence().B(1, 0), f, 1, 1, j), mvop::RankError);

    const auto f1 = mvop::factor_symmetric(T[0][0], 1, 0);
    const Eigen::MatrixXd Vhat = mvop::compute_Vhat(f1, f, T[0][sj]);
    const Eigen::MatrixXd E = mvop::closure_E(Psi, Vhat, 3, 1, j);
    REQUIRE(E.rows() == 2);
    REQUIRE(E.cols() == 3);
    CHECK(E.col(2).isZero(0.0));
    const Eigen::MatrixXd VP = Vhat * Psi;
    CHECK(fixture::max_abs(E * E.transpose() - (identity(2) - VP.transpose() * VP)) <= 1e-12);
  }
}

TEST_CASE("property: d = 3 completion is orthogonal and reproduces H") {
  gen::for_seeds(15, [](std::uint64_t seed) {
    CAPTURE(seed);
    gen::Gen g(seed);
    const int p = g.integer(1, 6);
    const auto q = static_cast<Eigen::Index>(p + 1);
    // E_j = (S_j 0) with S_j symmetric positive definite, H = E_2 W^T E_3^T for orthogonal W
    auto make_E = [&] {
      Eigen::MatrixXd E = Eigen::MatrixXd::Zero(p, q);
      E.leftCols(p) = g.spd(p, 0.2, 1.0);
      return E;
    };
    const Eigen::MatrixXd E2 = make_E(), E3 = make_E();
    const Eigen::MatrixXd W = g.orthogonal(q);
    const Eigen::MatrixXd H = E2 * W.transpose() * E3.transpose();
    const auto [W2, W3] = mvop::close_d3(E2, E3, H, 0);
    CHECK(W2 == identity(q));
    CHECK(fixture::max_abs(W3.transpose() * W3 - identity(q)) <= 1e-10);
    CHECK(fixture::max_abs(E2 * W2 * W3.transpose() * E3.transpose() - H) <= 1e-9 * std::max(1.0, fixture::max_abs(H)));
  });
  CHECK_THROWS_AS(mvop::close_d3(Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Zero(2, 2), 0),
                  mvop::DomainError);
}

TEST_CASE("Lambda agrees with the tensor oracle for d = 2 through degree 20") {
  const std::vector<double> alphas{3.80, 0.78}, betas{7.34, 8.26};
  const int N = 20;
  const auto mu = mvop::tensor_jacobi(2, N + 2, alphas, betas);
  const auto res = mvop::ms_run(mu, N);
  const auto ref = fixture::tensor_canonical(alphas, betas, N);
  REQUIRE(res.rec.max_degree() == N);
  REQUIRE(res.rec.canonical());
  for (int n = 1; n <= N; ++n) {
    CAPTURE(n);
    CHECK(fixture::relative_gap(res.rec.lambda(n), ref.lambda(n)) <= 1e-8);
    for (int i = 0; i < 2; ++i) CHECK(res.rec.A(n, i) == res.rec.A(n, i).transpose());
  }
  CHECK(mvop::max_residual(mvop::commuting_residuals(res.rec)) <= 1e-8);
  CHECK(res.diagnostics.t_condition.size() == static_cast<std::size_t>(N + 1));
  CHECK(res.diagnostics.drift.size() == static_cast<std::size_t>(N));
  CHECK(res.diagnostics.fallback_count == 0);
}

TEST_CASE("Lambda agrees with the tensor oracle for d = 3 through degree 8") {
  const std::vector<double> alphas{1.61, 0.32, 3.01}, betas{-0.89, 9.83, 7.67};
  const int N = 8;
  const auto mu = mvop::tensor_jacobi(3, N + 2, alphas, betas);
  const auto res = mvop::ms_run(mu, N);
  const auto ref = fixture::tensor_canonical(alphas, betas, N);
  REQUIRE(res.rec.max_degree() == N);
  for (int n = 1; n <= N; ++n) {
    CAPTURE(n);
    CHECK(fixture::relative_gap(res.rec.lambda(n), ref.lambda(n)) <= 1e-8);
  }
  CHECK(mvop::max_residual(mvop::commuting_residuals(res.rec)) <= 1e-8);
  CHECK(res.diagnostics.fallback_count == 1);
  CHECK(res.diagnostics.d3_closures == N - 1);
  for (double drift : res.diagnostics.drift) CHECK(drift <= 1e-10);
}

TEST_CASE("property: Stieltjes on random tensor Jacobi measures") {
  gen::for_seeds(6, [](std::uint64_t seed) {
    CAPTURE(seed);
    gen::Gen g(seed);
    const int d = g.integer(2, 3);
    const int N = g.integer(1, d == 3 ? 5 : 10);
    std::vector<double> alphas, betas;
    for (int i = 0; i < d; ++i) {
      alphas.push_back(g.uniform(-0.5, 4.0));
      betas.push_back(g.uniform(-0.5, 4.0));
    }
    const auto res = mvop::ms_run(mvop::tensor_jacobi(d, N + 2, alphas, betas), N);
    const auto ref = fixture::tensor_canonical(alphas, betas, N);
    for (int n = 1; n <= N; ++n) CHECK(fixture::relative_gap(res.rec.lambda(n), ref.lambda(n)) <= 1e-8);
    const auto mu = mvop::tensor_jacobi(d, N + 2, alphas, betas);
    CHECK(fixture::max_abs(mvop::gram_error(res.rec, mu, N)) <= 1e-10);
  });
}

TEST_CASE("iteration preconditions") {
  const auto rule = mvop::gauss_jacobi_1d(5, 0, 0);
  CHECK_THROWS_AS(mvop::ms_run(mvop::DiscreteMeasure(Eigen::MatrixXd(rule.nodes), rule.weights), 2), mvop::DomainError);
  const auto mu2 = fixture::legendre_box(2, 3);
  CHECK_THROWS_AS(mvop::ms_run(mu2, -1), mvop::DomainError);
  const auto mu4 = fixture::legendre_box(4, 3);
  CHECK_THROWS_AS(mvop::ms_run(mu4, 2), mvop::DomainError);
  CHECK_NOTHROW(mvop::ms_run(mu4, 1));

  Eigen::MatrixXd nodes(2, 2);
  nodes << 0, 0, 1, 1;
  CHECK_THROWS_AS(mvop::StieltjesState(mvop::DiscreteMeasure(nodes, Eigen::Vector2d(1, 1))), mvop::DomainError);
}

TEST_CASE("too few nodes stop the iteration with the failing degree") {
  // 3 x 3 grid: r_0 + r_1 + r_2 = 6 of 9 functions, degree 3 needs 10
  const auto mu = fixture::legendre_box(2, 3);
  CHECK_THROWS_AS(mvop::ms_run(mu, 3), mvop::NumericalError);
  mvop::MsOptions opt;
  opt.keep_partial = true;
  const auto res = mvop::ms_run(mu, 3, opt);
  CHECK(res.failure_degree == 2);
  CHECK(res.rec.max_degree() == 2);
  CHECK_FALSE(res.failure.empty());
}

TEST_CASE("d = 4 with the experimental closure") {
  const int N = 3;
  const auto mu = fixture::legendre_box(4, N + 1);
  mvop::MsOptions opt;
  opt.experimental_wopp = true;
  opt.wopp.seed = 7;
  const auto res = mvop::ms_run(mu, N, opt);
  const auto ref = fixture::legendre_canonical(4, N);
  for (int n = 1; n <= N; ++n) CHECK(fixture::relative_gap(res.rec.lambda(n), ref.lambda(n)) <= 1e-8);
  CHECK(res.diagnostics.wopp_solves == N - 1);
  for (double r : res.diagnostics.wopp_residuals) CHECK(r <= 1e-8);
  // the WOPP residual stops at 1e-8, which bounds what the Gram error can reach
  CHECK(fixture::max_abs(mvop::gram_error(res.rec, mu, N)) <= 1e-7);
}
