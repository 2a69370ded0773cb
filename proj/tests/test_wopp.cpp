#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "generators.hpp"
#include "mvop/wopp.hpp"

namespace {

using Mats = std::vector<Eigen::MatrixXd>;
using Blocks = std::vector<std::vector<Eigen::MatrixXd>>;

Blocks rhs(const Mats& E, const Mats& W) {
  Blocks H(E.size(), Mats(E.size()));
  for (std::size_t i = 0; i < E.size(); ++i)
    for (std::size_t j = i + 1; j < E.size(); ++j) H[i][j] = E[i] * W[i] * W[j].transpose() * E[j].transpose();
  return H;
}

// direct evaluation over both orderings of every pair
double objective(const Mats& E, const Blocks& H, const Mats& W) {
  double s = 0;
  for (std::size_t i = 0; i < E.size(); ++i)
    for (std::size_t j = 0; j < E.size(); ++j) {
      if (i == j) continue;
      const Eigen::MatrixXd h = i < j ? H[i][j] : Eigen::MatrixXd(H[j][i].transpose());
      s += (E[i] * W[i] * W[j].transpose() * E[j].transpose() - h).squaredNorm();
    }
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("identity is returned when it already solves the problem") {
  gen::Gen g(1);
  const Mats E{g.gaussian(2, 4), g.gaussian(3, 4), g.gaussian(2, 4)};
  const Mats I(3, Eigen::MatrixXd::Identity(4, 4));
  const auto H = rhs(E, I);
  CHECK(mvop::wopp_residual(E, H, I) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  const auto res = mvop::solve_wopp(E, H);
  CHECK(res.iterations == 0);
  CHECK(res.restarts == 0);
  for (const auto& W : res.W) CHECK(W == Eigen::MatrixXd::Identity(4, 4));
}

TEST_CASE("residual definition") {
  gen::for_seeds(10, [](std::uint64_t seed) {
    CAPTURE(seed);
    gen::Gen g(seed);
    const int m = g.integer(2, 4), q = g.integer(2, 5);
    Mats E, W;
    for (int i = 0; i < m; ++i) {
      E.push_back(g.gaussian(g.integer(1, q), q));
      W.push_back(g.orthogonal(q));
    }
    Blocks H(static_cast<std::size_t>(m), Mats(static_cast<std::size_t>(m)));
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        H[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            g.gaussian(E[static_cast<std::size_t>(i)].rows(), E[static_cast<std::size_t>(j)].rows());
    CHECK(mvop::wopp_residual(E, H, W) == doctest::Approx(objective(E, H, W)).epsilon(1e-13));
  });
}

TEST_CASE("property: planted solutions are recovered") {
  gen::for_seeds(12, [](std::uint64_t seed) {
    CAPTURE(seed);
    gen::Gen g(seed);
    const int m = g.integer(2, 4), q = g.integer(2, 5);
    Mats E, W{Eigen::MatrixXd::Identity(q, q)};
    for (int i = 0; i < m; ++i) E.push_back(g.gaussian(q - 1, q));
    for (int i = 1; i < m; ++i) W.push_back(g.orthogonal(q));
    const auto H = rhs(E, W);
    mvop::WoppOptions opt;
    opt.seed = seed;
    opt.max_iter = 2000;
    const auto res = mvop::solve_wopp(E, H, opt);
    CHECK(res.residual <= 1e-8);
    CHECK(res.W[0] == Eigen::MatrixXd::Identity(q, q));
    for (const auto& Wi : res.W) CHECK(fixture::max_abs(Wi.transpose() * Wi - Eigen::MatrixXd::Identity(q, q)) <= 1e-10);
    CHECK(std::abs(objective(E, H, res.W) - res.residual) <= 1e-12);
  });
}

TEST_CASE("permuted identity is recovered exactly") {
  // square invertible E pins W_1 W_2^T down completely
  gen::Gen g(3);
  Eigen::MatrixXd Pm = Eigen::MatrixXd::Zero(3, 3);
  Pm(0, 1) = Pm(1, 2) = Pm(2, 0) = 1;
  const Mats E{g.gaussian(3, 3), g.gaussian(3, 3)};
  const auto H = rhs(E, {Eigen::MatrixXd::Identity(3, 3), Pm});
  const auto res = mvop::solve_wopp(E, H);
  CHECK(fixture::max_abs(res.W[1] - Pm) <= 1e-8);
}

TEST_CASE("random orthogonal matrices") {
  for (int q : {1, 2, 5, 9}) {
    const Eigen::MatrixXd Q = mvop::random_orthogonal(q, 42);
    CHECK(fixture::max_abs(Q.transpose() * Q - Eigen::MatrixXd::Identity(q, q)) <= 1e-14);
    CHECK(Q == mvop::random_orthogonal(q, 42));
  }
  CHECK(mvop::random_orthogonal(4, 1) != mvop::random_orthogonal(4, 2));
}

TEST_CASE("failure carries the best iterate") {
  // H inconsistent with any orthogonal W: ||E_1 W_1 W_2^T E_2^T|| <= 1 < ||H||
  const Mats E{Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2)};
  Blocks H(2, Mats(2));
  H[0][1] = 5 * Eigen::MatrixXd::Identity(2, 2);
  mvop::WoppOptions opt;
  opt.max_iter = 60;
  opt.degree = 7;
  try {
    mvop::solve_wopp(E, H, opt);
    FAIL("expected a convergence error");
  } catch (const mvop::WoppConvergenceError& e) {
    CHECK(e.degree() == 7);
    const auto& best = e.best();
    CHECK(best.iterations <= 60);
    CHECK(best.residual == doctest::Approx(mvop::wopp_residual(E, H, best.W)).epsilon(1e-15));
    // the identity is optimal here: residual sqrt(2) * ||4 I||_F
    CHECK(best.residual == doctest::Approx(std::sqrt(2.0) * 4 * std::sqrt(2.0)).epsilon(1e-8));
  }
}

TEST_CASE("argument checks") {
  const Mats one{Eigen::MatrixXd::Identity(2, 2)};
  CHECK_THROWS_AS(mvop::solve_wopp(one, Blocks(1, Mats(1))), mvop::DomainError);
  const Mats tall{Eigen::MatrixXd::Identity(3, 2), Eigen::MatrixXd::Identity(2, 2)};
  Blocks H(2, Mats(2));
  H[0][1] = Eigen::MatrixXd::Zero(3, 2);
  CHECK_THROWS_AS(mvop::solve_wopp(tall, H), mvop::DomainError);
  const Mats E{Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2)};
  H[0][1] = Eigen::MatrixXd::Zero(2, 3);
  CHECK_THROWS_AS(mvop::solve_wopp(E, H), mvop::DomainError);
}
