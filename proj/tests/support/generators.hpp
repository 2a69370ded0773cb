#pragma once

// Seeded random inputs for the property tests.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace gen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>()(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  /// M x d points with every coordinate uniform in [lo, hi].
  Eigen::MatrixXd points(Eigen::Index M, int d, double lo = -1.0, double hi = 1.0) {
    Eigen::MatrixXd p(M, d);
    for (Eigen::Index k = 0; k < p.size(); ++k) p.data()[k] = uniform(lo, hi);
    return p;
  }

  Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = normal();
    return m;
  }

  Eigen::MatrixXd orthogonal(Eigen::Index q) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(q, q));
    return qr.householderQ() * Eigen::MatrixXd::Identity(q, q);
  }

  /// Symmetric positive definite with eigenvalues in [lo, hi].
  Eigen::MatrixXd spd(Eigen::Index q, double lo, double hi) {
    const Eigen::MatrixXd Q = orthogonal(q);
    Eigen::VectorXd s(q);
    for (Eigen::Index k = 0; k < q; ++k) s(k) = uniform(lo, hi);
    return Q * s.asDiagonal() * Q.transpose();
  }

  /// A Jacobi exponent in (-1, 10).
  double jacobi_exponent() { return uniform(-0.9, 9.5); }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Runs `body` for seeds 0..count-1 so failures name the seed.
template <typename F>
void for_seeds(int count, F&& body) {
  for (int s = 0; s < count; ++s) body(static_cast<std::uint64_t>(s));
}

}  // namespace gen
