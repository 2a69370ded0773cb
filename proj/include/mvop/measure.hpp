#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace mvop {

/// Finite positive measure sum_m w_m delta_{x_m} on R^d. Nodes are stored as
/// an M x d column-major matrix so that each coordinate is contiguous.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  /// Validates positivity and finiteness; does not rescale.
  DiscreteMeasure(Eigen::MatrixXd nodes, Eigen::VectorXd weights, std::string label = {});

  int dim() const { return static_cast<int>(nodes_.cols()); }
  Eigen::Index size() const { return nodes_.rows(); }
  const Eigen::MatrixXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  auto coordinate(int i) const { return nodes_.col(i); }
  double total_mass() const { return total_mass_; }
  const std::string& label() const { return label_; }

  /// Same nodes, weights scaled to unit total mass.
  DiscreteMeasure normalized() const;

  /// Per-axis [min, max] of the nodes.
  std::vector<std::pair<double, double>> bounding_box() const;

  /// Sufficient check that <x^a, x^a> > 0 without underflow for every |a| <= degree.
  bool nondegenerate_monomials(int degree) const;

 private:
  Eigen::MatrixXd nodes_;
  Eigen::VectorXd weights_;
  double total_mass_ = 0.0;
  std::string label_;
};

struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Gauss-Jacobi rule for (1-x)^alpha (1+x)^beta on [-1, 1], weights summing to 1.
GaussRule gauss_jacobi_1d(int n_points, double alpha, double beta);

/// Tensor product of gauss_jacobi_1d rules; coordinate 0 varies fastest.
DiscreteMeasure tensor_jacobi(int d, int n_points, const std::vector<double>& alphas,
                              const std::vector<double>& betas);

/// Uniform measure on 0.5 <= |x| <= 1: Gauss-Legendre in r, equispaced in theta.
DiscreteMeasure annulus_measure(int n_r, int n_theta);

/// Uniform measure between the spirals r = 0.8 theta and r = theta, theta in
/// [0, 6 pi]. Gauss-Legendre in r for each theta, midpoint rule in theta.
DiscreteMeasure spiral_measure(int n_r, int n_theta);

/// Uniform measure inside the torus (sqrt(x1^2 + x2^2) - 2)^2 + x3^2 < 1.
DiscreteMeasure torus_measure(int n_r, int n_theta, int n_phi);

/// M iid uniform samples on [-1,1]^2 minus the open unit disk, weights 1/M.
DiscreteMeasure square_minus_ball(std::int64_t M, std::uint64_t seed);

/// Uniform weights over the points of a CSV file (`x1,x2[,x3]` per line,
/// optional header, blank lines ignored). Throws IngestionError.
DiscreteMeasure point_cloud_measure(const std::filesystem::path& path);

/// sum_m w_m f(x_m) g(x_m)
double moment(const Eigen::Ref<const Eigen::VectorXd>& f_values,
              const Eigen::Ref<const Eigen::VectorXd>& g_values, const DiscreteMeasure& measure);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
inline double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace mvop
