#include "mvop/measure.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <string_view>

#include "mvop/errors.hpp"
#include "mvop/univariate.hpp"

namespace mvop {

DiscreteMeasure::DiscreteMeasure(Eigen::MatrixXd nodes, Eigen::VectorXd weights, std::string label)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), label_(std::move(label)) {
  if (nodes_.rows() == 0 || nodes_.cols() == 0) throw DomainError("measure needs at least one node");
  if (weights_.size() != nodes_.rows()) throw DomainError("weight count must match node count");
  if (!nodes_.allFinite()) throw DomainError("measure nodes must be finite");
  for (Eigen::Index m = 0; m < weights_.size(); ++m)
    if (!(weights_(m) > 0) || !std::isfinite(weights_(m))) throw DomainError("measure weights must be positive");
  total_mass_ = weights_.sum();
  if (!(total_mass_ > 0) || !std::isfinite(total_mass_)) throw DomainError("total mass must be finite and positive");
}

DiscreteMeasure DiscreteMeasure::normalized() const {
  return DiscreteMeasure(nodes_, weights_ / total_mass_, label_);
}

std::vector<std::pair<double, double>> DiscreteMeasure::bounding_box() const {
  std::vector<std::pair<double, double>> box;
  for (int i = 0; i < dim(); ++i) box.emplace_back(nodes_.col(i).minCoeff(), nodes_.col(i).maxCoeff());
  return box;
}

bool DiscreteMeasure::nondegenerate_monomials(int degree) const {
  // One node with every |x_i| bounded away from zero, whose weighted
  // monomials of degree 2 * degree do not underflow, certifies all of them.
  const double floor = std::log(std::numeric_limits<double>::min());
  for (Eigen::Index m = 0; m < size(); ++m) {
    double worst = std::log(weights_(m));
    bool ok = true;
    for (int i = 0; i < dim(); ++i) {
      const double ax = std::abs(nodes_(m, i));
      if (ax == 0.0) {
        ok = false;
        break;
      }
      if (ax < 1.0) worst += 2.0 * degree * std::log(ax);
    }
    if (ok && worst > floor) return true;
  }
  return false;
}

GaussRule gauss_jacobi_1d(int n_points, double alpha, double beta) {
  if (n_points < 1) throw DomainError("Gauss rule needs at least one point");
  const UnivariateRecurrence rec = jacobi_coeffs(n_points, alpha, beta);
  // Golub-Welsch: eigenpairs of the symmetric Jacobi matrix.
  Eigen::VectorXd diag(n_points), sub(std::max(n_points - 1, 0));
  for (int k = 0; k < n_points; ++k) diag(k) = rec.a(k + 1);
  for (int k = 0; k + 1 < n_points; ++k) sub(k) = rec.b(k + 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  GaussRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights.resize(n_points);
  // Newton polish of each node on p_n; weights are the Christoffel numbers
  // 1 / sum_{j<n} p_j(x)^2.
  for (int k = 0; k < n_points; ++k) {
    double x = rule.nodes(k);
    double sum_sq = 0.0;
    for (int it = 0; it < 3; ++it) {
      double p_prev = 0.0, p = 1.0, dp_prev = 0.0, dp = 0.0;
      sum_sq = 1.0;
      for (int m = 0; m < n_points; ++m) {
        const double p_next = ((x - rec.a(m + 1)) * p - rec.b(m) * p_prev) / rec.b(m + 1);
        const double dp_next = (p + (x - rec.a(m + 1)) * dp - rec.b(m) * dp_prev) / rec.b(m + 1);
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
        if (m + 1 < n_points) sum_sq += p * p;
      }
      if (it == 2 || dp == 0.0) break;
      x -= p / dp;
    }
    rule.nodes(k) = x;
    rule.weights(k) = 1.0 / sum_sq;
  }
  rule.weights /= rule.weights.sum();
  return rule;
}

DiscreteMeasure tensor_jacobi(int d, int n_points, const std::vector<double>& alphas,
                              const std::vector<double>& betas) {
  if (d < 1) throw DomainError("dimension must be >= 1");
  if (static_cast<int>(alphas.size()) != d || static_cast<int>(betas.size()) != d)
    throw DomainError("need one (alpha, beta) pair per dimension");
  std::vector<GaussRule> rules;
  for (int i = 0; i < d; ++i) rules.push_back(gauss_jacobi_1d(n_points, alphas[static_cast<std::size_t>(i)],
                                                              betas[static_cast<std::size_t>(i)]));
  Eigen::Index M = 1;
  for (int i = 0; i < d; ++i) M *= n_points;
  Eigen::MatrixXd nodes(M, d);
  Eigen::VectorXd weights(M);
  for (Eigen::Index m = 0; m < M; ++m) {
    Eigen::Index rest = m;
    double w = 1.0;
    for (int i = 0; i < d; ++i) {
      const Eigen::Index k = rest % n_points;
      rest /= n_points;
      nodes(m, i) = rules[static_cast<std::size_t>(i)].nodes(k);
      w *= rules[static_cast<std::size_t>(i)].weights(k);
    }
    weights(m) = w;
  }
  return DiscreteMeasure(std::move(nodes), std::move(weights), "jac" + std::to_string(d)).normalized();
}

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre rule on [lo, hi] with weights summing to hi - lo.
GaussRule legendre_on(int n, double lo, double hi) {
  GaussRule g = gauss_jacobi_1d(n, 0.0, 0.0);
  g.nodes = (0.5 * (hi - lo) * (g.nodes.array() + 1.0) + lo).matrix();
  g.weights *= (hi - lo);
  return g;
}

}  // namespace

DiscreteMeasure annulus_measure(int n_r, int n_theta) {
  if (n_r < 1 || n_theta < 1) throw DomainError("annulus rule sizes must be >= 1");
  const GaussRule radial = legendre_on(n_r, 0.5, 1.0);
  const Eigen::Index M = static_cast<Eigen::Index>(n_r) * n_theta;
  Eigen::MatrixXd nodes(M, 2);
  Eigen::VectorXd weights(M);
  Eigen::Index m = 0;
  for (int t = 0; t < n_theta; ++t) {
    const double theta = 2.0 * kPi * t / n_theta;
    const double c = std::cos(theta), s = std::sin(theta);
    for (int k = 0; k < n_r; ++k, ++m) {
      const double r = radial.nodes(k);
      nodes(m, 0) = r * c;
      nodes(m, 1) = r * s;
      weights(m) = radial.weights(k) * r / n_theta;
    }
  }
  return DiscreteMeasure(std::move(nodes), std::move(weights), "ann").normalized();
}

DiscreteMeasure spiral_measure(int n_r, int n_theta) {
  if (n_r < 1 || n_theta < 1) throw DomainError("spiral rule sizes must be >= 1");
  const GaussRule ref = gauss_jacobi_1d(n_r, 0.0, 0.0);
  const double theta_max = 6.0 * kPi;
  const double dtheta = theta_max / n_theta;
  const Eigen::Index M = static_cast<Eigen::Index>(n_r) * n_theta;
  Eigen::MatrixXd nodes(M, 2);
  Eigen::VectorXd weights(M);
  Eigen::Index m = 0;
  for (int t = 0; t < n_theta; ++t) {
    const double theta = (t + 0.5) * dtheta;
    const double c = std::cos(theta), s = std::sin(theta);
    const double lo = 0.8 * theta, hi = theta;
    for (int k = 0; k < n_r; ++k, ++m) {
      const double r = lo + 0.5 * (hi - lo) * (ref.nodes(k) + 1.0);
      nodes(m, 0) = r * c;
      nodes(m, 1) = r * s;
      weights(m) = dtheta * (hi - lo) * ref.weights(k) * r;
    }
  }
  return DiscreteMeasure(std::move(nodes), std::move(weights), "cur").normalized();
}

DiscreteMeasure torus_measure(int n_r, int n_theta, int n_phi) {
  if (n_r < 1 || n_theta < 1 || n_phi < 1) throw DomainError("torus rule sizes must be >= 1");
  constexpr double major = 2.0;
  const GaussRule radial = legendre_on(n_r, 0.0, 1.0);
  const Eigen::Index M = static_cast<Eigen::Index>(n_r) * n_theta * n_phi;
  Eigen::MatrixXd nodes(M, 3);
  Eigen::VectorXd weights(M);
  Eigen::Index m = 0;
  for (int p = 0; p < n_phi; ++p) {
    const double phi = 2.0 * kPi * p / n_phi;
    for (int t = 0; t < n_theta; ++t) {
      const double theta = 2.0 * kPi * t / n_theta;
      for (int k = 0; k < n_r; ++k, ++m) {
        const double rho = radial.nodes(k);
        const double ring = major + rho * std::cos(theta);
        nodes(m, 0) = ring * std::cos(phi);
        nodes(m, 1) = ring * std::sin(phi);
        nodes(m, 2) = rho * std::sin(theta);
        weights(m) = radial.weights(k) * rho * ring;
      }
    }
  }
  return DiscreteMeasure(std::move(nodes), std::move(weights), "tor").normalized();
}

DiscreteMeasure square_minus_ball(std::int64_t M, std::uint64_t seed) {
  if (M < 1) throw DomainError("sample count must be >= 1");
  std::mt19937_64 gen(seed);
  Eigen::MatrixXd nodes(M, 2);
  for (Eigen::Index m = 0; m < M;) {
    const double x = 2.0 * unit_interval(gen()) - 1.0;
    const double y = 2.0 * unit_interval(gen()) - 1.0;
    if (x * x + y * y >= 1.0) {
      nodes(m, 0) = x;
      nodes(m, 1) = y;
      ++m;
    }
  }
  Eigen::VectorXd weights = Eigen::VectorXd::Constant(M, 1.0 / static_cast<double>(M));
  return DiscreteMeasure(std::move(nodes), std::move(weights), "hol");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Parses a comma separated row of doubles; false if any field is not a number.
bool parse_row(std::string_view line, std::vector<double>& out) {
  out.clear();
  while (true) {
    const auto comma = line.find(',');
    std::string_view field = trim(line.substr(0, comma));
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) return false;
    out.push_back(v);
    if (comma == std::string_view::npos) return true;
    line.remove_prefix(comma + 1);
  }
}

}  // namespace

DiscreteMeasure point_cloud_measure(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open point cloud " + path.string(), 0);
  std::vector<double> flat;
  std::vector<double> row;
  int width = 0;
  bool seen_first = false;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const bool first = !seen_first;
    seen_first = true;
    if (!parse_row(body, row)) {
      if (first) continue;  // header
      throw IngestionError("unparsable point", line_no);
    }
    if (row.size() < 2 || row.size() > 3) throw IngestionError("expected 2 or 3 coordinates", line_no);
    if (width == 0) width = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != width) throw IngestionError("inconsistent coordinate count", line_no);
    for (double v : row)
      if (!std::isfinite(v)) throw IngestionError("non-finite coordinate", line_no);
    flat.insert(flat.end(), row.begin(), row.end());
  }
  if (flat.empty()) throw IngestionError("point cloud " + path.string() + " has no points", 0);
  const Eigen::Index M = static_cast<Eigen::Index>(flat.size()) / width;
  Eigen::MatrixXd nodes =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(flat.data(), M, width);
  Eigen::VectorXd weights = Eigen::VectorXd::Constant(M, 1.0 / static_cast<double>(M));
  return DiscreteMeasure(std::move(nodes), std::move(weights), "cloud");
}

double moment(const Eigen::Ref<const Eigen::VectorXd>& f_values, const Eigen::Ref<const Eigen::VectorXd>& g_values,
              const DiscreteMeasure& measure) {
  if (f_values.size() != measure.size() || g_values.size() != measure.size())
    throw DomainError("moment: value arrays must match the node count");
  return (measure.weights().array() * f_values.array() * g_values.array()).sum();
}

}  // namespace mvop
