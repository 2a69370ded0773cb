#include "mvop/experiment.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "mvop/errors.hpp"
#include "mvop/evaluation.hpp"
#include "mvop/mindex.hpp"
#include "mvop/moment_method.hpp"
#include "mvop/recurrence_io.hpp"
#include "mvop/tensor_oracle.hpp"
#include "mvop/univariate.hpp"

#ifndef MVOP_DATA_DIR
#define MVOP_DATA_DIR "data"
#endif

namespace mvop {

namespace {

constexpr std::array<std::pair<Experiment, const char*>, 7> kExperiments{{{Experiment::jac2, "jac2"},
                                                                         {Experiment::jac3, "jac3"},
                                                                         {Experiment::ann, "ann"},
                                                                         {Experiment::cur, "cur"},
                                                                         {Experiment::tor, "tor"},
                                                                         {Experiment::hol, "hol"},
                                                                         {Experiment::cloud, "cloud"}}};
constexpr std::array<std::pair<Method, const char*>, 4> kMethods{
    {{Method::exact, "exact"}, {Method::ms, "ms"}, {Method::mm, "mm"}, {Method::ml, "ml"}}};

std::filesystem::path default_cloud() { return std::filesystem::path(MVOP_DATA_DIR) / "crescent.csv"; }

void default_jacobi(const ExperimentConfig& c, std::vector<double>& alphas, std::vector<double>& betas) {
  if (c.experiment == Experiment::jac2) {
    alphas = {3.80, 0.78};
    betas = {7.34, 8.26};
  } else {
    alphas = {1.61, 0.32, 3.01};
    betas = {-0.89, 9.83, 7.67};
  }
}

double safe_max_abs(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  if (!m.allFinite()) return std::numeric_limits<double>::infinity();
  return m.cwiseAbs().maxCoeff();
}

// Canonical form degree by degree; stops before the first degree whose
// stacked B is rank deficient and returns that degree (or -1).
int canonical_prefix(const RecurrenceData& raw, RecurrenceData& out, std::string& why) {
  out = raw;
  out.clear_lambda();
  Eigen::MatrixXd u;
  for (int n = 1; n <= out.max_degree(); ++n) {
    try {
      if (!out.all_finite()) throw RankError("non-finite recurrence matrices", n);
      u = canonicalize_degree(out, n, u);
    } catch (const NumericalError& e) {
      why = e.what();
      out = out.truncated(n - 1);
      return n;
    }
  }
  return -1;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [v, s] : kExperiments)
    if (v == e) return s;
  return "?";
}

std::string to_string(Method m) {
  for (const auto& [v, s] : kMethods)
    if (v == m) return s;
  return "?";
}

Experiment parse_experiment(const std::string& tag) {
  for (const auto& [v, s] : kExperiments)
    if (tag == s) return v;
  throw DomainError("unknown experiment '" + tag + "'");
}

Method parse_method(const std::string& tag) {
  for (const auto& [v, s] : kMethods)
    if (tag == s) return v;
  throw DomainError("unknown method '" + tag + "'");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

int experiment_dim(const ExperimentConfig& config) {
  switch (config.experiment) {
    case Experiment::jac3:
    case Experiment::tor:
      return 3;
    case Experiment::cloud:
      return point_cloud_measure(config.cloud_path.empty() ? default_cloud() : config.cloud_path).dim();
    default:
      return 2;
  }
}

ExperimentConfig resolve(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  if (c.experiment == Experiment::cloud && c.cloud_path.empty()) c.cloud_path = default_cloud();
  const int d = experiment_dim(c);
  if (c.degree < 0) c.degree = d == 2 ? 39 : 15;
  if (c.gauss_points < 0) c.gauss_points = c.degree + 2;
  if (c.fourier_points < 0) c.fourier_points = 4 * c.degree + 5;
  if (c.gauss_points < 1 || c.fourier_points < 1 || c.spiral_theta_points < 1)
    throw DomainError("quadrature sizes must be positive");
  if (c.mc_samples < 1) throw DomainError("Monte Carlo sample count must be positive");
  if (c.christoffel_grid < 2) throw DomainError("Christoffel grid needs at least 2 points per axis");
  const bool tensorial = c.experiment == Experiment::jac2 || c.experiment == Experiment::jac3;
  if (c.method == Method::exact && !tensorial)
    throw DomainError("the exact method needs a tensor-product measure (jac2 or jac3)");
  if (tensorial) {
    std::vector<double> a, b;
    default_jacobi(c, a, b);
    if (c.alphas.empty()) c.alphas = a;
    if (c.betas.empty()) c.betas = b;
    if (static_cast<int>(c.alphas.size()) != d || static_cast<int>(c.betas.size()) != d)
      throw DomainError("need one Jacobi (alpha, beta) pair per dimension");
  } else {
    c.alphas.clear();
    c.betas.clear();
  }
  return c;
}

DiscreteMeasure build_measure(const ExperimentConfig& c) {
  switch (c.experiment) {
    case Experiment::jac2:
      return tensor_jacobi(2, c.gauss_points, c.alphas, c.betas);
    case Experiment::jac3:
      return tensor_jacobi(3, c.gauss_points, c.alphas, c.betas);
    case Experiment::ann:
      return annulus_measure(c.gauss_points, c.fourier_points);
    case Experiment::cur:
      return spiral_measure(c.gauss_points, c.spiral_theta_points);
    case Experiment::tor:
      return torus_measure(c.gauss_points, c.fourier_points, c.fourier_points);
    case Experiment::hol:
      return square_minus_ball(c.mc_samples, c.seed);
    case Experiment::cloud:
      return point_cloud_measure(c.cloud_path);
  }
  throw DomainError("unknown experiment");
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["experiment"] = to_string(c.experiment);
  j["method"] = to_string(c.method);
  j["degree"] = c.degree;
  j["gauss_points"] = c.gauss_points;
  j["fourier_points"] = c.fourier_points;
  j["spiral_theta_points"] = c.spiral_theta_points;
  j["mc_samples"] = c.mc_samples;
  j["seed"] = c.seed;
  j["alphas"] = c.alphas;
  j["betas"] = c.betas;
  j["cloud_path"] = c.cloud_path.string();
  j["output_dir"] = c.output_dir.string();
  j["experimental_wopp"] = c.experimental_wopp;
  j["christoffel_grid"] = c.christoffel_grid;
  return j;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult res;
  res.config = resolve(config);
  const auto& c = res.config;
  const DiscreteMeasure measure = build_measure(c).normalized();
  res.num_nodes = measure.size();
  res.bounding_box = measure.bounding_box();
  const int d = measure.dim();
  const int N = c.degree;
  if (!measure.nondegenerate_monomials(N))
    throw DomainError("measure is degenerate: some monomial of degree <= 2N has zero or underflowing norm");

  switch (c.method) {
    case Method::exact: {
      std::vector<UnivariateRecurrence> uni;
      for (int i = 0; i < d; ++i)
        uni.push_back(jacobi_coeffs(N + 1, c.alphas[static_cast<std::size_t>(i)], c.betas[static_cast<std::size_t>(i)]));
      const MultiIndexSet set(d, N + 1);
      const RecurrenceData full = canonical_permutation(tensor_recurrence(uni, set, N + 1));
      res.report.condition = recurrence_t_condition(full, N);
      res.rec = full.truncated(N);
      break;
    }
    case Method::ms: {
      MsOptions opts;
      opts.experimental_wopp = c.experimental_wopp;
      opts.wopp.seed = c.seed;
      opts.keep_partial = true;
      MsResult ms = ms_run(measure, N, opts);
      res.rec = std::move(ms.rec);
      if (ms.failure_degree >= 0) res.failure = ms.failure;
      res.report.condition = ms.diagnostics.t_condition;
      res.report.condition.resize(static_cast<std::size_t>(N) + 1, std::numeric_limits<double>::infinity());
      res.ms = std::move(ms.diagnostics);
      break;
    }
    case Method::mm:
    case Method::ml: {
      const SpanningBasis basis =
          c.method == Method::mm ? SpanningBasis::monomial(d, N) : SpanningBasis::tensor_legendre(measure, N);
      const GramData gram = build_gram(basis, measure, N);
      res.report.condition = gram_condition_numbers(gram, basis.index_set());
      res.report.breakdown_degree = gram.breakdown_degree;
      const RecurrenceData raw = extract_recurrence(gram, gram.factored_degree());
      std::string why;
      const int bad = canonical_prefix(raw, res.rec, why);
      if (gram.breakdown_degree >= 0)
        res.failure = "Cholesky factorisation of the Gram matrix broke down at degree " +
                      std::to_string(gram.breakdown_degree);
      else if (bad >= 0)
        res.failure = why;
      break;
    }
  }

  res.completed_degree = res.rec.max_degree();
  res.report.cc = commuting_residuals(res.rec);
  res.report.E = gram_error(res.rec, measure, res.completed_degree);
  res.report.max_abs = safe_max_abs(res.report.E);
  try {
    res.christoffel = christoffel_mass(res.rec, measure, res.completed_degree);
  } catch (const NumericalError&) {
    res.christoffel = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  }
  return res;
}

void write_outputs(const ExperimentResult& res) {
  const auto& c = res.config;
  const auto& dir = c.output_dir;
  std::filesystem::create_directories(dir);
  const int d = res.rec.dim();

  nlohmann::json manifest;
  manifest["config"] = config_to_json(c);
  nlohmann::json out;
  out["status"] = res.ok() ? "ok" : "numerical-failure";
  if (res.failure) out["failure"] = *res.failure;
  out["d"] = d;
  out["completed_degree"] = res.completed_degree;
  out["basis_size"] = dims(d, res.completed_degree).R;
  out["nodes"] = res.num_nodes;
  out["gram_error_max_abs"] = format_double(res.report.max_abs);
  out["commuting_residual_max"] = format_double(max_residual(res.report.cc));
  out["cholesky_breakdown_degree"] = res.report.breakdown_degree;
  out["christoffel_integral"] = format_double(res.christoffel.integral);
  out["christoffel_min_at_nodes"] = format_double(res.christoffel.min_value);
  if (res.ms) {
    nlohmann::json ms;
    ms["n0_fallbacks"] = res.ms->fallback_count;
    ms["d3_closures"] = res.ms->d3_closures;
    ms["wopp_solves"] = res.ms->wopp_solves;
    std::vector<std::string> drift;
    for (double v : res.ms->drift) drift.push_back(format_double(v));
    ms["local_gram_drift"] = drift;
    out["stieltjes"] = ms;
  }
  manifest["result"] = out;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");

  if (res.rec.all_finite()) {
    serialize_recurrence(res.rec, dir / "recurrence.json");
  } else {
    std::filesystem::remove(dir / "recurrence.json");
  }

  std::string text;
  const auto& E = res.report.E;
  for (Eigen::Index r = 0; r < E.rows(); ++r) {
    for (Eigen::Index k = 0; k < E.cols(); ++k) {
      if (k) text += ',';
      text += format_double(std::log10(std::abs(E(r, k))));
    }
    text += '\n';
  }
  write_text(dir / "error_matrix.csv", text);

  text = "degree,condition\n";
  for (std::size_t n = 0; n < res.report.condition.size(); ++n)
    text += std::to_string(n) + "," + format_double(res.report.condition[n]) + "\n";
  write_text(dir / "cond.csv", text);

  text = "n,i,j,cc1,cc2,cc3\n";
  for (const auto& r : res.report.cc)
    text += std::to_string(r.n) + "," + std::to_string(r.i + 1) + "," + std::to_string(r.j + 1) + "," +
            format_double(r.cc1) + "," + format_double(r.cc2) + "," + format_double(r.cc3) + "\n";
  write_text(dir / "cc_residuals.csv", text);

  if (d == 2) {
    const auto& box = res.bounding_box;
    const int g = c.christoffel_grid;
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(g) * g, 2);
    for (int a = 0; a < g; ++a)
      for (int b = 0; b < g; ++b) {
        const Eigen::Index row = static_cast<Eigen::Index>(a) * g + b;
        pts(row, 0) = box[0].first + (box[0].second - box[0].first) * b / (g - 1);
        pts(row, 1) = box[1].first + (box[1].second - box[1].first) * a / (g - 1);
      }
    text = "x1,x2,K,lambda\n";
    Eigen::VectorXd K(pts.rows()), lambda(pts.rows());
    try {
      const auto cv = christoffel(res.rec, pts, res.completed_degree);
      K = cv.K;
      lambda = cv.lambda;
    } catch (const NumericalError&) {
      K.setConstant(std::numeric_limits<double>::quiet_NaN());
      lambda = K;
    }
    for (Eigen::Index k = 0; k < pts.rows(); ++k)
      text += format_double(pts(k, 0)) + "," + format_double(pts(k, 1)) + "," + format_double(K(k)) + "," +
              format_double(lambda(k)) + "\n";
    write_text(dir / "christoffel.csv", text);
  }
}

}  // namespace mvop
