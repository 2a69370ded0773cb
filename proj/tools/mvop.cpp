// Experiment driver: builds a measure, computes recurrence matrices with one of
// the four methods, and writes the recurrence plus diagnostics to a directory.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "mvop/errors.hpp"
#include "mvop/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recurrence matrices for multivariate orthogonal polynomials"};
  app.require_subcommand(1);

  std::string experiment, method, cloud, out = "out";
  mvop::ExperimentConfig config;
  auto* run = app.add_subcommand("run", "run one experiment with one method");
  run->add_option("--experiment", experiment, "jac2, jac3, ann, cur, tor, hol or cloud")->required();
  run->add_option("--method", method, "exact, ms, mm or ml")->required();
  run->add_option("--degree", config.degree, "maximum degree N (default 39 for d = 2, 15 for d = 3)")
      ->check(CLI::NonNegativeNumber);
  run->add_option("--mc-samples", config.mc_samples, "Monte Carlo sample count for hol")->capture_default_str();
  run->add_option("--seed", config.seed, "random seed")->capture_default_str();
  run->add_option("--cloud", cloud, "point-cloud CSV for the cloud experiment");
  run->add_option("--out", out, "output directory")->capture_default_str();
  run->add_option("--spiral-theta", config.spiral_theta_points, "theta points for cur")->capture_default_str();
  run->add_option("--christoffel-grid", config.christoffel_grid, "grid points per axis for christoffel.csv")
      ->capture_default_str();
  run->add_flag("--experimental-wopp", config.experimental_wopp, "allow the iterative closure needed for d > 3");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  mvop::ExperimentResult result;
  try {
    config.experiment = mvop::parse_experiment(experiment);
    config.method = mvop::parse_method(method);
    config.cloud_path = cloud;
    config.output_dir = out;
    result = mvop::run_experiment(config);
    mvop::write_outputs(result);
  } catch (const mvop::IngestionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const mvop::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const mvop::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto& c = result.config;
  std::printf("%s/%s: N=%d completed=%d nodes=%lld max|E|=%s\n", mvop::to_string(c.experiment).c_str(),
              mvop::to_string(c.method).c_str(), c.degree, result.completed_degree,
              static_cast<long long>(result.num_nodes), mvop::format_double(result.report.max_abs).c_str());
  if (!result.ok()) {
    std::fprintf(stderr, "numerical failure: %s\n", result.failure->c_str());
    return kExitNumerical;
  }
  return kExitOk;
}
