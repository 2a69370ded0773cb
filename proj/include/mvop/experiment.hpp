#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvop/diagnostics.hpp"
#include "mvop/measure.hpp"
#include "mvop/recurrence.hpp"
#include "mvop/stieltjes.hpp"

namespace mvop {

enum class Experiment { jac2, jac3, ann, cur, tor, hol, cloud };
enum class Method { exact, ms, mm, ml };

std::string to_string(Experiment e);
std::string to_string(Method m);
/// Throw DomainError on unknown tags.
Experiment parse_experiment(const std::string& tag);
Method parse_method(const std::string& tag);

/// Run settings. Negative sizes mean "derive from the degree".
struct ExperimentConfig {
  Experiment experiment = Experiment::jac2;
  Method method = Method::ms;
  int degree = -1;            ///< 39 for d = 2, 15 for d = 3
  int gauss_points = -1;      ///< per Gauss axis, N + 2
  int fourier_points = -1;    ///< per periodic axis, 4N + 5
  int spiral_theta_points = 4000;
  std::int64_t mc_samples = 1000000;
  std::uint64_t seed = 0;
  std::vector<double> alphas;  ///< Jacobi exponents, empty = experiment default
  std::vector<double> betas;
  std::filesystem::path cloud_path;  ///< empty = bundled crescent cloud
  std::filesystem::path output_dir = "out";
  bool experimental_wopp = false;
  int christoffel_grid = 101;  ///< points per axis of the Christoffel grid (d = 2)
};

/// Fills every derived field; validates method/experiment compatibility.
ExperimentConfig resolve(const ExperimentConfig& config);

/// Dimension of the experiment's measure (reads the cloud file for `cloud`).
int experiment_dim(const ExperimentConfig& config);

/// The unit-mass measure of a resolved configuration.
DiscreteMeasure build_measure(const ExperimentConfig& resolved);

nlohmann::json config_to_json(const ExperimentConfig& resolved);

struct ExperimentResult {
  ExperimentConfig config;   ///< resolved
  RecurrenceData rec;        ///< canonical, through degree `completed_degree`
  int completed_degree = 0;  ///< N unless a numerical failure occurred
  ErrorReport report;
  std::optional<std::string> failure;  ///< set when the run ends with exit status 2
  std::optional<MsDiagnostics> ms;
  ChristoffelMass christoffel;
  Eigen::Index num_nodes = 0;
  std::vector<std::pair<double, double>> bounding_box;

  bool ok() const { return !failure.has_value(); }
};

/// Builds the measure, runs the method, and fills the diagnostics.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Writes manifest.json, recurrence.json, error_matrix.csv, cond.csv,
/// cc_residuals.csv and, for d = 2, christoffel.csv into config.output_dir.
void write_outputs(const ExperimentResult& result);

/// Deterministic text form of a double: shortest round-trip digits, or inf/-inf/nan.
std::string format_double(double v);

}  // namespace mvop
