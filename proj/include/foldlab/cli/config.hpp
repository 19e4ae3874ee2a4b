#pragma once

// Experiment configuration: a YAML document validated in full (types, ranges,
// unknown keys) before anything is computed.

#include "foldlab/ambient.hpp"
#include "foldlab/table.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace foldlab::cli {

enum class ExperimentKind { CurvatureScan, Hausdorff, FoldConvergence, BoundaryGeodesic, QuasigeodesicCheck, Trajectory };

std::string_view to_string(ExperimentKind kind);

struct RegionConfig {
  Eigen::VectorXd center;
  double radius = 1;
  std::vector<RegionConstraint> constraints;
};

struct TableConfig {
  std::string kind;  // disk | half-space | parabola | spherical-halfspace | polynomial
  int dim = 2;
  std::vector<Monomial> terms;  // polynomial only
  std::optional<RegionConfig> region;
  std::optional<Eigen::VectorXd> p0;
};

struct ScanParams {
  std::vector<double> lambdas;
  double kappa = 0;
  int grid_per_axis = 61;
  int boundary_points = 64;
  int random_planes = 8;
  double tol = 1e-8;
  bool check_conditions = false;
};

struct HausdorffParams {
  std::vector<double> lambdas;
  int grid_per_axis = 201;
  double slack = 1e-3;
};

struct FoldConvergenceParams {
  std::vector<double> lambdas;
  double T = 0.5;
  double dt = 1e-3;
  double a = 0.8;
  double b = 0.6;
  std::optional<Eigen::VectorXd> tangent;
  double kappa = 0;
  double tol_conv = 5e-3;
  std::optional<double> tol_qg;  // default 10 dt
  double curvature_step = 0.01;
};

struct BoundaryGeodesicParams {
  std::vector<double> angles;
  double T = 1.5707963267948966;
  double dt = 1e-3;
  std::optional<Eigen::VectorXd> tangent;
  double tol_conv = 1e-4;
};

struct QuasigeodesicParams {
  std::string curve;  // circle-arc | corner | convex-kink | billiard
  double kappa = 0;
  double dt = 1e-3;
  std::optional<double> tol_qg;  // default 10 dt
  bool use_table = true;
  std::vector<Eigen::VectorXd> reference_points;  // explicit points; otherwise sampled
  int fixed_points = 8;
  int random_points = 8;
  std::optional<Eigen::VectorXd> x0;  // billiard only
  std::optional<Eigen::VectorXd> v0;
  double T = 1;
};

struct TrajectoryParams {
  std::string mode;  // billiard | fold | table-geodesic | boundary-geodesic
  Eigen::VectorXd x0;
  Eigen::VectorXd v0;
  double T = 1;
  double dt = 1e-3;
  double lambda = 0.5;  // fold only
  int sheet = 1;        // fold only: lift of x0 to the upper (+1) or lower (-1) sheet
  double curvature_step = 0.01;
};

using ExperimentParams = std::variant<ScanParams, HausdorffParams, FoldConvergenceParams, BoundaryGeodesicParams,
                                      QuasigeodesicParams, TrajectoryParams>;

struct ExperimentConfig {
  std::string name;
  ExperimentKind experiment = ExperimentKind::CurvatureScan;
  TableConfig table;
  ModelKind model = ModelKind::Euclidean;
  std::uint64_t seed = 1;
  int workers = 1;
  std::optional<std::string> output_dir;
  ExperimentParams params;
  std::string source;  // raw text, echoed into the manifest
  std::string path;
};

/// Parses and validates; throws Error(Config) with "path:line:col: message".
ExperimentConfig parse_config(const std::string& text, const std::string& path = "<config>");
ExperimentConfig load_config(const std::string& path);

TableSpec<double> build_table(const TableConfig& config);
AmbientModel build_model(ModelKind kind, const TableSpec<double>& table);

}  // namespace foldlab::cli
