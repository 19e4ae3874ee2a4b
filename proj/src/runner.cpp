#include "foldlab/cli/runner.hpp"

#include "foldlab/convergence.hpp"
#include "output.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>

#ifndef FOLDLAB_VERSION
#define FOLDLAB_VERSION "0.0.0"
#endif

namespace foldlab::cli {

using io::Json;
using Vec = Eigen::VectorXd;

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Config:
    case ErrorKind::InvalidInput:
    case ErrorKind::Precondition:
    case ErrorKind::OutsideTable:
      return exit_config;
    default:
      return exit_numeric;
  }
}

namespace {

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

struct Outcome {
  Json report = Json::object();
  std::string csv;
  std::vector<std::pair<std::string, std::string>> files;  // name, content
  std::string verdict;
  int exit_code = exit_ok;
  std::string summary;
};

struct Context {
  const ExperimentConfig& cfg;
  TableSpec<double> table;
  AmbientModel model;
  std::uint64_t seed;
  int workers;
};

int exit_for(Verdict v) { return v == Verdict::Fail ? exit_verdict_fail : exit_ok; }

std::string fmt_short(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// --- curvature-scan ---

Outcome run_scan(const Context& ctx, const ScanParams& p) {
  ScanSpec spec;
  spec.grid_per_axis = p.grid_per_axis;
  spec.boundary_points = p.boundary_points;
  spec.random_planes = p.random_planes;
  spec.tol = p.tol;
  spec.seed = ctx.seed;
  spec.workers = ctx.workers;
  const auto rep = scan_curvature(ctx.table, ctx.model, p.lambdas, p.kappa, spec);

  Outcome out;
  Json rows = Json::array();
  io::Csv csv({"lambda", "min_sec", "n_points", "n_samples", "n_skipped", "verdict"});
  for (const auto& r : rep.rows) {
    rows.push_back({{"lambda", r.lambda},
                    {"min_sec", io::num(r.min_sec)},
                    {"argmin_point", io::vec(r.argmin_point)},
                    {"argmin_plane", io::mat_columns(r.argmin_plane)},
                    {"n_points", r.n_points},
                    {"n_samples", r.n_samples},
                    {"n_skipped", r.n_skipped},
                    {"verdict", to_string(r.verdict)}});
    csv.cell(r.lambda).cell(r.min_sec).cell(r.n_points).cell(r.n_samples).cell(r.n_skipped);
    csv.cell(std::string(to_string(r.verdict))).end_row();
  }
  out.report["kappa"] = p.kappa;
  out.report["tol"] = p.tol;
  out.report["global_min"] = io::num(rep.global_min);
  out.report["argmin_lambda"] = rep.rows.empty() ? Json(nullptr) : Json(rep.rows[rep.argmin_row].lambda);
  out.report["rows"] = rows;
  if (p.check_conditions) {
    if (ctx.model.kind == ModelKind::Spherical) {
      out.report["sufficient_conditions"] = {{"applicable", false}};
    } else {
      const auto c = check_h_sufficient_conditions(ctx.table, ctx.model);
      out.report["sufficient_conditions"] = {{"applicable", true},
                                             {"samples", c.samples},
                                             {"max_hessian_eigenvalue", io::num(c.max_hessian_eigenvalue)},
                                             {"concave", c.concave},
                                             {"homogeneity_applicable", c.homogeneity_applicable},
                                             {"min_homogeneity", io::num(c.min_homogeneity)},
                                             {"pass", c.pass}};
    }
  }
  out.verdict = to_string(rep.verdict);
  out.report["verdict"] = out.verdict;
  out.csv = csv.str();
  out.exit_code = exit_ok;  // scans report their verdict without failing the run
  out.summary = "min sectional curvature " + fmt_short(rep.global_min) + " against bound " + fmt_short(p.kappa) +
                ": " + out.verdict;
  return out;
}

// --- hausdorff ---

Outcome run_hausdorff(const Context& ctx, const HausdorffParams& p) {
  HausdorffSpec spec;
  spec.grid_per_axis = p.grid_per_axis;
  spec.slack = p.slack;
  spec.workers = ctx.workers;
  Outcome out;
  Json rows = Json::array();
  io::Csv csv({"lambda", "fold_to_table", "table_to_fold", "max_sqrt_f", "metric_constant", "bound", "within_bound"});
  bool all = true;
  for (double l : p.lambdas) {
    const auto r = hausdorff_distance(Fold<double>(ctx.table, ctx.model, l), spec);
    all = all && r.within_bound;
    rows.push_back({{"lambda", l},
                    {"fold_to_table", r.fold_to_table},
                    {"table_to_fold", r.table_to_fold},
                    {"max_sqrt_f", r.max_sqrt_f},
                    {"metric_constant", r.metric_constant},
                    {"bound", r.bound},
                    {"within_bound", r.within_bound},
                    {"n_table", r.n_table},
                    {"n_fold", r.n_fold}});
    csv.cell(l).cell(r.fold_to_table).cell(r.table_to_fold).cell(r.max_sqrt_f).cell(r.metric_constant).cell(r.bound);
    csv.cell(long(r.within_bound)).end_row();
  }
  out.report["slack"] = p.slack;
  out.report["rows"] = rows;
  out.verdict = to_string(all ? Verdict::Pass : Verdict::Fail);
  out.report["verdict"] = out.verdict;
  out.csv = csv.str();
  out.exit_code = all ? exit_ok : exit_verdict_fail;
  out.summary = std::to_string(p.lambdas.size()) + " lambdas, all within D lambda C + slack: " + out.verdict;
  return out;
}

// --- fold-convergence / boundary-geodesic ---

Json convergence_rows(const ConvergenceReport<double>& rep, const char* parameter) {
  Json rows = Json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{parameter, r.parameter},
                    {"sup_distance", io::num(r.sup_distance)},
                    {"synchronous_distance", io::num(r.synchronous_distance)},
                    {"expected", io::num(r.expected)},
                    {"angle_error", io::num(r.angle_error)},
                    {"qg_residual", io::num(r.qg_residual)},
                    {"lipschitz_excess", io::num(r.lipschitz_excess)},
                    {"bounces", r.bounces}});
  return rows;
}

Outcome run_fold_convergence(const Context& ctx, const FoldConvergenceParams& p) {
  DirectionSpec<double> dir;
  dir.a = p.a;
  dir.b = p.b;
  dir.tangent = p.tangent;
  FoldConvergenceOptions opts;
  opts.tol_conv = p.tol_conv;
  opts.tol_qg = p.tol_qg.value_or(0.0);
  opts.kappa = p.kappa;
  opts.integrator.curvature_step = p.curvature_step;
  opts.seed = ctx.seed;
  opts.workers = ctx.workers;
  const auto rep = fold_convergence_experiment(ctx.table, ctx.model, ctx.table.p0(), dir, p.lambdas, p.T, p.dt, opts);

  Outcome out;
  io::Csv csv({"lambda", "sup_distance", "angle_error", "qg_residual", "lipschitz_excess"});
  for (const auto& r : rep.rows)
    csv.cell(r.parameter).cell(r.sup_distance).cell(r.angle_error).cell(r.qg_residual).cell(r.lipschitz_excess).end_row();
  out.report["T"] = rep.T;
  out.report["dt"] = rep.dt;
  out.report["kappa"] = rep.kappa;
  out.report["tol_conv"] = rep.tol_conv;
  out.report["tol_qg"] = rep.tol_qg;
  out.report["scan_verdict"] = to_string(rep.scan_verdict);
  out.report["monotone"] = rep.monotone;
  out.report["lipschitz_ok"] = rep.lipschitz_ok;
  out.report["rows"] = convergence_rows(rep, "lambda");
  if (rep.final_qg) {
    out.report["final_quasigeodesic"] = {{"max_residual", io::num(rep.final_qg->max_residual)},
                                         {"reference_points", rep.final_qg->reference_points.size()},
                                         {"visibility_failures", rep.final_qg->visibility_failures},
                                         {"verdict", to_string(rep.final_qg->verdict)}};
  }
  if (!rep.note.empty()) out.report["note"] = rep.note;
  out.verdict = to_string(rep.verdict);
  out.report["verdict"] = out.verdict;
  out.csv = csv.str();
  out.files.emplace_back("trajectory_fold.csv", io::curve_csv(rep.final_ambient_curve));
  out.files.emplace_back("trajectory_reference.csv", io::billiard_csv(rep.reference_curve, rep.reference_bounces));
  out.files.emplace_back("bounces.json", io::bounces_json(rep.reference_bounces).dump(2) + "\n");
  out.exit_code = exit_for(rep.verdict);
  out.summary = "final sup-distance " + fmt_short(rep.rows.back().sup_distance) + " at lambda " +
                fmt_short(rep.rows.back().parameter) + ": " + out.verdict;
  return out;
}

Outcome run_boundary_geodesic(const Context& ctx, const BoundaryGeodesicParams& p) {
  const auto frame = boundary_frame(ctx.table, ctx.model, ctx.table.p0());
  const Vec tangent = p.tangent ? *p.tangent : Vec(frame.tangent_basis.col(0));
  require(tangent.size() == ctx.table.n(), ErrorKind::Config, "tangent must have table dimension");
  BoundaryGeodesicOptions opts;
  opts.tol_conv = p.tol_conv;
  opts.workers = ctx.workers;
  const auto rep =
      boundary_geodesic_experiment(ctx.table, ctx.model, ctx.table.p0(), tangent, p.angles, p.T, p.dt, opts);

  Outcome out;
  io::Csv csv({"theta", "sup_distance", "synchronous_distance", "one_minus_cos_theta", "bounces"});
  for (const auto& r : rep.rows)
    csv.cell(r.parameter).cell(r.sup_distance).cell(r.synchronous_distance).cell(r.expected).cell(r.bounces).end_row();
  out.report["T"] = rep.T;
  out.report["dt"] = rep.dt;
  out.report["tol_conv"] = rep.tol_conv;
  out.report["monotone"] = rep.monotone;
  out.report["rows"] = convergence_rows(rep, "theta");
  if (!rep.note.empty()) out.report["note"] = rep.note;
  out.verdict = to_string(rep.verdict);
  out.report["verdict"] = out.verdict;
  out.csv = csv.str();
  out.files.emplace_back("trajectory_billiard.csv", io::billiard_csv(rep.final_curve, rep.reference_bounces));
  out.files.emplace_back("trajectory_boundary.csv", io::curve_csv(rep.reference_curve));
  out.files.emplace_back("bounces.json", io::bounces_json(rep.reference_bounces).dump(2) + "\n");
  out.exit_code = exit_for(rep.verdict);
  out.summary = "final sup-distance " + fmt_short(rep.rows.back().sup_distance) + " at theta " +
                fmt_short(rep.rows.back().parameter) + ": " + out.verdict;
  return out;
}

// --- quasigeodesic-check ---

SampledCurve<double> sample(double t0, double t1, double dt, const std::function<Vec(double)>& c,
                            const std::function<Vec(double)>& v) {
  const long steps = std::max(2L, std::lround((t1 - t0) / dt));
  const double h = (t1 - t0) / double(steps);
  SampledCurve<double> curve;
  curve.dt = h;
  for (long i = 0; i <= steps; ++i) {
    const double t = t0 + double(i) * h;
    curve.push(t, c(t), v(t));
  }
  return curve;
}

SampledCurve<double> builtin_curve(const Context& ctx, const QuasigeodesicParams& p) {
  const double s = 1.0 / std::sqrt(2.0);
  if (p.curve == "circle-arc")
    return sample(0, pi_v<double>, p.dt, [](double t) { return Vec((Vec(2) << std::cos(t), std::sin(t)).finished()); },
                  [](double t) { return Vec((Vec(2) << -std::sin(t), std::cos(t)).finished()); });
  if (p.curve == "corner")
    return sample(-std::sqrt(2.0), std::sqrt(2.0), p.dt,
                  [s](double t) { return Vec((Vec(2) << t * s, 1 - std::abs(t) * s).finished()); },
                  [s](double t) { return Vec((Vec(2) << s, t < 0 ? s : -s).finished()); });
  if (p.curve == "convex-kink")
    return sample(-1, 1, p.dt,
                  [](double t) { return t <= 0 ? Vec((Vec(2) << t, 0).finished()) : Vec((Vec(2) << 0, t).finished()); },
                  [](double t) { return t < 0 ? Vec((Vec(2) << 1, 0).finished()) : Vec((Vec(2) << 0, 1).finished()); });
  const auto g = induced_metric_on_H(ctx.model, *p.x0);
  require(p.x0->size() == ctx.table.n() && p.v0->size() == ctx.table.n(), ErrorKind::Config,
          "x0 and v0 must have table dimension");
  return billiard_trajectory(ctx.table, ctx.model, *p.x0, g.normalized(*p.v0), p.T, p.dt).base;
}

Outcome run_quasigeodesic(const Context& ctx, const QuasigeodesicParams& p) {
  const auto curve = builtin_curve(ctx, p);
  require(curve.dim() == ctx.table.n(), ErrorKind::Config, "curve dimension does not match the table");
  QuasigeodesicOptions opts;
  opts.tol = p.tol_qg.value_or(10 * curve.dt);
  std::vector<Vec> refs = p.reference_points;
  for (const auto& r : refs) require(r.size() == ctx.table.n(), ErrorKind::Config, "reference point dimension");
  if (refs.empty())
    refs = select_reference_points(curve, ctx.model, ctx.table, p.kappa, ctx.seed, p.fixed_points, p.random_points,
                                   opts);
  const auto rep =
      quasigeodesic_residual(curve, ctx.model, p.use_table ? &ctx.table : nullptr, p.kappa, refs, opts, p.curve);

  Outcome out;
  std::vector<std::string> header{"point_index"};
  for (int i = 1; i <= ctx.table.n(); ++i) header.push_back("p_" + std::to_string(i));
  header.push_back("residual");
  io::Csv csv(header);
  Json points = Json::array();
  for (std::size_t i = 0; i < rep.reference_points.size(); ++i) {
    csv.cell(long(i));
    for (Eigen::Index k = 0; k < rep.reference_points[i].size(); ++k) csv.cell(rep.reference_points[i](k));
    csv.cell(rep.residuals[i]).end_row();
    points.push_back({{"point", io::vec(rep.reference_points[i])}, {"residual", io::num(rep.residuals[i])}});
  }
  out.report["curve"] = p.curve;
  out.report["kappa"] = p.kappa;
  out.report["dt"] = curve.dt;
  out.report["tol"] = rep.tol;
  out.report["max_residual"] = io::num(rep.max_residual);
  out.report["worst_time"] = rep.worst_index >= 0 ? Json(curve.times[std::size_t(rep.worst_index)]) : Json(nullptr);
  out.report["visibility_failures"] = rep.visibility_failures;
  out.report["range_rejections"] = rep.range_rejections;
  out.report["reference_points"] = points;
  out.verdict = to_string(rep.verdict);
  out.report["verdict"] = out.verdict;
  out.csv = csv.str();
  out.files.emplace_back("trajectory_curve.csv", io::curve_csv(curve));
  out.exit_code = exit_for(rep.verdict);
  out.summary = p.curve + ": max residual " + fmt_short(rep.max_residual) + " (tol " + fmt_short(rep.tol) +
                "): " + out.verdict;
  return out;
}

// --- trajectory ---

Outcome run_trajectory(const Context& ctx, const TrajectoryParams& p) {
  const int n = ctx.table.n();
  IntegratorOptions integ;
  integ.curvature_step = p.curvature_step;
  Outcome out;
  SampledCurve<double> curve;
  std::vector<Bounce<double>> bounces;
  double max_speed_drift = 0, max_constraint_drift = 0;

  if (p.mode == "fold") {
    require(p.x0.size() == n && p.v0.size() == n + 1, ErrorKind::Config,
            "fold mode: x0 is a table point, v0 an ambient vector");
    const Fold<double> fold(ctx.table, ctx.model, p.lambda);
    const Vec q0 = fold.lift(p.x0, p.sheet);
    curve = integrate_fold_geodesic(fold, q0, fold_tangent_direction(fold, q0, p.v0), p.T, p.dt, integ);
    for (std::size_t i = 0; i < curve.size(); ++i) {
      const auto g = metric_tensor(ctx.model, curve.points[i]);
      max_speed_drift = std::max(max_speed_drift, std::abs(g.inner(curve.velocities[i], curve.velocities[i]) - 1));
      max_constraint_drift = std::max(max_constraint_drift, std::abs(fold.level(curve.points[i])));
    }
    out.files.emplace_back("trajectory_fold.csv", io::curve_csv(curve));
  } else {
    require(p.x0.size() == n && p.v0.size() == n, ErrorKind::Config, "x0 and v0 must have table dimension");
    const auto g = induced_metric_on_H(ctx.model, p.x0);
    if (p.mode == "billiard") {
      const auto traj = billiard_trajectory(ctx.table, ctx.model, p.x0, g.normalized(p.v0), p.T, p.dt);
      curve = traj.base;
      bounces = traj.bounces;
      out.files.emplace_back("trajectory_billiard.csv", io::billiard_csv(curve, bounces));
      out.files.emplace_back("bounces.json", io::bounces_json(bounces).dump(2) + "\n");
    } else if (p.mode == "table-geodesic") {
      curve = integrate_table_geodesic(ctx.model, p.x0, g.normalized(p.v0), p.T, p.dt, integ);
      out.files.emplace_back("trajectory_table.csv", io::curve_csv(curve));
    } else {
      const auto frame = boundary_frame(ctx.table, ctx.model, p.x0);
      const Vec v = frame.metric.normalized(frame.tangential_part(p.v0));
      curve = integrate_boundary_geodesic(ctx.table, ctx.model, p.x0, v, p.T, p.dt, integ);
      for (const auto& x : curve.points) max_constraint_drift = std::max(max_constraint_drift, std::abs(ctx.table.value(x)));
      out.files.emplace_back("trajectory_boundary.csv", io::curve_csv(curve));
    }
    for (std::size_t i = 0; i < curve.size(); ++i) {
      const auto gi = induced_metric_on_H(ctx.model, curve.points[i]);
      max_speed_drift = std::max(max_speed_drift, std::abs(gi.inner(curve.velocities[i], curve.velocities[i]) - 1));
    }
  }
  bool grazing = false;
  for (const auto& b : bounces) grazing = grazing || b.grazing;

  io::Csv csv({"samples", "bounces", "grazing", "truncated", "exit_time", "max_speed_drift", "max_constraint_drift"});
  csv.cell(long(curve.size())).cell(long(bounces.size())).cell(long(grazing)).cell(long(curve.truncated));
  csv.cell(curve.exit_time).cell(max_speed_drift).cell(max_constraint_drift).end_row();
  out.report["mode"] = p.mode;
  out.report["samples"] = curve.size();
  out.report["dt"] = curve.dt;
  out.report["final_point"] = io::vec(curve.points.back());
  out.report["final_velocity"] = io::vec(curve.velocities.back());
  out.report["bounces"] = bounces.size();
  out.report["grazing"] = grazing;
  out.report["truncated"] = curve.truncated;
  out.report["exit_time"] = io::num(curve.exit_time);
  out.report["max_speed_drift"] = max_speed_drift;
  out.report["max_constraint_drift"] = max_constraint_drift;
  out.csv = csv.str();
  out.exit_code = exit_ok;
  out.summary = p.mode + ": " + std::to_string(curve.size()) + " samples, " + std::to_string(bounces.size()) +
                " bounces" + (curve.truncated ? ", truncated on leaving U" : "");
  return out;
}

Json table_json(const TableSpec<double>& t) {
  return {{"kind", std::string(to_string(t.kind()))},
          {"dim", t.n()},
          {"p0", io::vec(t.p0())},
          {"region", {{"center", io::vec(t.region().center)}, {"radius", t.region().radius}}}};
}

}  // namespace

std::string resolve_out_dir(const ExperimentConfig& cfg, const RunOverrides& overrides) {
  if (overrides.out_dir) return *overrides.out_dir;
  if (auto e = env("FOLDLAB_OUT_DIR")) return *e;
  if (cfg.output_dir) return *cfg.output_dir;
  return "out/" + cfg.name;
}

int resolve_workers(const ExperimentConfig& cfg, const RunOverrides& overrides) {
  if (overrides.workers) return std::max(1, *overrides.workers);
  if (auto e = env("FOLDLAB_WORKERS")) {
    try {
      const int w = std::stoi(*e);
      require(w >= 1, ErrorKind::Config, "FOLDLAB_WORKERS must be a positive integer");
      return w;
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Config, "FOLDLAB_WORKERS must be a positive integer");
    }
  }
  return cfg.workers;
}

RunResult run_experiment(const ExperimentConfig& cfg, const RunOverrides& overrides) {
  const auto start = std::chrono::steady_clock::now();
  const TableSpec<double> table = build_table(cfg.table);
  Context ctx{cfg, table, build_model(cfg.model, table), overrides.seed.value_or(cfg.seed),
              resolve_workers(cfg, overrides)};

  Outcome out = std::visit(
      [&](const auto& p) -> Outcome {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ScanParams>) return run_scan(ctx, p);
        if constexpr (std::is_same_v<P, HausdorffParams>) return run_hausdorff(ctx, p);
        if constexpr (std::is_same_v<P, FoldConvergenceParams>) return run_fold_convergence(ctx, p);
        if constexpr (std::is_same_v<P, BoundaryGeodesicParams>) return run_boundary_geodesic(ctx, p);
        if constexpr (std::is_same_v<P, QuasigeodesicParams>) return run_quasigeodesic(ctx, p);
        if constexpr (std::is_same_v<P, TrajectoryParams>) return run_trajectory(ctx, p);
      },
      cfg.params);

  RunResult result;
  result.out_dir = resolve_out_dir(cfg, overrides);
  result.exit_code = out.exit_code;
  result.verdict = out.verdict;
  result.summary = out.summary;

  Json report = Json::object();
  report["name"] = cfg.name;
  report["experiment"] = std::string(to_string(cfg.experiment));
  report["model"] = std::string(to_string(cfg.model));
  report["table"] = table_json(table);
  report["seed"] = ctx.seed;
  for (auto& [k, v] : out.report.items()) report[k] = v;
  report["config"] = cfg.source;

  std::error_code ec;
  std::filesystem::create_directories(result.out_dir, ec);
  require(!ec, ErrorKind::Config, "cannot create output directory " + result.out_dir + ": " + ec.message());
  const std::filesystem::path dir(result.out_dir);
  auto emit = [&](const std::string& name, const std::string& content) {
    io::write_file((dir / name).string(), content);
    result.files.push_back(name);
  };
  emit("report.json", report.dump(2) + "\n");
  emit("report.csv", out.csv);
  for (const auto& [name, content] : out.files) emit(name, content);

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Json manifest = Json::object();
  manifest["name"] = cfg.name;
  manifest["config_path"] = cfg.path;
  manifest["config"] = cfg.source;
  manifest["versions"] = {{"foldlab", FOLDLAB_VERSION},
                          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                        "." + std::to_string(EIGEN_MINOR_VERSION)},
                          {"compiler", __VERSION__}};
  manifest["seed"] = ctx.seed;
  manifest["workers"] = ctx.workers;
  manifest["wall_time_s"] = wall;
  manifest["verdict"] = out.verdict.empty() ? Json(nullptr) : Json(out.verdict);
  manifest["exit_code"] = out.exit_code;
  Json files = result.files;
  files.push_back("manifest.json");
  manifest["files"] = files;
  emit("manifest.json", manifest.dump(2) + "\n");
  return result;
}

const std::vector<BuiltinConfig>& builtin_configs() {
  static const std::vector<BuiltinConfig> configs{
      {"parabola-euclidean", "counterexample: sec = -4/lambda^2 at p0, no uniform bound", "parabola-euclidean.yaml"},
      {"disk-euclidean", "disk fold scan, sec >= 0", "disk-euclidean.yaml"},
      {"halfspace-euclidean", "half-space fold scan, sec >= 0", "halfspace-euclidean.yaml"},
      {"disk-hyperbolic", "hyperbolic disk fold scan, sec >= -1", "disk-hyperbolic.yaml"},
      {"spherical-halfspace", "spherical half-space fold scan, sec >= 1 - 3/32", "spherical-halfspace.yaml"},
      {"disk-hausdorff", "fold-to-table Hausdorff distance equals lambda", "disk-hausdorff.yaml"},
      {"disk-euclid-convergence", "fold geodesics converge to a billiard trajectory", "disk-euclid-convergence.yaml"},
      {"example1-arc", "boundary circle arc is a 0-quasigeodesic", "example1-arc.yaml"},
      {"example2-corner", "chord pair with a bounce is a 0-quasigeodesic", "example2-corner.yaml"},
      {"convex-kink-foil", "interior convex kink fails the quasigeodesic test", "convex-kink-foil.yaml"},
      {"figure-polar-pair", "half-space bounce with a polar pair of directions", "figure-polar-pair.yaml"},
      {"shallow-billiards", "shallow disk billiards converge to the boundary arc", "shallow-billiards.yaml"},
  };
  return configs;
}

void list_builtins(std::ostream& out) {
  out << "tables:\n"
      << "  disk                 f = 1 - |x|^2, p0 = e_1, U = B(p0, 2.5)\n"
      << "  half-space           f = x_1, p0 = 0, U = B(0, 1)\n"
      << "  parabola             f = x_1^2 - x_2, p0 = 0, U = B(0, 1)\n"
      << "  spherical-halfspace  f = x_1, p0 = 0, U = B(0, 1) cut by -3/2 < 3 x_1^2 - 1 - |x'|^2 < 0\n"
      << "  polynomial           user monomials with explicit U and p0\n"
      << "models:\n"
      << "  euclidean   flat R^{n+1}, kappa = 0\n"
      << "  hyperbolic  hyperboloid chart, g = I - x x^T / (1 + |x|^2), kappa = -1\n"
      << "  spherical   stereographic chart, g = 4 / (1 + |x|^2)^2 I, kappa = 1\n"
      << "configs:\n";
  for (const auto& c : builtin_configs()) out << "  " << c.name << " (" << c.label << ")  configs/" << c.file << "\n";
}

}  // namespace foldlab::cli
