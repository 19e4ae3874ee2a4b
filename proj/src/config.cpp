#include "foldlab/cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace foldlab::cli {

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::CurvatureScan: return "curvature-scan";
    case ExperimentKind::Hausdorff: return "hausdorff";
    case ExperimentKind::FoldConvergence: return "fold-convergence";
    case ExperimentKind::BoundaryGeodesic: return "boundary-geodesic";
    case ExperimentKind::QuasigeodesicCheck: return "quasigeodesic-check";
    case ExperimentKind::Trajectory: return "trajectory";
  }
  return "unknown";
}

namespace {

class Reader {
 public:
  explicit Reader(std::string path) : path_(std::move(path)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
    std::ostringstream os;
    os << path_;
    const YAML::Mark mark = at.Mark();
    if (mark.line >= 0) os << ':' << mark.line + 1 << ':' << mark.column + 1;
    os << ": " << msg;
    throw Error(ErrorKind::Config, os.str());
  }

  void expect_map(const YAML::Node& node, const std::string& what) const {
    if (!node.IsMap()) fail(node, what + " must be a mapping");
  }

  void allow_keys(const YAML::Node& node, const std::string& what, std::initializer_list<const char*> keys) const {
    expect_map(node, what);
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, "unknown key '" + key + "' in " + what);
    }
  }

  YAML::Node need(const YAML::Node& map, const char* key, const std::string& what) const {
    const YAML::Node n = map[key];
    if (!n) fail(map, "missing required key '" + std::string(key) + "' in " + what);
    return n;
  }

  double number(const YAML::Node& n, const char* key) const {
    if (!n.IsScalar()) fail(n, std::string(key) + " must be a number");
    try {
      const double v = n.as<double>();
      if (!std::isfinite(v)) fail(n, std::string(key) + " must be finite");
      return v;
    } catch (const YAML::BadConversion&) {
      fail(n, std::string(key) + " must be a number");
    }
  }

  long integer(const YAML::Node& n, const char* key) const {
    if (!n.IsScalar()) fail(n, std::string(key) + " must be an integer");
    try {
      return n.as<long>();
    } catch (const YAML::BadConversion&) {
      fail(n, std::string(key) + " must be an integer");
    }
  }

  std::string text(const YAML::Node& n, const char* key) const {
    if (!n.IsScalar()) fail(n, std::string(key) + " must be a string");
    return n.as<std::string>();
  }

  bool boolean(const YAML::Node& n, const char* key) const {
    if (!n.IsScalar()) fail(n, std::string(key) + " must be true or false");
    try {
      return n.as<bool>();
    } catch (const YAML::BadConversion&) {
      fail(n, std::string(key) + " must be true or false");
    }
  }

  Eigen::VectorXd vector(const YAML::Node& n, const char* key) const {
    if (!n.IsSequence() || n.size() == 0) fail(n, std::string(key) + " must be a non-empty list of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(n.size()));
    for (std::size_t i = 0; i < n.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(n[i], key);
    return v;
  }

  std::vector<double> list(const YAML::Node& n, const char* key) const {
    const Eigen::VectorXd v = vector(n, key);
    return {v.data(), v.data() + v.size()};
  }

  double positive(const YAML::Node& n, const char* key) const {
    const double v = number(n, key);
    if (!(v > 0)) fail(n, std::string(key) + " must be > 0");
    return v;
  }

  int positive_int(const YAML::Node& n, const char* key, long lo = 1) const {
    const long v = integer(n, key);
    if (v < lo || v > 100000000) fail(n, std::string(key) + " must be an integer >= " + std::to_string(lo));
    return static_cast<int>(v);
  }

  // Optional setters: only touch `out` when the key is present.
  void opt_number(const YAML::Node& map, const char* key, double& out) const {
    if (const auto n = map[key]) out = number(n, key);
  }
  void opt_positive(const YAML::Node& map, const char* key, double& out) const {
    if (const auto n = map[key]) out = positive(n, key);
  }
  void opt_positive_int(const YAML::Node& map, const char* key, int& out, long lo = 1) const {
    if (const auto n = map[key]) out = positive_int(n, key, lo);
  }
  void opt_vector(const YAML::Node& map, const char* key, std::optional<Eigen::VectorXd>& out) const {
    if (const auto n = map[key]) out = vector(n, key);
  }

  /// `<name>s: [..]` or a geometric rule `<name>_rule: {...}`.
  std::vector<double> lambda_sequence(const YAML::Node& params) const {
    const auto list_node = params["lambdas"];
    const auto rule = params["lambda_rule"];
    if (list_node && rule) fail(params, "give either lambdas or lambda_rule, not both");
    std::vector<double> out;
    if (list_node) {
      out = list(list_node, "lambdas");
    } else if (rule) {
      allow_keys(rule, "lambda_rule", {"base", "k_min", "k_max"});
      const double base = number(need(rule, "base", "lambda_rule"), "base");
      if (!(base > 1)) fail(rule["base"], "base must be > 1");
      const long k_min = integer(need(rule, "k_min", "lambda_rule"), "k_min");
      const long k_max = integer(need(rule, "k_max", "lambda_rule"), "k_max");
      if (k_max < k_min || k_max - k_min > 64) fail(rule, "lambda_rule needs k_min <= k_max (at most 65 values)");
      for (long k = k_min; k <= k_max; ++k) out.push_back(std::pow(base, -double(k)));
    } else {
      fail(params, "missing required key 'lambdas' (or 'lambda_rule') in params");
    }
    for (double l : out)
      if (!(l > 0 && l < 1)) fail(list_node ? list_node : rule, "lambdas must lie in (0, 1)");
    return out;
  }

  std::vector<double> angle_sequence(const YAML::Node& params) const {
    const auto list_node = params["angles"];
    const auto rule = params["angle_rule"];
    if (list_node && rule) fail(params, "give either angles or angle_rule, not both");
    std::vector<double> out;
    if (list_node) {
      out = list(list_node, "angles");
    } else if (rule) {
      allow_keys(rule, "angle_rule", {"start", "ratio", "count"});
      const double start = positive(need(rule, "start", "angle_rule"), "start");
      const double ratio = positive(need(rule, "ratio", "angle_rule"), "ratio");
      if (!(ratio < 1)) fail(rule["ratio"], "ratio must lie in (0, 1)");
      const int count = positive_int(need(rule, "count", "angle_rule"), "count");
      for (int k = 0; k < count; ++k) out.push_back(start * std::pow(ratio, double(k)));
    } else {
      fail(params, "missing required key 'angles' (or 'angle_rule') in params");
    }
    for (double a : out)
      if (!(a > 0 && a < 1.5707963267948966)) fail(list_node ? list_node : rule, "angles must lie in (0, pi/2)");
    return out;
  }

  Polynomial polynomial(const YAML::Node& n, int dim, const char* key) const {
    if (!n.IsSequence() || n.size() == 0) fail(n, std::string(key) + " must be a non-empty list of monomials");
    std::vector<Monomial> terms;
    for (const auto& t : n) {
      allow_keys(t, "monomial", {"coeff", "powers"});
      Monomial m;
      m.coeff = number(need(t, "coeff", "monomial"), "coeff");
      const auto powers = need(t, "powers", "monomial");
      if (!powers.IsSequence() || static_cast<int>(powers.size()) != dim)
        fail(powers, "powers must list one exponent per table coordinate");
      for (const auto& p : powers) {
        const long e = integer(p, "powers");
        if (e < 0 || e > 64) fail(p, "exponents must lie in [0, 64]");
        m.powers.push_back(static_cast<int>(e));
      }
      terms.push_back(std::move(m));
    }
    return Polynomial(dim, std::move(terms));
  }

 private:
  std::string path_;
};

TableConfig parse_table(const Reader& rd, const YAML::Node& node) {
  rd.allow_keys(node, "table", {"kind", "dim", "terms", "region", "p0"});
  TableConfig t;
  t.kind = rd.text(rd.need(node, "kind", "table"), "kind");
  static const std::set<std::string> kinds{"disk", "half-space", "parabola", "spherical-halfspace", "polynomial"};
  if (!kinds.count(t.kind)) rd.fail(node["kind"], "unknown table kind '" + t.kind + "'");
  if (t.kind == "spherical-halfspace") t.dim = 3;
  rd.opt_positive_int(node, "dim", t.dim, 1);
  if (t.kind == "parabola" && t.dim != 2) rd.fail(node["dim"], "the parabola table is planar (dim 2)");
  if (t.kind == "spherical-halfspace" && t.dim < 2) rd.fail(node["dim"], "spherical-halfspace needs dim >= 2");
  if (t.kind == "polynomial") {
    t.terms = rd.polynomial(rd.need(node, "terms", "table"), t.dim, "terms").terms();
    rd.need(node, "region", "table (polynomial tables need an explicit U)");
    rd.need(node, "p0", "table (polynomial tables need an explicit p0)");
  } else if (node["terms"]) {
    rd.fail(node["terms"], "terms are only accepted for polynomial tables");
  }
  if (const auto r = node["region"]) {
    rd.allow_keys(r, "region", {"center", "radius", "constraints"});
    RegionConfig rc;
    rc.center = rd.vector(rd.need(r, "center", "region"), "center");
    if (rc.center.size() != t.dim) rd.fail(r["center"], "region center must have table dimension");
    rc.radius = rd.positive(rd.need(r, "radius", "region"), "radius");
    if (const auto cs = r["constraints"]) {
      if (!cs.IsSequence()) rd.fail(cs, "constraints must be a list");
      for (const auto& c : cs) {
        rd.allow_keys(c, "constraint", {"terms", "lower", "upper"});
        RegionConstraint rcn;
        rcn.poly = rd.polynomial(rd.need(c, "terms", "constraint"), t.dim, "terms");
        rd.opt_number(c, "lower", rcn.lower);
        rd.opt_number(c, "upper", rcn.upper);
        if (!(rcn.lower < rcn.upper)) rd.fail(c, "constraint needs lower < upper");
        rc.constraints.push_back(std::move(rcn));
      }
    }
    t.region = std::move(rc);
  }
  if (const auto p = node["p0"]) {
    t.p0 = rd.vector(p, "p0");
    if (t.p0->size() != t.dim) rd.fail(p, "p0 must have table dimension");
  }
  return t;
}

ScanParams parse_scan(const Reader& rd, const YAML::Node& p) {
  rd.allow_keys(p, "params",
                {"lambdas", "lambda_rule", "kappa", "grid_per_axis", "boundary_points", "random_planes", "tol",
                 "check_conditions"});
  ScanParams s;
  s.lambdas = rd.lambda_sequence(p);
  s.kappa = rd.number(rd.need(p, "kappa", "params"), "kappa");
  rd.opt_positive_int(p, "grid_per_axis", s.grid_per_axis, 2);
  rd.opt_positive_int(p, "boundary_points", s.boundary_points, 0);
  rd.opt_positive_int(p, "random_planes", s.random_planes, 0);
  rd.opt_positive(p, "tol", s.tol);
  if (const auto n = p["check_conditions"]) s.check_conditions = rd.boolean(n, "check_conditions");
  return s;
}

HausdorffParams parse_hausdorff(const Reader& rd, const YAML::Node& p) {
  rd.allow_keys(p, "params", {"lambdas", "lambda_rule", "grid_per_axis", "slack"});
  HausdorffParams h;
  h.lambdas = rd.lambda_sequence(p);
  rd.opt_positive_int(p, "grid_per_axis", h.grid_per_axis, 3);
  rd.opt_positive(p, "slack", h.slack);
  return h;
}

FoldConvergenceParams parse_fold_convergence(const Reader& rd, const YAML::Node& p) {
  rd.allow_keys(p, "params",
                {"lambdas", "lambda_rule", "T", "dt", "direction", "kappa", "tol_conv", "tol_qg", "curvature_step"});
  FoldConvergenceParams f;
  f.lambdas = rd.lambda_sequence(p);
  for (std::size_t k = 1; k < f.lambdas.size(); ++k)
    if (!(f.lambdas[k] < f.lambdas[k - 1])) rd.fail(p, "lambdas must be strictly decreasing");
  f.T = rd.positive(rd.need(p, "T", "params"), "T");
  f.dt = rd.positive(rd.need(p, "dt", "params"), "dt");
  if (const auto d = p["direction"]) {
    rd.allow_keys(d, "direction", {"a", "b", "tangent"});
    rd.opt_number(d, "a", f.a);
    rd.opt_number(d, "b", f.b);
    if (f.a < 0 || f.b < 0 || f.a + f.b <= 0) rd.fail(d, "direction weights a, b must be >= 0, not both 0");
    rd.opt_vector(d, "tangent", f.tangent);
  }
  rd.opt_number(p, "kappa", f.kappa);
  rd.opt_positive(p, "tol_conv", f.tol_conv);
  if (const auto n = p["tol_qg"]) f.tol_qg = rd.positive(n, "tol_qg");
  rd.opt_positive(p, "curvature_step", f.curvature_step);
  return f;
}

BoundaryGeodesicParams parse_boundary_geodesic(const Reader& rd, const YAML::Node& p) {
  rd.allow_keys(p, "params", {"angles", "angle_rule", "T", "dt", "tangent", "tol_conv"});
  BoundaryGeodesicParams b;
  b.angles = rd.angle_sequence(p);
  for (std::size_t k = 1; k < b.angles.size(); ++k)
    if (!(b.angles[k] < b.angles[k - 1])) rd.fail(p, "angles must be strictly decreasing");
  b.T = rd.positive(rd.need(p, "T", "params"), "T");
  b.dt = rd.positive(rd.need(p, "dt", "params"), "dt");
  rd.opt_vector(p, "tangent", b.tangent);
  rd.opt_positive(p, "tol_conv", b.tol_conv);
  return b;
}

QuasigeodesicParams parse_quasigeodesic(const Reader& rd, const YAML::Node& p) {
  rd.allow_keys(p, "params",
                {"curve", "kappa", "dt", "tol_qg", "use_table", "reference_points", "fixed_points", "random_points",
                 "x0", "v0", "T"});
  QuasigeodesicParams q;
  q.curve = rd.text(rd.need(p, "curve", "params"), "curve");
  static const std::set<std::string> curves{"circle-arc", "corner", "convex-kink", "billiard"};
  if (!curves.count(q.curve)) rd.fail(p["curve"], "unknown curve '" + q.curve + "'");
  rd.opt_number(p, "kappa", q.kappa);
  q.dt = rd.positive(rd.need(p, "dt", "params"), "dt");
  if (const auto n = p["tol_qg"]) q.tol_qg = rd.positive(n, "tol_qg");
  if (const auto n = p["use_table"]) q.use_table = rd.boolean(n, "use_table");
  if (const auto r = p["reference_points"]) {
    if (!r.IsSequence() || r.size() == 0) rd.fail(r, "reference_points must be a non-empty list of points");
    for (const auto& pt : r) q.reference_points.push_back(rd.vector(pt, "reference_points"));
  }
  rd.opt_positive_int(p, "fixed_points", q.fixed_points, 0);
  rd.opt_positive_int(p, "random_points", q.random_points, 0);
  rd.opt_vector(p, "x0", q.x0);
  rd.opt_vector(p, "v0", q.v0);
  rd.opt_positive(p, "T", q.T);
  if (q.curve == "billiard" && (!q.x0 || !q.v0)) rd.fail(p, "the billiard curve needs x0 and v0");
  if (!q.use_table && q.reference_points.empty()) rd.fail(p, "without a table, reference_points are required");
  return q;
}

TrajectoryParams parse_trajectory(const Reader& rd, const YAML::Node& p) {
  rd.allow_keys(p, "params", {"mode", "x0", "v0", "T", "dt", "lambda", "sheet", "curvature_step"});
  TrajectoryParams t;
  t.mode = rd.text(rd.need(p, "mode", "params"), "mode");
  static const std::set<std::string> modes{"billiard", "fold", "table-geodesic", "boundary-geodesic"};
  if (!modes.count(t.mode)) rd.fail(p["mode"], "unknown trajectory mode '" + t.mode + "'");
  t.x0 = rd.vector(rd.need(p, "x0", "params"), "x0");
  t.v0 = rd.vector(rd.need(p, "v0", "params"), "v0");
  t.T = rd.number(rd.need(p, "T", "params"), "T");
  if (t.T < 0) rd.fail(p["T"], "T must be >= 0");
  t.dt = rd.positive(rd.need(p, "dt", "params"), "dt");
  if (const auto n = p["lambda"]) {
    t.lambda = rd.positive(n, "lambda");
    if (t.lambda > 1) rd.fail(n, "lambda must lie in (0, 1]");
  }
  if (const auto n = p["sheet"]) {
    const long s = rd.integer(n, "sheet");
    if (s != 1 && s != -1) rd.fail(n, "sheet must be 1 or -1");
    t.sheet = static_cast<int>(s);
  }
  rd.opt_positive(p, "curvature_step", t.curvature_step);
  return t;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& path) {
  Reader rd(path);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << path << ':' << e.mark.line + 1 << ':' << e.mark.column + 1 << ": " << e.msg;
    throw Error(ErrorKind::Config, os.str());
  }
  rd.allow_keys(root, "config", {"name", "experiment", "table", "model", "seed", "workers", "output_dir", "params"});

  ExperimentConfig cfg;
  cfg.source = text;
  cfg.path = path;
  cfg.name = rd.text(rd.need(root, "name", "config"), "name");
  if (cfg.name.empty()) rd.fail(root["name"], "name must be non-empty");

  const auto exp_node = rd.need(root, "experiment", "config");
  const std::string exp = rd.text(exp_node, "experiment");
  bool found = false;
  for (auto k : {ExperimentKind::CurvatureScan, ExperimentKind::Hausdorff, ExperimentKind::FoldConvergence,
                 ExperimentKind::BoundaryGeodesic, ExperimentKind::QuasigeodesicCheck, ExperimentKind::Trajectory})
    if (to_string(k) == exp) cfg.experiment = k, found = true;
  if (!found) rd.fail(exp_node, "unknown experiment '" + exp + "'");

  cfg.table = parse_table(rd, rd.need(root, "table", "config"));

  const auto model_node = rd.need(root, "model", "config");
  const std::string model = rd.text(model_node, "model");
  if (model == "euclidean")
    cfg.model = ModelKind::Euclidean;
  else if (model == "hyperbolic")
    cfg.model = ModelKind::Hyperbolic;
  else if (model == "spherical")
    cfg.model = ModelKind::Spherical;
  else
    rd.fail(model_node, "unknown model '" + model + "' (euclidean, hyperbolic, spherical)");

  if (const auto n = root["seed"]) {
    const long s = rd.integer(n, "seed");
    if (s < 0) rd.fail(n, "seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (const auto n = root["workers"]) cfg.workers = rd.positive_int(n, "workers");
  if (const auto n = root["output_dir"]) cfg.output_dir = rd.text(n, "output_dir");

  const auto params = rd.need(root, "params", "config");
  switch (cfg.experiment) {
    case ExperimentKind::CurvatureScan: cfg.params = parse_scan(rd, params); break;
    case ExperimentKind::Hausdorff: cfg.params = parse_hausdorff(rd, params); break;
    case ExperimentKind::FoldConvergence: cfg.params = parse_fold_convergence(rd, params); break;
    case ExperimentKind::BoundaryGeodesic: cfg.params = parse_boundary_geodesic(rd, params); break;
    case ExperimentKind::QuasigeodesicCheck: cfg.params = parse_quasigeodesic(rd, params); break;
    case ExperimentKind::Trajectory: cfg.params = parse_trajectory(rd, params); break;
  }

  // Table construction validates p0 and U; surface its errors as schema errors.
  try {
    (void)build_table(cfg.table);
  } catch (const Error& e) {
    rd.fail(root["table"], e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Config, path + ": cannot read config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

TableSpec<double> build_table(const TableConfig& c) {
  std::optional<TableSpec<double>> base;
  if (c.kind == "disk")
    base = tables::disk<double>(c.dim);
  else if (c.kind == "half-space")
    base = tables::half_space<double>(c.dim);
  else if (c.kind == "parabola")
    base = tables::parabola_complement<double>();
  else if (c.kind == "spherical-halfspace")
    base = tables::spherical_half_space<double>(c.dim);

  if (c.kind == "polynomial") {
    require(c.region && c.p0, ErrorKind::Config, "polynomial tables need region and p0");
    Region<double> region{c.region->center, c.region->radius, c.region->constraints};
    return TableSpec<double>::from_polynomial(TableKind::Polynomial, "polynomial", Polynomial(c.dim, c.terms),
                                              std::move(region), *c.p0);
  }
  require(base.has_value(), ErrorKind::Config, "unknown table kind '" + c.kind + "'");
  if (!c.region && !c.p0) return *base;
  Region<double> region = base->region();
  if (c.region) region = Region<double>{c.region->center, c.region->radius, c.region->constraints};
  return base->rebased(std::move(region), c.p0 ? *c.p0 : base->p0());
}

AmbientModel build_model(ModelKind kind, const TableSpec<double>& table) {
  switch (kind) {
    case ModelKind::Euclidean: return AmbientModel::euclidean(table.n() + 1);
    case ModelKind::Hyperbolic: return AmbientModel::hyperbolic(table.n() + 1);
    case ModelKind::Spherical: return AmbientModel::spherical(table.n() + 1);
  }
  return AmbientModel::euclidean(table.n() + 1);
}

}  // namespace foldlab::cli
