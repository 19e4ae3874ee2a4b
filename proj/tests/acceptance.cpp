// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "foldlab/convergence.hpp"
#include "foldlab/fold.hpp"
#include "foldlab/trajectory.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

using namespace foldlab;
using oracle::Vec;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

const double pi = pi_v<double>;
const auto E3 = AmbientModel::euclidean(3);

SampledCurve<double> sample(const std::function<Vec(double)>& c, double t0, double t1, double dt) {
  SampledCurve<double> out;
  out.dt = dt;
  const long n = std::lround((t1 - t0) / dt);
  for (long i = 0; i <= n; ++i) {
    const double t = t0 + double(i) * dt, e = 1e-6;
    out.push(t, c(t), Vec((c(t + e) - c(t - e)) / (2 * e)));
  }
  return out;
}

template <typename Rng>
Vec random_fold_point(const Fold<double>& fold, Rng& rng) {
  const auto& t = fold.table();
  std::uniform_int_distribution<int> sign(0, 1);
  for (;;) {
    const Vec x = t.region().center + oracle::random_point(rng, t.n(), t.region().radius);
    if (t.contains(x) && t.value(x) > 1e-9) return fold.lift(x, sign(rng) ? 1 : -1);
  }
}

double elapsed(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

// Parabola fold at p0: K = -4 / lambda^2.
void ac1(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  for (double lambda : {0.5, 0.25, 0.1}) {
    const Fold<double> fold(tables::parabola_complement(), E3, lambda);
    const double k = sectional_curvature(fold, Vec(Vec::Zero(3)), vec({1, 0, 0}), vec({0, 0, 1}));
    const double expect = -4 / (lambda * lambda);
    o.detail << " lambda=" << lambda << ": " << k;
    o.check(std::abs(k - expect) <= 1e-6 * std::abs(expect), "relative error at lambda " + std::to_string(lambda));
  }
  const double secs = elapsed(start);
  o.detail << " (" << secs << " s)";
  o.check(secs < 1, "runtime");
}

// Disk and half-space folds in the Euclidean model have nonnegative curvature.
void ac2(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> lambdas{0.9, 0.5, 0.2, 0.05};
  for (const auto& table : {tables::disk(), tables::half_space()}) {
    const auto r = scan_curvature(table, E3, lambdas, 0.0, ScanSpec{});
    long fewest = std::numeric_limits<long>::max();
    for (const auto& row : r.rows) fewest = std::min(fewest, row.n_samples);
    o.detail << " " << table.name() << ": min " << r.global_min << ", >= " << fewest << " samples/lambda;";
    o.check(r.global_min >= -1e-8, table.name() + " minimum");
    o.check(fewest >= 10000, table.name() + " sample count");
  }
  const double secs = elapsed(start);
  o.detail << " (" << secs << " s)";
  o.check(secs < 30, "runtime");
}

// Disk fold in the hyperbolic model is bounded below by -1.
void ac3(Outcome& o) {
  const auto model = AmbientModel::hyperbolic(3);
  const auto r = scan_curvature(tables::disk(), model, {0.9, 0.5, 0.2, 0.05}, -1.0, ScanSpec{});
  o.detail << " min " << r.global_min;
  o.check(r.global_min >= -1 - 1e-6, "minimum");
  const auto s = check_h_sufficient_conditions(tables::disk(), model);
  o.detail << "; max eig D2f " << s.max_hessian_eigenvalue << ", min 2f - x.Df " << s.min_homogeneity;
  o.check(s.pass && s.concave, "sufficient conditions");
  o.check(std::abs(s.min_homogeneity - 2) <= 1e-12, "2f - x.Df = 2");
}

// Spherical half-space fold: closed-form xi against the Gauss equation, and the sec >= 1 directions.
void ac4(Outcome& o) {
  std::mt19937_64 rng(2024);
  double worst_xi = 0, min_xi = std::numeric_limits<double>::infinity(), min_sec = min_xi;
  for (double lambda : {0.9, 0.5, 0.1, 0.01}) {
    const Fold<double> fold(tables::spherical_half_space(3), AmbientModel::spherical(4), lambda);
    const double l2 = lambda * lambda;
    for (int s = 0; s < 1000; ++s) {
      const Vec q = random_fold_point(fold, rng);
      const auto fr = frame_at(fold, q);
      const double x1 = q(0), den = 4 * x1 + l2;
      const double xi = l2 * x1 * (3 * x1 * x1 - 1 - q(1) * q(1) - q(2) * q(2)) / (den * den);
      Vec v1 = Vec::Zero(4);
      v1(0) = 2 * q(3);
      v1(3) = l2;
      for (int j : {1, 2}) {
        Vec ej = Vec::Zero(4);
        ej(j) = 1;
        worst_xi = std::max(worst_xi, std::abs(sectional_curvature(fold.model(), fr, v1, ej) - 1 - xi));
      }
      min_xi = std::min(min_xi, xi);
      min_sec = std::min(min_sec, sectional_curvature(fold.model(), fr, vec({0, 1, 0, 0}), vec({0, 0, 1, 0})));
    }
  }
  o.detail << " max |sec(v1,vj) - 1 - xi| " << worst_xi << ", min xi " << min_xi << ", min sec(v2,v3) " << min_sec;
  o.check(worst_xi <= 1e-8, "xi agreement");
  o.check(min_xi >= -3.0 / 32 - 1e-9, "xi lower bound");
  o.check(min_sec >= 1 - 1e-9, "sec(vi,vj) lower bound");
}

// Hausdorff distance between fold and table.
void ac5(Outcome& o) {
  for (double lambda : {0.4, 0.2, 0.1, 0.05}) {
    const auto r = hausdorff_distance(Fold<double>(tables::disk(), E3, lambda), HausdorffSpec{});
    o.detail << " disk " << lambda << ": " << r.fold_to_table << "/" << r.table_to_fold << ";";
    o.check(std::abs(r.fold_to_table - lambda) <= 1e-3 && std::abs(r.table_to_fold - lambda) <= 1e-3,
            "disk lambda " + std::to_string(lambda));
  }
  struct Case {
    TableSpec<double> table;
    AmbientModel model;
  };
  const std::vector<Case> cases{
      {tables::disk(), AmbientModel::hyperbolic(3)},  {tables::disk(), AmbientModel::spherical(3)},
      {tables::half_space(), E3},                     {tables::parabola_complement(), E3},
      {tables::spherical_half_space(3), AmbientModel::spherical(4)},
  };
  HausdorffSpec spec;
  spec.grid_per_axis = 101;
  spec.slack = 1e-2;
  int checked = 0;
  for (const auto& c : cases)
    for (double lambda : {0.4, 0.1}) {
      const auto r = hausdorff_distance(Fold<double>(c.table, c.model, lambda), spec);
      ++checked;
      o.check(r.within_bound && r.fold_to_table <= r.bound + r.slack && r.table_to_fold <= r.bound + r.slack,
              c.table.name() + "/" + std::string(to_string(c.model.kind)) + " lambda " + std::to_string(lambda));
    }
  o.detail << " " << checked << " other table/model/lambda cases within D lambda C + slack";
}

// Fold billiards converge to the table billiard.
void ac6(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> lambdas;
  for (int k = 1; k <= 8; ++k) lambdas.push_back(std::ldexp(1.0, -k));
  const double dt = 1e-3;
  FoldConvergenceOptions opts;
  opts.tol_qg = 10 * dt;
  const auto r = fold_convergence_experiment(tables::disk(), E3, vec({1, 0}), DirectionSpec<double>{}, lambdas, 0.5, dt,
                                             opts);
  bool decreasing = r.rows.size() == 8;
  for (std::size_t k = 1; k < r.rows.size(); ++k) decreasing = decreasing && r.rows[k].sup_distance < r.rows[k - 1].sup_distance;
  const auto& last = r.rows.back();
  o.detail << " final sup " << last.sup_distance << ", qg " << last.qg_residual << ", angle " << last.angle_error;
  o.check(decreasing, "strictly decreasing sup-distance");
  o.check(last.sup_distance <= 5e-3, "final sup-distance");
  o.check(last.qg_residual <= 10 * dt, "quasigeodesic residual");
  o.check(last.angle_error <= 1e-2, "bounce polarity angle");
  const double secs = elapsed(start);
  o.detail << " (" << secs << " s)";
  o.check(secs < 120, "runtime");
}

// Quasigeodesic examples and the convex-kink foil.
void ac7(Outcome& o) {
  const double dt = 1e-3, s = std::sqrt(2.0);
  const auto disk = tables::disk();
  const std::vector<Vec> refs{vec({0, 0}), vec({0.3, 0.2}), vec({-0.5, 0.1}), vec({0.1, -0.6}), vec({0.6, 0.6}),
                              vec({-0.2, -0.3})};
  const QuasigeodesicOptions opts{10 * dt};
  const auto c1 = sample([](double t) { return vec({std::cos(t), std::sin(t)}); }, 0, pi, dt);
  const auto c2 = sample([s](double t) { return vec({t / s, 1 - std::abs(t) / s}); }, -1, 1, dt);
  const auto foil = sample([](double t) { return t <= 0 ? vec({t, 0}) : vec({0, t}); }, -1, 1, dt);
  const auto r1 = quasigeodesic_residual(c1, E3, &disk, 0.0, refs, opts);
  const auto r2 = quasigeodesic_residual(c2, E3, &disk, 0.0, refs, opts);
  const auto rf = quasigeodesic_residual(foil, E3, static_cast<const TableSpec<double>*>(nullptr), 0.0, {vec({2, 1})},
                                         opts);
  o.detail << " c1 " << r1.max_residual << ", c2 " << r2.max_residual << ", foil " << rf.max_residual;
  o.check(r1.verdict == Verdict::Pass && r1.max_residual <= 10 * dt, "c1");
  o.check(r2.verdict == Verdict::Pass && r2.max_residual <= 10 * dt, "c2");
  o.check(rf.verdict == Verdict::Fail && rf.max_residual >= 0.5 / dt, "convex-kink foil");
}

// Shallow billiards converge to the boundary geodesic.
void ac8(Outcome& o) {
  std::vector<double> angles;
  for (int k = 0; k <= 5; ++k) angles.push_back(0.2 / std::ldexp(1.0, k));
  const auto r = boundary_geodesic_experiment(tables::disk(), E3, vec({1, 0}), vec({0, 1}), angles, pi / 2, 1e-3);
  o.check(r.rows.size() == angles.size(), "row count");
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const double expect = 1 - std::cos(angles[k]);
    o.check(std::abs(r.rows[k].sup_distance - expect) <= 0.1 * expect, "sagitta at theta " + std::to_string(angles[k]));
    if (k > 0) {
      const double ratio = r.rows[k - 1].sup_distance / r.rows[k].sup_distance;
      o.detail << " " << ratio;
      o.check(ratio > 3.5 && ratio < 4.5, "ratio at theta " + std::to_string(angles[k]));
    }
  }
  o.detail << " (per-halving ratios)";
}

// Reflection law and polarity agree.
void ac9(Outcome& o) {
  int passed = 0, failed = 0, disagreements = 0;
  for (const auto& model : oracle::all_models(3)) {
    const auto r = reflection_iff_polar_check(tables::disk(), model, 100, 99);
    passed += r.passed;
    failed += r.failed;
    disagreements += r.test_disagreements;
  }
  o.detail << " " << passed << " passed, " << failed << " failed, " << disagreements << " test disagreements";
  o.check(passed == 300 && failed == 0 && disagreements == 0, "polarity checks");
}

// Integrator order, constraint drift and distance against geodesic arclength.
void ac10(Outcome& o) {
  const Fold<double> sphere(tables::disk(), E3, 1.0);
  IntegratorOptions fixed;
  fixed.curvature_step = 1e9;
  std::vector<double> errors;
  for (double dt : {0.2, 0.1, 0.05}) {
    const auto c = integrate_fold_geodesic(sphere, vec({1, 0, 0}), vec({0, 0, 1}), pi, dt, fixed);
    const double t = c.times.back();
    errors.push_back((c.points.back() - vec({std::cos(t), 0, std::sin(t)})).norm());
  }
  const double ratio = std::min(errors[0] / errors[1], errors[1] / errors[2]);
  o.detail << " halving ratio " << ratio;
  o.check(ratio >= 3.5, "integrator order");

  double drift = 0;
  for (const auto& model : oracle::all_models(3)) {
    const Fold<double> fold(tables::disk(), model, 0.5);
    const Vec q0 = fold.lift(vec({0.1, 0.2}), 1);
    const Vec v0 = fold_tangent_direction(fold, q0, vec({0, 1, 0}));
    for (const auto& q : integrate_fold_geodesic(fold, q0, v0, 10.0, 1e-3).points)
      drift = std::max(drift, std::abs(fold.level(q)));
  }
  o.detail << ", drift " << drift;
  o.check(drift <= 1e-8, "constraint drift");

  std::mt19937_64 rng(21);
  double worst = 0;
  for (const auto& model : oracle::all_models(3))
    for (int s = 0; s < 5; ++s) {
      const Vec p = oracle::random_point(rng, 2, 0.6), q = oracle::random_point(rng, 2, 0.6);
      const double d = distance_on_H(model, p, q);
      const Vec v = project_to_H(log_map(model, embed_in_H(p), embed_in_H(q)));
      const auto curve = integrate_table_geodesic(model, p, induced_metric_on_H(model, p).normalized(v), d, 1e-3);
      std::vector<Vec> pts;
      for (const auto& x : curve.points) pts.push_back(embed_in_H(x));
      worst = std::max(worst, std::abs(oracle::polyline_length(model, pts) - d));
      worst = std::max(worst, distance_on_H(model, curve.points.back(), q));
    }
  o.detail << ", distance vs arclength " << worst;
  o.check(worst <= 1e-5, "distance vs arclength");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"parabola fold curvature -4/lambda^2", ac1},
      {"Euclidean disk and half-space folds nonnegative", ac2},
      {"hyperbolic disk fold bounded below by -1", ac3},
      {"spherical half-space fold xi and sec >= 1", ac4},
      {"Hausdorff distance fold to table", ac5},
      {"fold billiards converge to table billiard", ac6},
      {"quasigeodesic examples and convex-kink foil", ac7},
      {"shallow billiards converge to boundary geodesic", ac8},
      {"reflection iff polar", ac9},
      {"numerical hygiene", ac10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [error: " << e.what() << "]";
    }
    failures += o.pass ? 0 : 1;
    std::printf("AC%zu %s %s:%s [%.1f s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.str().c_str(), elapsed(start));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
