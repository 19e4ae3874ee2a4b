#pragma once

// Discrete quasigeodesic test, uniform distance between sampled curves, and the
// two limit harnesses: fold geodesics -> billiard trajectory, and shallow
// billiard trajectories -> boundary geodesic.

#include "foldlab/fold.hpp"
#include "foldlab/parallel.hpp"
#include "foldlab/trajectory.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace foldlab {

namespace detail {

template <typename Scalar>
VectorX<Scalar> pad_to(const VectorX<Scalar>& x, Eigen::Index dim) {
  if (x.size() == dim) return x;
  require(x.size() + 1 == dim, ErrorKind::InvalidInput, "curve dimension does not match the ambient model");
  return embed_in_H(x);
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

template <typename Scalar>
constexpr Scalar nan_v = std::numeric_limits<Scalar>::quiet_NaN();

}  // namespace detail

// --- quasigeodesic residual ------------------------------------------------------

struct QuasigeodesicOptions {
  double tol = 1e-2;
  double visibility_tol = 1e-6;
  int visibility_samples = 16;
};

template <typename Scalar>
struct QuasigeodesicReport {
  std::string curve_id;
  Scalar kappa = 0;
  std::vector<VectorX<Scalar>> reference_points;  // accepted points
  std::vector<Scalar> residuals;                  // per accepted point
  Scalar max_residual = -std::numeric_limits<Scalar>::infinity();
  long worst_index = -1;  // sample index of the worst second difference
  int visibility_failures = 0;
  int range_rejections = 0;
  Scalar tol = 0;
  Verdict verdict = Verdict::Fail;
};

namespace detail {

// true when the model geodesic from p to q stays in {f >= -tol}.
template <typename Scalar>
bool visible(const AmbientModel& model, const TableSpec<Scalar>& table, const VectorX<Scalar>& p,
             const VectorX<Scalar>& q, int samples, Scalar tol) {
  for (int k = 1; k < samples; ++k) {
    const VectorX<Scalar> x = geodesic_point(model, p, q, Scalar(k) / Scalar(samples));
    if (table.value(project_to_H(x)) < -tol) return false;
  }
  return true;
}

enum class ReferenceStatus { Accepted, Invisible, OutOfRange };

template <typename Scalar>
ReferenceStatus profile(const SampledCurve<Scalar>& curve, const AmbientModel& model, const TableSpec<Scalar>* table,
                        Scalar kappa, const VectorX<Scalar>& p, const QuasigeodesicOptions& opts,
                        std::vector<Scalar>& f) {
  const Scalar alpha = alpha_kappa(kappa);
  f.resize(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const VectorX<Scalar> q = pad_to(curve.points[i], model.dim);
    const Scalar d = distance(model, p, q);
    if (!(d > Scalar(1e-12)) || d >= alpha) return ReferenceStatus::OutOfRange;
    if (table && !visible(model, *table, p, q, opts.visibility_samples, Scalar(opts.visibility_tol)))
      return ReferenceStatus::Invisible;
    f[i] = rho_kappa(kappa, d);
  }
  return ReferenceStatus::Accepted;
}

}  // namespace detail

/// Worst violation of (f_p(t-dt) - 2 f_p(t) + f_p(t+dt)) / dt^2 <= 1 - kappa f_p(t)
/// over the sampled curve and the admissible reference points.
template <typename Scalar>
QuasigeodesicReport<Scalar> quasigeodesic_residual(const SampledCurve<Scalar>& curve, const AmbientModel& model,
                                                   const TableSpec<Scalar>* table, Scalar kappa,
                                                   const std::vector<VectorX<Scalar>>& reference_points,
                                                   const QuasigeodesicOptions& opts = {}, std::string curve_id = {}) {
  require(curve.size() >= 3, ErrorKind::InvalidInput, "quasigeodesic test needs at least three samples");
  require(curve.dt > 0, ErrorKind::InvalidInput, "curve time step must be positive");
  require(opts.tol > 0, ErrorKind::Config, "quasigeodesic tolerance must be positive");
  QuasigeodesicReport<Scalar> r;
  r.curve_id = std::move(curve_id);
  r.kappa = kappa;
  r.tol = Scalar(opts.tol);
  const Scalar dt2 = curve.dt * curve.dt;
  std::vector<Scalar> f;
  for (const auto& p_raw : reference_points) {
    const VectorX<Scalar> p = detail::pad_to(p_raw, model.dim);
    const auto status = detail::profile(curve, model, table, kappa, p, opts, f);
    if (status == detail::ReferenceStatus::Invisible) {
      ++r.visibility_failures;
      continue;
    }
    if (status == detail::ReferenceStatus::OutOfRange) {
      ++r.range_rejections;
      continue;
    }
    Scalar worst = -std::numeric_limits<Scalar>::infinity();
    long worst_i = -1;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
      const Scalar second = (f[i - 1] - Scalar(2) * f[i] + f[i + 1]) / dt2;
      const Scalar excess = second - (Scalar(1) - kappa * f[i]);
      if (excess > worst) worst = excess, worst_i = static_cast<long>(i);
    }
    r.reference_points.push_back(p_raw);
    r.residuals.push_back(worst);
    if (worst > r.max_residual) r.max_residual = worst, r.worst_index = worst_i;
  }
  require(!r.reference_points.empty(), ErrorKind::Config, "every reference point was rejected");
  r.verdict = r.max_residual <= r.tol ? Verdict::Pass : Verdict::Fail;
  return r;
}

/// Interior points of K ∩ U for the residual test: `fixed` from a table-specific
/// stream, then `random` from `seed`, each kept only if admissible for `curve`.
template <typename Scalar>
std::vector<VectorX<Scalar>> select_reference_points(const SampledCurve<Scalar>& curve, const AmbientModel& model,
                                                     const TableSpec<Scalar>& table, Scalar kappa, std::uint64_t seed,
                                                     int fixed = 8, int random = 8,
                                                     const QuasigeodesicOptions& opts = {}) {
  const auto& U = table.region();
  const Eigen::Index n = table.n();
  std::vector<VectorX<Scalar>> out;
  std::vector<Scalar> scratch;
  auto draw = [&](std::mt19937_64& rng, int wanted) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int accepted = 0;
    for (int attempt = 0; attempt < 2000 && accepted < wanted; ++attempt) {
      VectorX<Scalar> dir(n);
      for (Eigen::Index i = 0; i < n; ++i) dir(i) = Scalar(normal(rng));
      const Scalar radius = U.radius * Scalar(std::pow(unit(rng), 1.0 / double(n)));
      const VectorX<Scalar> x = U.center + radius * dir / dir.norm();
      if (!table.in_region(x) || !(table.value(x) > 0)) continue;
      const VectorX<Scalar> p = embed_in_H(x);
      if (detail::profile(curve, model, &table, kappa, p, opts, scratch) != detail::ReferenceStatus::Accepted)
        continue;
      out.push_back(x);
      ++accepted;
    }
  };
  std::mt19937_64 fixed_rng(detail::fnv1a(table.name()));
  draw(fixed_rng, fixed);
  std::mt19937_64 random_rng(seed);
  draw(random_rng, random);
  return out;
}

// --- sup distance -------------------------------------------------------------

template <typename Scalar>
Scalar sup_distance(const SampledCurve<Scalar>& a, const SampledCurve<Scalar>& b, const AmbientModel& model) {
  require(a.size() == b.size() && !a.times.empty(), ErrorKind::Config, "curves are sampled on different grids");
  const Scalar tol = Scalar(1e-9) * std::max(Scalar(1), std::abs(a.times.back()));
  require(std::abs(a.dt - b.dt) <= tol, ErrorKind::Config, "curves are sampled on different grids");
  Scalar worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    require(std::abs(a.times[i] - b.times[i]) <= tol, ErrorKind::Config, "curves are sampled on different grids");
    worst = std::max(worst, distance(model, detail::pad_to(a.points[i], model.dim),
                                     detail::pad_to(b.points[i], model.dim)));
  }
  return worst;
}

/// sup over samples of `a` of the distance to the curve `b` as a point set; `b`
/// is refined between samples by cubic Hermite interpolation.
template <typename Scalar>
Scalar sup_set_distance(const SampledCurve<Scalar>& a, const SampledCurve<Scalar>& b, const AmbientModel& model) {
  require(b.size() >= 2, ErrorKind::InvalidInput, "reference curve needs two samples");
  auto dist = [&](const VectorX<Scalar>& p, const VectorX<Scalar>& q) {
    return distance(model, detail::pad_to(p, model.dim), detail::pad_to(q, model.dim));
  };
  auto hermite = [&](std::size_t j, Scalar s) {
    const Scalar s2 = s * s, s3 = s2 * s;
    const Scalar h = b.times[j + 1] - b.times[j];
    return VectorX<Scalar>((2 * s3 - 3 * s2 + 1) * b.points[j] + (s3 - 2 * s2 + s) * h * b.velocities[j] +
                           (-2 * s3 + 3 * s2) * b.points[j + 1] + (s3 - s2) * h * b.velocities[j + 1]);
  };
  Scalar worst = 0;
  for (const auto& p : a.points) {
    // Coordinate-nearest sample, then model distance on the neighbouring segments.
    std::size_t best_j = 0;
    Scalar best_sq = std::numeric_limits<Scalar>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      const Scalar d = (p - b.points[j]).squaredNorm();
      if (d < best_sq) best_sq = d, best_j = j;
    }
    Scalar best = dist(p, b.points[best_j]);
    const std::size_t lo_seg = best_j >= 2 ? best_j - 2 : 0;
    for (std::size_t seg = lo_seg; seg <= best_j + 1 && seg + 1 < b.size(); ++seg) {
      const Scalar phi = Scalar(0.6180339887498949);
      Scalar lo = 0, hi = 1;
      Scalar m1 = hi - phi, m2 = lo + phi;
      Scalar d1 = dist(p, hermite(seg, m1)), d2 = dist(p, hermite(seg, m2));
      for (int it = 0; it < 40; ++it) {
        if (d1 < d2) {
          hi = m2, m2 = m1, d2 = d1;
          m1 = hi - phi * (hi - lo), d1 = dist(p, hermite(seg, m1));
        } else {
          lo = m1, m1 = m2, d1 = d2;
          m2 = lo + phi * (hi - lo), d2 = dist(p, hermite(seg, m2));
        }
      }
      best = std::min(best, dist(p, hermite(seg, (lo + hi) / 2)));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

// --- fold -> billiard -------------------------------------------------------------

template <typename Scalar>
struct ConvergenceRow {
  Scalar parameter = 0;  // λ_k or θ_k
  Scalar sup_distance = 0;
  Scalar synchronous_distance = detail::nan_v<Scalar>;
  Scalar expected = detail::nan_v<Scalar>;
  Scalar angle_error = detail::nan_v<Scalar>;
  Scalar qg_residual = detail::nan_v<Scalar>;
  Scalar lipschitz_excess = detail::nan_v<Scalar>;  // max of d(γ(t),γ(s)) - |t - s|
  long bounces = 0;
  bool truncated = false;
};

template <typename Scalar>
struct ConvergenceReport {
  std::string experiment;
  std::vector<ConvergenceRow<Scalar>> rows;
  Scalar T = 0;
  Scalar dt = 0;
  Scalar kappa = 0;
  Scalar tol_conv = 0;
  Scalar tol_qg = 0;
  bool monotone = false;
  bool lipschitz_ok = true;
  Verdict scan_verdict = Verdict::Inconclusive;
  Verdict verdict = Verdict::Inconclusive;
  std::string note;
  // Curves of the final row, kept for output.
  SampledCurve<Scalar> final_curve;
  SampledCurve<Scalar> final_ambient_curve;  // fold runs only
  SampledCurve<Scalar> reference_curve;
  std::vector<Bounce<Scalar>> reference_bounces;
  std::optional<QuasigeodesicReport<Scalar>> final_qg;
};

/// Initial data at p0 ∈ ∂K: the fold starts with a t + b e_{n+1}, the limit
/// billiard leaves with a t + b ν (t a unit boundary tangent).
template <typename Scalar>
struct DirectionSpec {
  std::optional<VectorX<Scalar>> tangent;  // defaults to the first boundary tangent basis vector
  Scalar a = Scalar(0.8);
  Scalar b = Scalar(0.6);
};

struct FoldConvergenceOptions {
  double tol_conv = 5e-3;
  double tol_qg = 0;  // 0 means 10 dt
  double kappa = 0;
  ScanSpec scan{31, 32, {0.0, 1e-4, 1e-2}, 4};
  IntegratorOptions integrator{};
  std::uint64_t seed = 1;
  int workers = 1;
  double angle_window = 0.05;
};

namespace detail {

// True if every table geodesic of length `radius` from x0 stays in U.
template <typename Scalar>
bool geodesic_ball_in_region(const TableSpec<Scalar>& table, const AmbientModel& model, const VectorX<Scalar>& x0,
                             Scalar radius, int directions = 64) {
  const MetricAt<Scalar> g = induced_metric_on_H(model, x0);
  std::mt19937_64 rng(7);
  const Scalar step = radius / Scalar(200);
  for (int k = 0; k < directions; ++k) {
    VectorX<Scalar> v(table.n());
    if (table.n() == 2) {
      const Scalar phi = Scalar(2) * pi_v<Scalar> * Scalar(k) / Scalar(directions);
      v << std::cos(phi), std::sin(phi);
      v = g.normalized(v);
    } else {
      v = random_unit_vector(g, rng);
    }
    const auto curve = integrate_table_geodesic(model, x0, v, radius, step);
    for (const auto& x : curve.points)
      if (!table.in_region(x)) return false;
  }
  return true;
}

/// Billiard trajectory on [-T, T] through x0 ∈ ∂K leaving with `out`, arriving along polar_vector(out).
template <typename Scalar>
BilliardTrajectory<Scalar> two_sided_billiard(const TableSpec<Scalar>& table, const AmbientModel& model,
                                              const VectorX<Scalar>& x0, const VectorX<Scalar>& out, Scalar T,
                                              Scalar dt, const BilliardOptions& opts) {
  const BoundaryFrame<Scalar> frame = boundary_frame(table, model, x0);
  const VectorX<Scalar> back = polar_vector(frame, out);
  const auto fwd = billiard_trajectory(table, model, x0, out, T, dt, opts);
  const auto bwd = billiard_trajectory(table, model, x0, back, T, dt, opts);
  BilliardTrajectory<Scalar> traj;
  traj.base.dt = fwd.base.dt;
  for (std::size_t i = bwd.base.size(); i-- > 1;)
    traj.base.push(-bwd.base.times[i], bwd.base.points[i], -bwd.base.velocities[i]);
  for (std::size_t i = 0; i < fwd.base.size(); ++i)
    traj.base.push(fwd.base.times[i], fwd.base.points[i], fwd.base.velocities[i]);
  for (auto it = bwd.bounces.rbegin(); it != bwd.bounces.rend(); ++it)
    traj.bounces.push_back({-it->time, it->point, -it->outgoing, -it->incoming, it->grazing});
  traj.bounces.push_back({Scalar(0), x0, -back, out, false});
  for (const auto& b : fwd.bounces) traj.bounces.push_back(b);
  return traj;
}

template <typename Scalar>
SampledCurve<Scalar> project_curve(const SampledCurve<Scalar>& c) {
  SampledCurve<Scalar> out;
  out.dt = c.dt;
  out.truncated = c.truncated;
  out.exit_time = c.exit_time;
  for (std::size_t i = 0; i < c.size(); ++i)
    out.push(c.times[i], project_to_H(c.points[i]), project_to_H(c.velocities[i]));
  return out;
}

/// Angle in g between the polar partner of the incoming chord direction and the
/// outgoing chord direction, at the deepest near-boundary passage of `curve`.
template <typename Scalar>
Scalar bounce_angle_error(const SampledCurve<Scalar>& curve, const TableSpec<Scalar>& table,
                          const AmbientModel& model, Scalar window) {
  std::size_t m = 0;
  for (std::size_t i = 1; i < curve.size(); ++i)
    if (table.value(curve.points[i]) < table.value(curve.points[m])) m = i;
  const auto offset = static_cast<std::size_t>(std::llround(window / curve.dt));
  require(offset >= 1 && m >= offset && m + offset < curve.size(), ErrorKind::InvalidInput,
          "curve too short around its boundary passage");
  const VectorX<Scalar> xb = table.project_to_boundary(curve.points[m]);
  const BoundaryFrame<Scalar> frame = boundary_frame(table, model, xb);
  auto chord = [&](const VectorX<Scalar>& x) {
    const VectorX<Scalar> w = project_to_H(log_map(model, embed_in_H(xb), embed_in_H(x)));
    return frame.metric.normalized(w);
  };
  VectorX<Scalar> u = chord(curve.points[m - offset]);
  VectorX<Scalar> v = chord(curve.points[m + offset]);
  // Clamp tiny negative normal parts left by the discretization into the cone.
  for (VectorX<Scalar>* w : {&u, &v}) {
    const Scalar c = frame.normal_component(*w);
    if (c < 0) *w = frame.metric.normalized(*w - c * frame.nu);
  }
  const VectorX<Scalar> expected = polar_vector(frame, u);
  const Scalar cosang = std::clamp(frame.metric.inner(expected, v), Scalar(-1), Scalar(1));
  return std::acos(cosang);
}

template <typename Scalar>
Scalar lipschitz_excess(const SampledCurve<Scalar>& c, const AmbientModel& model) {
  Scalar worst = -std::numeric_limits<Scalar>::infinity();
  for (std::size_t stride = 1; stride < c.size(); stride *= 2)
    for (std::size_t i = 0; i + stride < c.size(); ++i) {
      const Scalar d = distance(model, pad_to(c.points[i], model.dim), pad_to(c.points[i + stride], model.dim));
      worst = std::max(worst, d - (c.times[i + stride] - c.times[i]));
    }
  return worst;
}

}  // namespace detail

template <typename Scalar>
ConvergenceReport<Scalar> fold_convergence_experiment(const TableSpec<Scalar>& table, const AmbientModel& model,
                                                      const VectorX<Scalar>& p0, const DirectionSpec<Scalar>& dir,
                                                      const std::vector<Scalar>& lambdas, Scalar T, Scalar dt,
                                                      const FoldConvergenceOptions& opts = {}) {
  require(!lambdas.empty(), ErrorKind::Config, "lambda sequence is empty");
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    require(lambdas[k] > 0 && lambdas[k] < 1, ErrorKind::Config, "lambdas must lie in (0, 1)");
    require(k == 0 || lambdas[k] < lambdas[k - 1], ErrorKind::Config, "lambda sequence must be decreasing");
  }
  require(T > 0 && dt > 0, ErrorKind::Config, "T and dt must be positive");
  require(opts.tol_conv > 0 && opts.tol_qg >= 0, ErrorKind::Config, "tolerances must be positive");
  const BoundaryFrame<Scalar> frame = boundary_frame(table, model, p0);
  require(detail::geodesic_ball_in_region(table, model, p0, Scalar(2) * T), ErrorKind::Precondition,
          "the 2T-ball around p0 leaves U; choose a smaller T");
  require(dir.a >= 0 && dir.b >= 0 && dir.a + dir.b > 0, ErrorKind::Config, "direction weights must be >= 0");

  VectorX<Scalar> tangent = dir.tangent ? *dir.tangent : VectorX<Scalar>(frame.tangent_basis.col(0));
  require(tangent.size() == table.n(), ErrorKind::Config, "direction tangent has the wrong dimension");
  tangent = frame.tangential_part(tangent);
  require(frame.metric.norm(tangent) > Scalar(1e-9) || dir.a == 0, ErrorKind::Config,
          "direction tangent is normal to the boundary");
  if (frame.metric.norm(tangent) > Scalar(1e-9)) tangent = frame.metric.normalized(tangent);

  // Limit billiard: leaves p0 along a t + b ν.
  const VectorX<Scalar> out = frame.metric.normalized(VectorX<Scalar>(dir.a * tangent + dir.b * frame.nu));
  BilliardOptions bopts;
  bopts.integrator = opts.integrator;
  const auto reference = detail::two_sided_billiard(table, model, p0, out, T, dt, bopts);

  ConvergenceReport<Scalar> report;
  report.experiment = "fold-convergence";
  report.T = T;
  report.dt = reference.base.dt;
  report.kappa = Scalar(opts.kappa);
  report.tol_conv = Scalar(opts.tol_conv);
  report.tol_qg = opts.tol_qg > 0 ? Scalar(opts.tol_qg) : Scalar(10) * report.dt;

  ScanSpec scan = opts.scan;
  scan.seed = opts.seed;
  scan.workers = opts.workers;
  report.scan_verdict = scan_curvature(table, model, lambdas, Scalar(opts.kappa), scan).verdict;

  struct Run {
    SampledCurve<Scalar> ambient;
    SampledCurve<Scalar> projected;
  };
  const VectorX<Scalar> q0 = embed_in_H(p0);
  auto runs = parallel_map<Run>(lambdas.size(), opts.workers, [&](std::size_t k) {
    const Fold<Scalar> fold(table, model, lambdas[k]);
    VectorX<Scalar> v(table.n() + 1);
    v.head(table.n()) = dir.a * tangent;
    v(table.n()) = dir.b;
    const VectorX<Scalar> v0 = fold_tangent_direction(fold, q0, v);
    Run run;
    run.ambient = integrate_fold_geodesic(fold, q0, v0, T, dt, opts.integrator);
    run.projected = detail::project_curve(run.ambient);
    return run;
  });

  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    ConvergenceRow<Scalar> row;
    row.parameter = lambdas[k];
    row.truncated = runs[k].ambient.truncated;
    require(!row.truncated, ErrorKind::Numeric, "fold geodesic left U before time T");
    row.sup_distance = sup_distance(runs[k].projected, reference.base, model);
    row.lipschitz_excess = detail::lipschitz_excess(runs[k].ambient, model);
    report.lipschitz_ok = report.lipschitz_ok && row.lipschitz_excess <= Scalar(5) * report.dt;
    row.bounces = static_cast<long>(reference.bounces.size());
    report.rows.push_back(row);
  }

  auto& last = report.rows.back();
  const auto& final_curve = runs.back().projected;
  last.angle_error = detail::bounce_angle_error(final_curve, table, model,
                                                std::min(Scalar(opts.angle_window), T / Scalar(2)));
  QuasigeodesicOptions qopts;
  qopts.tol = double(report.tol_qg);
  const auto refs = select_reference_points(final_curve, model, table, report.kappa, opts.seed, 8, 8, qopts);
  report.final_qg = quasigeodesic_residual(final_curve, model, &table, report.kappa, refs, qopts, "final-lambda");
  last.qg_residual = report.final_qg->max_residual;

  report.monotone = true;
  for (std::size_t k = 1; k < report.rows.size(); ++k)
    report.monotone = report.monotone && report.rows[k].sup_distance < report.rows[k - 1].sup_distance;

  report.final_curve = final_curve;
  report.final_ambient_curve = runs.back().ambient;
  report.reference_curve = reference.base;
  report.reference_bounces = reference.bounces;

  const bool pass = last.sup_distance <= report.tol_conv && last.qg_residual <= report.tol_qg;
  if (report.scan_verdict != Verdict::Certified) {
    report.verdict = Verdict::Inconclusive;
    report.note = "curvature lower bound not certified for this table and model";
  } else if (report.rows.size() < 2) {
    report.verdict = Verdict::Inconclusive;
    report.note = "a single lambda supports no convergence claim";
  } else {
    report.verdict = pass ? Verdict::Pass : Verdict::Fail;
  }
  return report;
}

// --- shallow billiards -> boundary geodesic ---------------------------------------

struct BoundaryGeodesicOptions {
  double tol_conv = 1e-6;
  IntegratorOptions integrator{};
  int workers = 1;
};

template <typename Scalar>
ConvergenceReport<Scalar> boundary_geodesic_experiment(const TableSpec<Scalar>& table, const AmbientModel& model,
                                                       const VectorX<Scalar>& p0, const VectorX<Scalar>& tangent,
                                                       const std::vector<Scalar>& angles, Scalar T, Scalar dt,
                                                       const BoundaryGeodesicOptions& opts = {}) {
  require(!angles.empty(), ErrorKind::Config, "angle sequence is empty");
  for (std::size_t k = 0; k < angles.size(); ++k) {
    require(angles[k] > 0 && angles[k] < pi_v<Scalar> / 2, ErrorKind::Config, "angles must lie in (0, pi/2)");
    require(k == 0 || angles[k] < angles[k - 1], ErrorKind::Config, "angle sequence must be decreasing");
  }
  require(T > 0 && dt > 0 && opts.tol_conv > 0, ErrorKind::Config, "T, dt and tolerances must be positive");
  const auto convex = check_h_sufficient_conditions(table, AmbientModel::euclidean(model.dim));
  require(convex.concave, ErrorKind::Precondition, "table is not convex (D^2 f is not negative semi-definite)");

  const BoundaryFrame<Scalar> frame = boundary_frame(table, model, p0);
  const VectorX<Scalar> v = frame.metric.normalized(frame.tangential_part(tangent));
  // The shallow billiard outruns the geodesic (chords are shorter than arcs), so
  // the point-set comparison uses a longer piece of the geodesic.
  const long steps = detail::step_count(double(T), double(dt));
  const Scalar h = T / Scalar(steps);
  const auto extended =
      integrate_boundary_geodesic(table, model, p0, v, h * Scalar(steps + steps / 2), h, opts.integrator);
  SampledCurve<Scalar> geodesic;
  geodesic.dt = extended.dt;
  for (std::size_t i = 0; i < extended.size() && extended.times[i] <= T + extended.dt / 2; ++i)
    geodesic.push(extended.times[i], extended.points[i], extended.velocities[i]);
  require(geodesic.times.size() >= 2 && std::abs(geodesic.times.back() - T) <= geodesic.dt, ErrorKind::Numeric,
          "boundary geodesic left U before time T");

  BilliardOptions bopts;
  bopts.integrator = opts.integrator;
  auto runs = parallel_map<BilliardTrajectory<Scalar>>(angles.size(), opts.workers, [&](std::size_t k) {
    const VectorX<Scalar> w = std::cos(angles[k]) * v + std::sin(angles[k]) * frame.nu;
    return billiard_trajectory(table, model, p0, w, T, dt, bopts);
  });

  ConvergenceReport<Scalar> report;
  report.experiment = "boundary-geodesic";
  report.T = T;
  report.dt = geodesic.dt;
  report.tol_conv = Scalar(opts.tol_conv);
  report.scan_verdict = Verdict::Inconclusive;
  for (std::size_t k = 0; k < angles.size(); ++k) {
    ConvergenceRow<Scalar> row;
    row.parameter = angles[k];
    row.sup_distance = sup_set_distance(runs[k].base, extended, model);
    row.synchronous_distance = sup_distance(runs[k].base, geodesic, model);
    row.expected = Scalar(1) - std::cos(angles[k]);
    row.bounces = static_cast<long>(runs[k].bounces.size());
    report.rows.push_back(row);
  }
  report.monotone = true;
  for (std::size_t k = 1; k < report.rows.size(); ++k)
    report.monotone = report.monotone && report.rows[k].sup_distance < report.rows[k - 1].sup_distance;
  report.final_curve = runs.back().base;
  report.reference_curve = geodesic;
  report.reference_bounces = runs.back().bounces;
  if (report.rows.size() < 2) {
    report.verdict = Verdict::Inconclusive;
    report.note = "a single angle supports no convergence claim";
  } else {
    report.verdict =
        report.monotone && report.rows.back().sup_distance <= report.tol_conv ? Verdict::Pass : Verdict::Fail;
  }
  return report;
}

}  // namespace foldlab
