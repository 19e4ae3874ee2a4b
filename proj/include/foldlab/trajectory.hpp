#pragma once

// Geodesics on folds and on ∂K (constrained second-order ODE with projection),
// geodesics of the table metric, and billiard trajectories with event-detected
// reflections.

#include "foldlab/fold.hpp"
#include "foldlab/table.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace foldlab {

/// Uniformly time-sampled curve; `times[i] = times[0] + i * dt`.
template <typename Scalar>
struct SampledCurve {
  Scalar dt = 0;
  std::vector<Scalar> times;
  std::vector<VectorX<Scalar>> points;
  std::vector<VectorX<Scalar>> velocities;
  bool truncated = false;  // left U before the requested end time
  Scalar exit_time = std::numeric_limits<Scalar>::quiet_NaN();

  std::size_t size() const { return points.size(); }
  Eigen::Index dim() const { return points.empty() ? 0 : points.front().size(); }

  void push(Scalar t, VectorX<Scalar> x, VectorX<Scalar> v) {
    times.push_back(t);
    points.push_back(std::move(x));
    velocities.push_back(std::move(v));
  }
};

template <typename Scalar>
struct Bounce {
  Scalar time = 0;
  VectorX<Scalar> point;
  VectorX<Scalar> incoming;
  VectorX<Scalar> outgoing;
  bool grazing = false;
};

template <typename Scalar>
struct BilliardTrajectory {
  SampledCurve<Scalar> base;
  std::vector<Bounce<Scalar>> bounces;

  bool has_grazing() const {
    for (const auto& b : bounces)
      if (b.grazing) return true;
    return false;
  }
};

struct IntegratorOptions {
  /// Substep length is capped at curvature_step / |acceleration|; resolves the
  /// O(λ^2) turning region at the pinch line without changing the output grid.
  double curvature_step = 0.01;
  long max_substeps_per_step = 1L << 20;
  int newton_iterations = 3;
};

struct BilliardOptions {
  IntegratorOptions integrator{};
  double delta_min = 1e-4;
  double grazing_tol = 1e-8;
  double boundary_tol = 1e-10;
  double escape_tol = 1e-6;
};

namespace detail {

inline long step_count(double T, double dt) {
  require(std::isfinite(T) && T >= 0, ErrorKind::InvalidInput, "duration must be finite and non-negative");
  require(std::isfinite(dt) && dt > 0, ErrorKind::InvalidInput, "time step must be positive");
  if (T == 0) return 0;
  return std::max(1L, std::lround(T / dt));
}

/// Second-order geodesic system with an optional level-set constraint.
template <typename Scalar>
struct GeodesicSystem {
  std::function<MetricAt<Scalar>(const VectorX<Scalar>&)> metric;
  std::function<VectorX<Scalar>(const VectorX<Scalar>&, const VectorX<Scalar>&)> gamma_vv;
  // Constraint (empty when unconstrained).
  std::function<Scalar(const VectorX<Scalar>&)> level;
  std::function<VectorX<Scalar>(const VectorX<Scalar>&)> level_gradient;
  std::function<MatrixX<Scalar>(const VectorX<Scalar>&)> level_hessian;
  std::function<bool(const VectorX<Scalar>&)> inside;  // domain check (U)

  bool constrained() const { return static_cast<bool>(level); }

  VectorX<Scalar> acceleration(const VectorX<Scalar>& x, const VectorX<Scalar>& v) const {
    const VectorX<Scalar> gvv = gamma_vv(x, v);
    VectorX<Scalar> a = -gvv;
    if (constrained()) {
      const VectorX<Scalar> dF = level_gradient(x);
      const VectorX<Scalar> grad = metric(x).raise(dF);
      const Scalar grad2 = dF.dot(grad);
      require(grad2 > Scalar(1e-20), ErrorKind::SingularPoint, "constraint gradient vanishes along the geodesic");
      const Scalar hess_vv = v.dot(level_hessian(x) * v) - dF.dot(gvv);
      a -= (hess_vv / grad2) * grad;
    }
    return a;
  }

  void rk4(VectorX<Scalar>& x, VectorX<Scalar>& v, Scalar h) const {
    const VectorX<Scalar> k1x = v, k1v = acceleration(x, v);
    const VectorX<Scalar> x2 = x + h / 2 * k1x, v2 = v + h / 2 * k1v;
    const VectorX<Scalar> k2x = v2, k2v = acceleration(x2, v2);
    const VectorX<Scalar> x3 = x + h / 2 * k2x, v3 = v + h / 2 * k2v;
    const VectorX<Scalar> k3x = v3, k3v = acceleration(x3, v3);
    const VectorX<Scalar> x4 = x + h * k3x, v4 = v + h * k3v;
    const VectorX<Scalar> k4x = v4, k4v = acceleration(x4, v4);
    x += h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }

  /// Newton projection onto the level set along the Riemannian gradient, then
  /// tangential projection and unit renormalization of the velocity.
  void project(VectorX<Scalar>& x, VectorX<Scalar>& v, int newton_iterations) const {
    if (constrained()) {
      for (int it = 0; it < newton_iterations; ++it) {
        const Scalar F = level(x);
        if (std::abs(F) <= Scalar(1e-15)) break;
        const VectorX<Scalar> dF = level_gradient(x);
        const VectorX<Scalar> grad = metric(x).raise(dF);
        x -= (F / dF.dot(grad)) * grad;
      }
      const VectorX<Scalar> dF = level_gradient(x);
      const VectorX<Scalar> grad = metric(x).raise(dF);
      v -= (dF.dot(v) / dF.dot(grad)) * grad;
    }
    v = metric(x).normalized(v);
  }

  /// Advance (x, v) by `duration` in curvature-limited RK4 substeps.
  void flow(VectorX<Scalar>& x, VectorX<Scalar>& v, Scalar duration, const IntegratorOptions& opts) const {
    Scalar remaining = duration;
    long substeps = 0;
    while (remaining > Scalar(0)) {
      const Scalar scale = metric(x).norm(acceleration(x, v));
      Scalar h = remaining;
      if (scale * h > Scalar(opts.curvature_step)) h = Scalar(opts.curvature_step) / scale;
      if (h > remaining || remaining - h < remaining * Scalar(1e-12)) h = remaining;
      rk4(x, v, h);
      project(x, v, opts.newton_iterations);
      remaining -= h;
      require(++substeps <= opts.max_substeps_per_step, ErrorKind::Numeric, "substep budget exhausted");
    }
  }
};

template <typename Scalar>
GeodesicSystem<Scalar> fold_system(const Fold<Scalar>& fold) {
  GeodesicSystem<Scalar> sys;
  const AmbientModel model = fold.model();
  sys.metric = [model](const VectorX<Scalar>& x) { return metric_tensor(model, x); };
  sys.gamma_vv = [model](const VectorX<Scalar>& x, const VectorX<Scalar>& v) {
    return christoffel_contract(model, x, v, v);
  };
  sys.level = [&fold](const VectorX<Scalar>& q) { return fold.level(q); };
  sys.level_gradient = [&fold](const VectorX<Scalar>& q) { return fold.level_gradient(q); };
  sys.level_hessian = [&fold](const VectorX<Scalar>& q) { return fold.level_hessian(q); };
  sys.inside = [&fold](const VectorX<Scalar>& q) { return fold.table().in_region(project_to_H(q)); };
  return sys;
}

template <typename Scalar>
GeodesicSystem<Scalar> table_system(const AmbientModel& model) {
  GeodesicSystem<Scalar> sys;
  sys.metric = [model](const VectorX<Scalar>& x) { return induced_metric_on_H(model, x); };
  sys.gamma_vv = [model](const VectorX<Scalar>& x, const VectorX<Scalar>& v) {
    const VectorX<Scalar> ve = embed_in_H(v);
    return VectorX<Scalar>(christoffel_contract(model, embed_in_H(x), ve, ve).head(x.size()));
  };
  sys.inside = [](const VectorX<Scalar>&) { return true; };
  return sys;
}

template <typename Scalar>
GeodesicSystem<Scalar> boundary_system(const TableSpec<Scalar>& table, const AmbientModel& model) {
  GeodesicSystem<Scalar> sys = table_system<Scalar>(model);
  sys.level = [&table](const VectorX<Scalar>& x) { return table.value(x); };
  sys.level_gradient = [&table](const VectorX<Scalar>& x) { return table.gradient(x); };
  sys.level_hessian = [&table](const VectorX<Scalar>& x) { return table.hessian(x); };
  sys.inside = [&table](const VectorX<Scalar>& x) { return table.in_region(x); };
  return sys;
}

/// Integrates `steps` output steps of size h; stops early (truncated) on leaving the domain.
template <typename Scalar>
SampledCurve<Scalar> run_branch(const GeodesicSystem<Scalar>& sys, VectorX<Scalar> x, VectorX<Scalar> v, long steps,
                                Scalar h, const IntegratorOptions& opts) {
  SampledCurve<Scalar> curve;
  curve.dt = h;
  curve.push(Scalar(0), x, v);
  for (long i = 1; i <= steps; ++i) {
    sys.flow(x, v, h, opts);
    if (!sys.inside(x)) {
      curve.truncated = true;
      curve.exit_time = Scalar(i) * h;
      break;
    }
    curve.push(Scalar(i) * h, x, v);
  }
  return curve;
}

}  // namespace detail

/// Tangent projection and metric normalization of an ambient vector at a fold point.
template <typename Scalar>
VectorX<Scalar> fold_tangent_direction(const Fold<Scalar>& fold, const VectorX<Scalar>& q, const VectorX<Scalar>& v) {
  const FoldPointFrame<Scalar> fr = frame_at(fold, q);
  const VectorX<Scalar> t = fr.project_tangent(v);
  const Scalar len = fr.metric.norm(t);
  require(len > Scalar(1e-12), ErrorKind::InvalidInput, "direction is normal to the fold");
  return t / len;
}

/// Arclength geodesic of M_λ on [-T, T] through (q0, v0).
template <typename Scalar>
SampledCurve<Scalar> integrate_fold_geodesic(const Fold<Scalar>& fold, const VectorX<Scalar>& q0,
                                             const VectorX<Scalar>& v0, Scalar T, Scalar dt,
                                             const IntegratorOptions& opts = {}) {
  const FoldPointFrame<Scalar> fr = frame_at(fold, q0);
  require(std::abs(fr.metric.inner(v0, fr.unit_normal)) <= Scalar(1e-8), ErrorKind::Precondition,
          "initial velocity is not tangent to the fold");
  require(std::abs(fr.metric.inner(v0, v0) - Scalar(1)) <= Scalar(1e-8), ErrorKind::Precondition,
          "initial velocity is not unit");
  const long steps = detail::step_count(double(T), double(dt));
  const Scalar h = steps == 0 ? dt : T / Scalar(steps);
  const auto sys = detail::fold_system(fold);
  const auto forward = detail::run_branch(sys, q0, v0, steps, h, opts);
  const auto backward = detail::run_branch<Scalar>(sys, q0, -v0, steps, h, opts);

  SampledCurve<Scalar> curve;
  curve.dt = h;
  for (std::size_t i = backward.size(); i-- > 1;)
    curve.push(-backward.times[i], backward.points[i], -backward.velocities[i]);
  for (std::size_t i = 0; i < forward.size(); ++i) curve.push(forward.times[i], forward.points[i], forward.velocities[i]);
  curve.truncated = forward.truncated || backward.truncated;
  if (forward.truncated)
    curve.exit_time = forward.exit_time;
  else if (backward.truncated)
    curve.exit_time = -backward.exit_time;
  return curve;
}

/// Geodesic of (H, g) on [0, T].
template <typename Scalar>
SampledCurve<Scalar> integrate_table_geodesic(const AmbientModel& model, const VectorX<Scalar>& x0,
                                              const VectorX<Scalar>& v0, Scalar T, Scalar dt,
                                              const IntegratorOptions& opts = {}) {
  const MetricAt<Scalar> g = induced_metric_on_H(model, x0);
  require(std::abs(g.inner(v0, v0) - Scalar(1)) <= Scalar(1e-8), ErrorKind::Precondition,
          "initial velocity is not unit in the table metric");
  const long steps = detail::step_count(double(T), double(dt));
  const Scalar h = steps == 0 ? dt : T / Scalar(steps);
  return detail::run_branch(detail::table_system<Scalar>(model), x0, v0, steps, h, opts);
}

/// Geodesic of ∂K = {f = 0} with the metric induced from g, on [0, T].
template <typename Scalar>
SampledCurve<Scalar> integrate_boundary_geodesic(const TableSpec<Scalar>& table, const AmbientModel& model,
                                                 const VectorX<Scalar>& x0, const VectorX<Scalar>& v0, Scalar T,
                                                 Scalar dt, const IntegratorOptions& opts = {}) {
  const BoundaryFrame<Scalar> frame = boundary_frame(table, model, x0);
  require(std::abs(frame.normal_component(v0)) <= Scalar(1e-8), ErrorKind::Precondition,
          "initial velocity is not tangent to the boundary");
  require(std::abs(frame.metric.inner(v0, v0) - Scalar(1)) <= Scalar(1e-8), ErrorKind::Precondition,
          "initial velocity is not unit");
  const long steps = detail::step_count(double(T), double(dt));
  const Scalar h = steps == 0 ? dt : T / Scalar(steps);
  return detail::run_branch(detail::boundary_system(table, model), x0, v0, steps, h, opts);
}

/// Billiard trajectory in K ∩ U on [0, T]: table geodesics joined by the mirror law.
template <typename Scalar>
BilliardTrajectory<Scalar> billiard_trajectory(const TableSpec<Scalar>& table, const AmbientModel& model,
                                               const VectorX<Scalar>& x0, const VectorX<Scalar>& v0, Scalar T,
                                               Scalar dt, const BilliardOptions& opts = {}) {
  require(x0.size() == table.n() && v0.size() == table.n(), ErrorKind::InvalidInput, "billiard dimension mismatch");
  const Scalar on_tol = Scalar(opts.boundary_tol);
  require(table.value(x0) >= -on_tol, ErrorKind::OutsideTable, "billiard start point outside the table");
  const MetricAt<Scalar> g0 = induced_metric_on_H(model, x0);
  require(std::abs(g0.inner(v0, v0) - Scalar(1)) <= Scalar(1e-8), ErrorKind::Precondition,
          "initial velocity is not unit in the table metric");
  if (std::abs(table.value(x0)) <= on_tol) {
    const BoundaryFrame<Scalar> frame = boundary_frame(table, model, x0);
    require(frame.normal_component(v0) >= -Scalar(detail::cone_tol), ErrorKind::Precondition,
            "initial velocity leaves the table");
  }

  const auto sys = detail::table_system<Scalar>(model);
  const long steps = detail::step_count(double(T), double(dt));
  const Scalar h = steps == 0 ? dt : T / Scalar(steps);

  BilliardTrajectory<Scalar> traj;
  traj.base.dt = h;
  traj.base.push(Scalar(0), x0, v0);
  Scalar last_bounce = -std::numeric_limits<Scalar>::infinity();
  bool skip_detection = false;

  auto bounce = [&](Scalar t, const VectorX<Scalar>& xb, const VectorX<Scalar>& vb) {
    require(t - last_bounce >= Scalar(opts.delta_min), ErrorKind::Accumulation,
            "bounces closer than delta_min at t = " + std::to_string(double(t)));
    last_bounce = t;
    const BoundaryFrame<Scalar> frame = boundary_frame(table, model, xb);
    const VectorX<Scalar> w = frame.metric.normalized(vb);
    const Scalar c = frame.normal_component(w);
    Bounce<Scalar> ev{t, xb, w, w, false};
    if (std::abs(c) <= Scalar(opts.grazing_tol) || c > 0) {
      ev.grazing = true;
      skip_detection = true;
    } else {
      ev.outgoing = reflect(frame, w);
    }
    traj.bounces.push_back(ev);
    return ev.outgoing;
  };

  VectorX<Scalar> x = x0, v = v0;
  for (long step = 1; step <= steps; ++step) {
    Scalar remaining = h;
    const Scalar step_start = Scalar(step - 1) * h;
    while (remaining > Scalar(0)) {
      VectorX<Scalar> x1 = x, v1 = v;
      sys.flow(x1, v1, remaining, opts.integrator);
      const bool crossing = !skip_detection && table.value(x1) < -on_tol && table.value(x) >= -on_tol;
      skip_detection = false;
      if (!crossing) {
        x = std::move(x1);
        v = std::move(v1);
        break;
      }
      Scalar lo = 0, hi = remaining;
      for (int it = 0; it < 200 && hi - lo > std::numeric_limits<Scalar>::epsilon() * std::max(Scalar(1), h); ++it) {
        const Scalar mid = (lo + hi) / 2;
        VectorX<Scalar> xm = x, vm = v;
        sys.flow(xm, vm, mid, opts.integrator);
        const Scalar fm = table.value(xm);
        if (fm < 0)
          hi = mid;
        else
          lo = mid;
        if (std::abs(fm) <= Scalar(1e-13)) {
          lo = mid;
          break;
        }
      }
      VectorX<Scalar> xb = x, vb = v;
      sys.flow(xb, vb, lo, opts.integrator);
      const Scalar t_bounce = step_start + (h - remaining) + lo;
      v = bounce(t_bounce, xb, vb);
      x = std::move(xb);
      remaining -= lo;
    }
    const Scalar t = Scalar(step) * h;
    require(table.value(x) >= -Scalar(opts.escape_tol), ErrorKind::Numeric,
            "trajectory left the table at t = " + std::to_string(double(t)));
    if (std::abs(table.value(x)) <= on_tol) {
      const BoundaryFrame<Scalar> frame = boundary_frame(table, model, x);
      if (frame.normal_component(frame.metric.normalized(v)) < -Scalar(opts.grazing_tol)) v = bounce(t, x, v);
    }
    traj.base.push(t, x, v);
  }
  return traj;
}

}  // namespace foldlab
