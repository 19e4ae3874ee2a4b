#pragma once

// Folds M_λ = {x_{n+1}^2 = λ^2 f(x)} over a billiard table: level-set geometry,
// second fundamental form, Gauss-equation sectional curvatures, curvature scans
// and sampled Hausdorff distances to the table.

#include "foldlab/ambient.hpp"
#include "foldlab/parallel.hpp"
#include "foldlab/sampling.hpp"
#include "foldlab/table.hpp"

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace foldlab {

template <typename Scalar>
class Fold {
 public:
  Fold(TableSpec<Scalar> table, AmbientModel model, Scalar lambda)
      : table_(std::move(table)), model_(model), lambda_(lambda) {
    require(model_.dim == table_.n() + 1, ErrorKind::InvalidInput, "ambient dimension must be table dimension + 1");
    // λ = 1 is admitted for the unit-sphere sanity case.
    require(lambda_ > 0 && lambda_ <= 1, ErrorKind::InvalidInput, "lambda must lie in (0, 1]");
  }

  const TableSpec<Scalar>& table() const { return table_; }
  const AmbientModel& model() const { return model_; }
  Scalar lambda() const { return lambda_; }
  int dim() const { return model_.dim; }

  /// F_λ(q) = q_{n+1}^2 - λ^2 f(q_1..n)
  Scalar level(const VectorX<Scalar>& q) const {
    const Eigen::Index n = table_.n();
    return q(n) * q(n) - lambda_ * lambda_ * table_.value(q.head(n));
  }

  VectorX<Scalar> level_gradient(const VectorX<Scalar>& q) const {
    const Eigen::Index n = table_.n();
    VectorX<Scalar> d(n + 1);
    d.head(n) = -lambda_ * lambda_ * table_.gradient(q.head(n));
    d(n) = Scalar(2) * q(n);
    return d;
  }

  MatrixX<Scalar> level_hessian(const VectorX<Scalar>& q) const {
    const Eigen::Index n = table_.n();
    MatrixX<Scalar> h = MatrixX<Scalar>::Zero(n + 1, n + 1);
    h.topLeftCorner(n, n) = -lambda_ * lambda_ * table_.hessian(q.head(n));
    h(n, n) = Scalar(2);
    return h;
  }

  /// (x, ±λ sqrt(f(x)))
  VectorX<Scalar> lift(const VectorX<Scalar>& x, int sign) const {
    require(x.size() == table_.n(), ErrorKind::InvalidInput, "lift expects a table point");
    const Scalar fx = table_.value(x);
    require(fx >= 0, ErrorKind::OutsideTable, "lift of a point with f < 0");
    require(table_.in_region(x), ErrorKind::OutsideTable, "lift of a point outside U");
    VectorX<Scalar> q = embed_in_H(x);
    q(x.size()) = Scalar(sign >= 0 ? 1 : -1) * lambda_ * std::sqrt(fx);
    return q;
  }

 private:
  TableSpec<Scalar> table_;
  AmbientModel model_;
  Scalar lambda_;
};

/// Riemannian Hessian of a function from its Euclidean derivatives:
/// (Hess F)_ij = D^2F_ij - Gamma^k_ij dF/dx_k.
template <typename Scalar>
MatrixX<Scalar> riemannian_hessian(const AmbientModel& model, const VectorX<Scalar>& q, const VectorX<Scalar>& dF,
                                   const MatrixX<Scalar>& d2F) {
  MatrixX<Scalar> hess = d2F;
  if (model.kind == ModelKind::Euclidean) return hess;
  const Christoffel<Scalar> gamma = christoffel(model, q);
  for (Eigen::Index k = 0; k < q.size(); ++k) hess -= dF(k) * gamma.slice(k);
  return hess;
}

template <typename Scalar>
struct FoldPointFrame {
  VectorX<Scalar> q;
  MetricAt<Scalar> metric;
  VectorX<Scalar> dF;           // Euclidean gradient
  VectorX<Scalar> grad_F;       // Riemannian gradient
  Scalar grad_norm = 0;
  VectorX<Scalar> unit_normal;
  MatrixX<Scalar> hess_F;       // Riemannian Hessian, ambient coordinates
  MatrixX<Scalar> tangent_basis;  // (n+1) x n, metric-orthonormal columns
  MatrixX<Scalar> h;            // second fundamental form in tangent_basis

  Scalar second_fundamental(const VectorX<Scalar>& v, const VectorX<Scalar>& w) const {
    return v.dot(hess_F * w) / grad_norm;
  }
  VectorX<Scalar> project_tangent(const VectorX<Scalar>& v) const {
    return v - metric.inner(v, unit_normal) * unit_normal;
  }
};

namespace detail {
inline constexpr double fold_constraint_tol = 1e-8;
inline constexpr double singular_tol = 1e-10;
}  // namespace detail

template <typename Scalar>
FoldPointFrame<Scalar> frame_at(const Fold<Scalar>& fold, const VectorX<Scalar>& q, bool check_on_fold = true) {
  require(q.size() == fold.dim(), ErrorKind::InvalidInput, "fold point dimension mismatch");
  if (check_on_fold)
    require(std::abs(fold.level(q)) <= Scalar(detail::fold_constraint_tol), ErrorKind::Precondition,
            "point is not on the fold");
  FoldPointFrame<Scalar> fr;
  fr.q = q;
  fr.metric = metric_tensor(fold.model(), q);
  fr.dF = fold.level_gradient(q);
  require(fr.dF.norm() >= Scalar(detail::singular_tol), ErrorKind::SingularPoint, "DF vanishes on the fold");
  fr.grad_F = fr.metric.raise(fr.dF);
  fr.grad_norm = std::sqrt(fr.dF.dot(fr.grad_F));
  fr.unit_normal = fr.grad_F / fr.grad_norm;
  fr.hess_F = riemannian_hessian(fold.model(), q, fr.dF, fold.level_hessian(q));

  const Eigen::Index d = q.size();
  fr.tangent_basis.resize(d, d - 1);
  Eigen::Index found = 0;
  for (Eigen::Index i = 0; i < d && found < d - 1; ++i) {
    VectorX<Scalar> v = fr.project_tangent(VectorX<Scalar>::Unit(d, i));
    for (Eigen::Index j = 0; j < found; ++j)
      v -= fr.metric.inner(v, fr.tangent_basis.col(j)) * fr.tangent_basis.col(j);
    const Scalar len = fr.metric.norm(v);
    if (len < Scalar(1e-6)) continue;
    fr.tangent_basis.col(found++) = v / len;
  }
  require(found == d - 1, ErrorKind::Numeric, "failed to build a fold tangent basis");
  fr.h = fr.tangent_basis.transpose() * fr.hess_F * fr.tangent_basis / fr.grad_norm;
  return fr;
}

namespace detail {

template <typename Scalar>
Scalar gauss_curvature_unchecked(const AmbientModel& model, const FoldPointFrame<Scalar>& fr,
                                 const VectorX<Scalar>& v, const VectorX<Scalar>& w) {
  const Scalar hvv = fr.second_fundamental(v, v);
  const Scalar hww = fr.second_fundamental(w, w);
  const Scalar hvw = fr.second_fundamental(v, w);
  const Scalar gvv = fr.metric.inner(v, v);
  const Scalar gww = fr.metric.inner(w, w);
  const Scalar gvw = fr.metric.inner(v, w);
  return model.kappa<Scalar>() + (hvv * hww - hvw * hvw) / (gvv * gww - gvw * gvw);
}

}  // namespace detail

/// Gauss equation: sec = kappa_ambient + (h(v,v) h(w,w) - h(v,w)^2) / (g(v,v) g(w,w) - g(v,w)^2).
template <typename Scalar>
Scalar sectional_curvature(const AmbientModel& model, const FoldPointFrame<Scalar>& fr, const VectorX<Scalar>& v,
                           const VectorX<Scalar>& w) {
  require(v.size() == fr.q.size() && w.size() == fr.q.size(), ErrorKind::InvalidInput, "plane vector dimension");
  for (const VectorX<Scalar>* x : {&v, &w})
    require(std::abs(fr.metric.inner(*x, fr.unit_normal)) <= Scalar(1e-8) * std::max(Scalar(1), fr.metric.norm(*x)),
            ErrorKind::Precondition, "plane vector is not tangent to the fold");
  const Scalar gvv = fr.metric.inner(v, v);
  const Scalar gww = fr.metric.inner(w, w);
  const Scalar gvw = fr.metric.inner(v, w);
  require(gvv * gww - gvw * gvw >= Scalar(1e-12) * std::max(Scalar(1), gvv * gww), ErrorKind::DegeneratePlane,
          "plane vectors are linearly dependent");
  return detail::gauss_curvature_unchecked(model, fr, v, w);
}

template <typename Scalar>
Scalar sectional_curvature(const Fold<Scalar>& fold, const VectorX<Scalar>& q, const VectorX<Scalar>& v,
                           const VectorX<Scalar>& w) {
  return sectional_curvature(fold.model(), frame_at(fold, q), v, w);
}

// --- curvature scan -----------------------------------------------------------

struct ScanSpec {
  int grid_per_axis = 61;
  int boundary_points = 64;
  std::vector<double> boundary_offsets{0.0, 1e-6, 1e-4, 1e-2};
  int random_planes = 8;
  double edge_eps = 1e-6;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  int workers = 1;
};

template <typename Scalar>
struct ScanRow {
  Scalar lambda = 0;
  Scalar min_sec = std::numeric_limits<Scalar>::infinity();
  VectorX<Scalar> argmin_point;
  MatrixX<Scalar> argmin_plane;  // two columns
  long n_points = 0;
  long n_samples = 0;
  long n_skipped = 0;
  Verdict verdict = Verdict::Inconclusive;
};

template <typename Scalar>
struct CurvatureScanReport {
  std::vector<ScanRow<Scalar>> rows;
  Scalar bound = 0;
  Scalar tol = 0;
  Scalar global_min = std::numeric_limits<Scalar>::infinity();
  std::size_t argmin_row = 0;
  Verdict verdict = Verdict::Inconclusive;
};

/// Table points whose lifts are scanned: p0, interior grid nodes with f > edge_eps,
/// and boundary points pushed inward to the configured f offsets.
template <typename Scalar>
std::vector<VectorX<Scalar>> scan_table_points(const TableSpec<Scalar>& table, const ScanSpec& spec) {
  std::vector<VectorX<Scalar>> pts{table.p0()};
  for (auto& x : table_grid_points(table, spec.grid_per_axis, Scalar(spec.edge_eps)))
    if (table.value(x) > Scalar(spec.edge_eps)) pts.push_back(std::move(x));
  std::mt19937_64 rng(spec.seed ^ 0x5ca1ab1eULL);
  for (int b = 0; b < spec.boundary_points; ++b) {
    const VectorX<Scalar> xb = random_boundary_point(table, rng);
    for (double offset : spec.boundary_offsets) {
      VectorX<Scalar> x = xb;
      if (offset > 0) {
        for (int it = 0; it < 3; ++it) {
          const VectorX<Scalar> g = table.gradient(x);
          x += (Scalar(offset) - table.value(x)) * g / g.squaredNorm();
        }
      }
      if (table.contains(x)) pts.push_back(std::move(x));
    }
  }
  return pts;
}

namespace detail {

template <typename Scalar>
struct ScanPartial {
  Scalar min_sec = std::numeric_limits<Scalar>::infinity();
  long argmin_index = -1;
  VectorX<Scalar> argmin_point;
  MatrixX<Scalar> argmin_plane;
  long samples = 0;
  long skipped = 0;
};

}  // namespace detail

template <typename Scalar>
ScanRow<Scalar> scan_fold(const Fold<Scalar>& fold, const std::vector<VectorX<Scalar>>& table_points,
                          const ScanSpec& spec, Scalar bound) {
  require(fold.table().n() >= 2, ErrorKind::Config, "curvature scans need a fold of dimension >= 2");
  using Partial = detail::ScanPartial<Scalar>;
  const std::size_t count = table_points.size() * 2;
  auto map_chunk = [&](std::size_t begin, std::size_t end) {
    Partial part;
    for (std::size_t idx = begin; idx < end; ++idx) {
      const auto& x = table_points[idx / 2];
      const int sign = (idx % 2 == 0) ? 1 : -1;
      if (sign < 0 && fold.table().value(x) == Scalar(0)) continue;
      FoldPointFrame<Scalar> fr;
      try {
        fr = frame_at(fold, fold.lift(x, sign));
      } catch (const Error&) {
        ++part.skipped;
        continue;
      }
      const Eigen::Index k = fr.tangent_basis.cols();
      auto consider = [&](const VectorX<Scalar>& v, const VectorX<Scalar>& w) {
        const Scalar sec = detail::gauss_curvature_unchecked(fold.model(), fr, v, w);
        ++part.samples;
        if (sec < part.min_sec) {
          part.min_sec = sec;
          part.argmin_index = static_cast<long>(idx);
          part.argmin_point = fr.q;
          part.argmin_plane.resize(fr.q.size(), 2);
          part.argmin_plane.col(0) = v;
          part.argmin_plane.col(1) = w;
        }
      };
      for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i + 1; j < k; ++j) consider(fr.tangent_basis.col(i), fr.tangent_basis.col(j));
      std::mt19937_64 rng(spec.seed + 0x9e3779b97f4a7c15ULL * (idx + 1));
      std::normal_distribution<double> normal;
      for (int r = 0; r < spec.random_planes; ++r) {
        VectorX<Scalar> a(k), b(k);
        for (Eigen::Index i = 0; i < k; ++i) a(i) = Scalar(normal(rng)), b(i) = Scalar(normal(rng));
        // Orthonormal plane: near the pinch h has an O(1/λ^2) eigenvalue and the
        // Gauss numerator cancels badly for nearly parallel spanning vectors.
        a.normalize();
        b -= a.dot(b) * a;
        if (b.norm() < Scalar(1e-3)) continue;
        b.normalize();
        consider(fr.tangent_basis * a, fr.tangent_basis * b);
      }
    }
    return part;
  };
  auto reduce = [](Partial acc, Partial p) {
    if (p.min_sec < acc.min_sec) {
      acc.min_sec = p.min_sec;
      acc.argmin_index = p.argmin_index;
      acc.argmin_point = std::move(p.argmin_point);
      acc.argmin_plane = std::move(p.argmin_plane);
    }
    acc.samples += p.samples;
    acc.skipped += p.skipped;
    return acc;
  };
  const Partial total = parallel_reduce(count, spec.workers, Partial{}, map_chunk, reduce);

  ScanRow<Scalar> row;
  row.lambda = fold.lambda();
  row.min_sec = total.min_sec;
  row.argmin_point = total.argmin_point;
  row.argmin_plane = total.argmin_plane;
  row.n_points = static_cast<long>(table_points.size());
  row.n_samples = total.samples;
  row.n_skipped = total.skipped;
  if (total.samples == 0)
    row.verdict = Verdict::Inconclusive;
  else if (total.min_sec < bound - Scalar(spec.tol))
    row.verdict = Verdict::Violated;
  else
    row.verdict = Verdict::Certified;
  return row;
}

/// Checks a uniform-in-λ lower bound `bound` on the sectional curvatures of the fold family.
template <typename Scalar>
CurvatureScanReport<Scalar> scan_curvature(const TableSpec<Scalar>& table, const AmbientModel& model,
                                           const std::vector<Scalar>& lambdas, Scalar bound, const ScanSpec& spec) {
  for (Scalar l : lambdas) require(l > 0 && l < 1, ErrorKind::Config, "scan lambdas must lie in (0, 1)");
  require(spec.tol > 0, ErrorKind::Config, "scan tolerance must be positive");
  const auto points = scan_table_points(table, spec);
  CurvatureScanReport<Scalar> report;
  report.bound = bound;
  report.tol = Scalar(spec.tol);
  bool any_violated = false, all_certified = !lambdas.empty();
  for (Scalar l : lambdas) {
    report.rows.push_back(scan_fold(Fold<Scalar>(table, model, l), points, spec, bound));
    const auto& row = report.rows.back();
    if (row.min_sec < report.global_min) {
      report.global_min = row.min_sec;
      report.argmin_row = report.rows.size() - 1;
    }
    any_violated = any_violated || row.verdict == Verdict::Violated;
    all_certified = all_certified && row.verdict == Verdict::Certified;
  }
  report.verdict = any_violated ? Verdict::Violated : (all_certified ? Verdict::Certified : Verdict::Inconclusive);
  return report;
}

// --- sufficient conditions ----------------------------------------------------

template <typename Scalar>
struct SufficientConditionReport {
  long samples = 0;
  Scalar max_hessian_eigenvalue = -std::numeric_limits<Scalar>::infinity();
  bool concave = false;                 // D^2 f negative semi-definite
  bool homogeneity_applicable = false;  // only for the hyperbolic model
  Scalar min_homogeneity = std::numeric_limits<Scalar>::infinity();  // min of 2 f - x.Df
  bool homogeneity_ok = true;
  bool pass = false;
};

/// Samples K ∩ U: D^2 f <= 0, and for the hyperbolic model also 2 f - x.Df >= 0.
template <typename Scalar>
SufficientConditionReport<Scalar> check_h_sufficient_conditions(const TableSpec<Scalar>& table,
                                                                 const AmbientModel& model, int grid_per_axis = 41,
                                                                 Scalar tol = Scalar(1e-9)) {
  require(model.kind != ModelKind::Spherical, ErrorKind::Precondition,
          "no sufficient-condition test is known for the spherical model");
  SufficientConditionReport<Scalar> r;
  r.homogeneity_applicable = model.kind == ModelKind::Hyperbolic;
  auto points = table_grid_points(table, grid_per_axis);
  points.push_back(table.p0());
  for (const auto& x : points) {
    const Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(table.hessian(x), Eigen::EigenvaluesOnly);
    r.max_hessian_eigenvalue = std::max(r.max_hessian_eigenvalue, eig.eigenvalues().maxCoeff());
    if (r.homogeneity_applicable)
      r.min_homogeneity = std::min(r.min_homogeneity, Scalar(2) * table.value(x) - x.dot(table.gradient(x)));
    ++r.samples;
  }
  r.concave = r.max_hessian_eigenvalue <= tol;
  if (r.homogeneity_applicable) r.homogeneity_ok = r.min_homogeneity >= -tol;
  r.pass = r.concave && r.homogeneity_ok;
  return r;
}

// --- Hausdorff distance ---------------------------------------------------------

struct HausdorffSpec {
  int grid_per_axis = 201;
  long max_points = 250000;
  double slack = 1e-3;
  int workers = 1;
};

template <typename Scalar>
struct HausdorffReport {
  Scalar lambda = 0;
  Scalar fold_to_table = 0;  // sup over M_λ of dist to K ∩ U
  Scalar table_to_fold = 0;  // sup over K ∩ U of dist to M_λ
  Scalar max_sqrt_f = 0;     // D
  Scalar metric_constant = 1;  // C_model
  Scalar bound = 0;          // D λ C
  Scalar slack = 0;
  bool within_bound = false;
  long n_table = 0;
  long n_fold = 0;
};

namespace detail {

// Euclidean radius outside of which no point p with |p| <= R_other can be closer
// to q than `best` in the model distance.
template <typename Scalar>
Scalar euclidean_search_radius(ModelKind kind, Scalar q_norm, Scalar R_other, Scalar best) {
  switch (kind) {
    case ModelKind::Euclidean:
      return best;
    case ModelKind::Hyperbolic: {
      // Hyperboloid lifts differ by |p - q| in space and at most |p - q| m / sqrt(1 + m^2) in time.
      const Scalar m = std::max(q_norm, R_other);
      return Scalar(2) * std::sqrt(Scalar(1) + m * m) * std::sinh(best / Scalar(2));
    }
    case ModelKind::Spherical:
      // Chordal distance 2 |p - q| / sqrt((1 + |p|^2)(1 + |q|^2)) = 2 sin(d / 2).
      if (best >= pi_v<Scalar>) return std::numeric_limits<Scalar>::infinity();
      return std::sqrt((Scalar(1) + q_norm * q_norm) * (Scalar(1) + R_other * R_other)) * std::sin(best / Scalar(2));
  }
  return std::numeric_limits<Scalar>::infinity();
}

// Calls visit(flat) for every grid cell at Chebyshev distance exactly r from `center`.
template <typename Scalar, typename Visit>
void for_cells_on_shell(const BoxGrid<Scalar>& grid, const std::vector<int>& center, int r, Visit visit) {
  const int n = grid.n;
  const auto clamp_lo = [&](int i) { return std::max(0, center[std::size_t(i)] - r); };
  const auto clamp_hi = [&](int i) { return std::min(grid.per_axis - 1, center[std::size_t(i)] + r); };
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 1; i < n; ++i) idx[std::size_t(i)] = clamp_lo(i);
  while (true) {
    bool outer_on_shell = false;
    for (int i = 1; i < n; ++i) outer_on_shell = outer_on_shell || std::abs(idx[std::size_t(i)] - center[std::size_t(i)]) == r;
    if (outer_on_shell) {
      for (idx[0] = clamp_lo(0); idx[0] <= clamp_hi(0); ++idx[0]) visit(grid.flat(idx));
    } else {
      for (int v : {center[0] - r, center[0] + r}) {
        if (v < 0 || v >= grid.per_axis || (r == 0 && v != center[0] - r)) continue;
        idx[0] = v;
        visit(grid.flat(idx));
      }
    }
    int axis = 1;
    while (axis < n) {
      const auto u = static_cast<std::size_t>(axis);
      if (++idx[u] <= clamp_hi(axis)) break;
      idx[u] = clamp_lo(axis);
      ++axis;
    }
    if (axis >= n) break;
  }
}

// Nearest-candidate search in growing shells around `center`. `height` is the offset of
// the query from the grid plane, so shell r is at Euclidean distance >= sqrt((r spacing)^2 + height^2).
template <typename Scalar, typename Radius, typename Visit>
void search_shells(const BoxGrid<Scalar>& grid, const std::vector<int>& center, Scalar height, Radius radius,
                   Visit visit) {
  for (int r = 0; r < grid.per_axis; ++r) {
    const Scalar lower = std::hypot(Scalar(r) * grid.spacing, height);
    if (r > 0 && lower >= radius()) break;
    for_cells_on_shell(grid, center, r, visit);
  }
}

}  // namespace detail

/// Both one-sided Hausdorff suprema between M_λ and K ∩ U, estimated on the
/// lifts of a regular grid over U.
template <typename Scalar>
HausdorffReport<Scalar> hausdorff_distance(const Fold<Scalar>& fold, const HausdorffSpec& spec) {
  const auto& table = fold.table();
  const AmbientModel& model = fold.model();
  const BoxGrid<Scalar> grid = region_grid(table.region(), spec.grid_per_axis, spec.max_points);
  std::vector<long> slot(static_cast<std::size_t>(grid.size()), -1);
  std::vector<long> cell_of;
  std::vector<VectorX<Scalar>> table_pts, fold_plus, fold_minus;
  HausdorffReport<Scalar> r;
  r.lambda = fold.lambda();
  Scalar R = 0;
  for (long c = 0; c < grid.size(); ++c) {
    const VectorX<Scalar> x = grid.point(c);
    if (!table.contains(x)) continue;
    slot[static_cast<std::size_t>(c)] = static_cast<long>(table_pts.size());
    cell_of.push_back(c);
    table_pts.push_back(embed_in_H(x));
    fold_plus.push_back(fold.lift(x, 1));
    fold_minus.push_back(fold.lift(x, -1));
    r.max_sqrt_f = std::max(r.max_sqrt_f, std::sqrt(table.value(x)));
    R = std::max(R, fold_plus.back().norm());
  }
  require(!table_pts.empty(), ErrorKind::Config, "Hausdorff sampling produced no table points");
  r.n_table = static_cast<long>(table_pts.size());
  r.n_fold = 2 * r.n_table;

  if (model.kind != ModelKind::Euclidean) {
    Scalar c2 = 0;
    for (std::size_t i = 0; i < table_pts.size(); ++i)
      for (const VectorX<Scalar>* p : {&table_pts[i], &fold_plus[i]}) {
        const Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(metric_tensor(model, *p).g, Eigen::EigenvaluesOnly);
        c2 = std::max(c2, eig.eigenvalues().maxCoeff());
      }
    r.metric_constant = std::sqrt(c2);
  }

  Scalar R_table = 0;
  for (const auto& x : table_pts) R_table = std::max(R_table, x.norm());
  const Scalar R_fold = R;
  auto max_reduce = [](Scalar a, Scalar b) { return std::max(a, b); };
  const std::size_t count = table_pts.size();
  const Eigen::Index last = table.n();
  // Slightly inflated so rounding in the Euclidean bound never prunes a closer candidate.
  const Scalar inflate = Scalar(1) + Scalar(1e-9);

  // sup over fold samples of the distance to the table samples.
  r.fold_to_table = parallel_reduce(
      count * 2, spec.workers, Scalar(0),
      [&](std::size_t begin, std::size_t end) {
        Scalar worst = 0;
        for (std::size_t k = begin; k < end; ++k) {
          const std::size_t i = k / 2;
          const VectorX<Scalar>& q = (k % 2 == 0) ? fold_plus[i] : fold_minus[i];
          const Scalar q_norm = q.norm();
          Scalar best = distance(model, q, table_pts[i]);
          Scalar rho = inflate * detail::euclidean_search_radius(model.kind, q_norm, R_table, best);
          const auto radius = [&] { return rho; };
          detail::search_shells(grid, grid.cell(cell_of[i]), std::abs(q(last)), radius, [&](long c) {
            const long s = slot[static_cast<std::size_t>(c)];
            if (s < 0) return;
            const VectorX<Scalar>& x = table_pts[static_cast<std::size_t>(s)];
            if ((q - x).squaredNorm() >= rho * rho) return;
            const Scalar d = distance(model, q, x);
            if (d < best) {
              best = d;
              rho = inflate * detail::euclidean_search_radius(model.kind, q_norm, R_table, best);
            }
          });
          worst = std::max(worst, best);
        }
        return worst;
      },
      max_reduce);

  // sup over table samples of the distance to the fold samples.
  r.table_to_fold = parallel_reduce(
      count, spec.workers, Scalar(0),
      [&](std::size_t begin, std::size_t end) {
        Scalar worst = 0;
        for (std::size_t i = begin; i < end; ++i) {
          const VectorX<Scalar>& x = table_pts[i];
          const Scalar x_norm = x.norm();
          Scalar best = std::min(distance(model, x, fold_plus[i]), distance(model, x, fold_minus[i]));
          Scalar rho = inflate * detail::euclidean_search_radius(model.kind, x_norm, R_fold, best);
          const auto radius = [&] { return rho; };
          detail::search_shells(grid, grid.cell(cell_of[i]), Scalar(0), radius, [&](long c) {
            const long s = slot[static_cast<std::size_t>(c)];
            if (s < 0) return;
            const auto u = static_cast<std::size_t>(s);
            for (const VectorX<Scalar>* q : {&fold_plus[u], &fold_minus[u]}) {
              if ((x - *q).squaredNorm() >= rho * rho) continue;
              const Scalar d = distance(model, x, *q);
              if (d < best) {
                best = d;
                rho = inflate * detail::euclidean_search_radius(model.kind, x_norm, R_fold, best);
              }
            }
          });
          worst = std::max(worst, best);
        }
        return worst;
      },
      max_reduce);

  r.bound = r.max_sqrt_f * fold.lambda() * r.metric_constant;
  r.slack = Scalar(spec.slack);
  r.within_bound = r.fold_to_table <= r.bound + r.slack && r.table_to_fold <= r.bound + r.slack;
  return r;
}

}  // namespace foldlab
