#pragma once

// Billiard tables K ∩ U = {f >= 0} in the hyperplane H, boundary frames in the
// induced metric, polar pairs and the reflection law.

#include "foldlab/ambient.hpp"
#include "foldlab/errors.hpp"
#include "foldlab/polynomial.hpp"
#include "foldlab/types.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace foldlab {

enum class TableKind { Disk, HalfSpace, ParabolaComplement, SphericalHalfSpace, Polynomial, Custom };

constexpr std::string_view to_string(TableKind kind) {
  switch (kind) {
    case TableKind::Disk: return "disk";
    case TableKind::HalfSpace: return "half-space";
    case TableKind::ParabolaComplement: return "parabola";
    case TableKind::SphericalHalfSpace: return "spherical-halfspace";
    case TableKind::Polynomial: return "polynomial";
    case TableKind::Custom: return "custom";
  }
  return "unknown";
}

/// lower < poly(x) < upper
struct RegionConstraint {
  Polynomial poly;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

/// Bounded open neighborhood U: a Euclidean ball, optionally cut by polynomial constraints.
template <typename Scalar>
struct Region {
  VectorX<Scalar> center;
  Scalar radius = 1;
  std::vector<RegionConstraint> constraints;

  template <typename Derived>
  bool contains(const Eigen::MatrixBase<Derived>& x) const {
    if ((x - center).norm() >= radius) return false;
    for (const auto& c : constraints) {
      const Scalar v = c.poly.value(x);
      if (!(v > Scalar(c.lower) && v < Scalar(c.upper))) return false;
    }
    return true;
  }
};

template <typename Scalar>
class TableSpec {
 public:
  using Function = std::function<Scalar(const VectorX<Scalar>&)>;
  using Gradient = std::function<VectorX<Scalar>(const VectorX<Scalar>&)>;
  using Hessian = std::function<MatrixX<Scalar>(const VectorX<Scalar>&)>;

  TableSpec(TableKind kind, std::string name, int n, Function f, Gradient grad, Hessian hess, Region<Scalar> region,
            VectorX<Scalar> p0)
      : kind_(kind),
        name_(std::move(name)),
        n_(n),
        f_(std::move(f)),
        grad_(std::move(grad)),
        hess_(std::move(hess)),
        region_(std::move(region)),
        p0_(std::move(p0)) {
    validate();
  }

  static TableSpec from_polynomial(TableKind kind, std::string name, Polynomial poly, Region<Scalar> region,
                                   VectorX<Scalar> p0) {
    const int n = poly.dim();
    auto shared = std::make_shared<Polynomial>(std::move(poly));
    TableSpec table(
        kind, std::move(name), n, [shared](const VectorX<Scalar>& x) { return shared->value(x); },
        [shared](const VectorX<Scalar>& x) { return shared->gradient(x); },
        [shared](const VectorX<Scalar>& x) { return shared->hessian(x); }, std::move(region), std::move(p0));
    table.poly_ = shared;
    return table;
  }

  /// Table from f alone; Df and D^2 f by central differences.
  static TableSpec from_function(std::string name, int n, Function f, Region<Scalar> region, VectorX<Scalar> p0) {
    auto grad = [f](const VectorX<Scalar>& x) { return central_gradient(f, x); };
    auto hess = [f](const VectorX<Scalar>& x) { return central_hessian(f, x); };
    return TableSpec(TableKind::Custom, std::move(name), n, f, grad, hess, std::move(region), std::move(p0));
  }

  static constexpr Scalar gradient_step = Scalar(1e-5);
  static constexpr Scalar hessian_step = Scalar(1e-4);

  static VectorX<Scalar> central_gradient(const Function& f, const VectorX<Scalar>& x) {
    VectorX<Scalar> g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      VectorX<Scalar> a = x, b = x;
      a(i) += gradient_step;
      b(i) -= gradient_step;
      g(i) = (f(a) - f(b)) / (Scalar(2) * gradient_step);
    }
    return g;
  }

  static MatrixX<Scalar> central_hessian(const Function& f, const VectorX<Scalar>& x) {
    const Eigen::Index n = x.size();
    const Scalar h = hessian_step;
    MatrixX<Scalar> H(n, n);
    const Scalar f0 = f(x);
    for (Eigen::Index i = 0; i < n; ++i) {
      VectorX<Scalar> a = x, b = x;
      a(i) += h;
      b(i) -= h;
      H(i, i) = (f(a) - Scalar(2) * f0 + f(b)) / (h * h);
      for (Eigen::Index j = i + 1; j < n; ++j) {
        VectorX<Scalar> pp = x, pm = x, mp = x, mm = x;
        pp(i) += h, pp(j) += h;
        pm(i) += h, pm(j) -= h;
        mp(i) -= h, mp(j) += h;
        mm(i) -= h, mm(j) -= h;
        H(i, j) = H(j, i) = (f(pp) - f(pm) - f(mp) + f(mm)) / (Scalar(4) * h * h);
      }
    }
    return H;
  }

  /// Same f with another U and base point.
  TableSpec rebased(Region<Scalar> region, VectorX<Scalar> p0) const {
    TableSpec t(kind_, name_, n_, f_, grad_, hess_, std::move(region), std::move(p0));
    t.poly_ = poly_;
    return t;
  }

  TableKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  int n() const { return n_; }
  const Region<Scalar>& region() const { return region_; }
  const VectorX<Scalar>& p0() const { return p0_; }
  const Polynomial* polynomial() const { return poly_.get(); }

  Scalar value(const VectorX<Scalar>& x) const { return f_(x); }
  VectorX<Scalar> gradient(const VectorX<Scalar>& x) const { return grad_(x); }
  MatrixX<Scalar> hessian(const VectorX<Scalar>& x) const { return hess_(x); }

  bool in_region(const VectorX<Scalar>& x) const { return region_.contains(x); }
  /// x ∈ K ∩ U
  bool contains(const VectorX<Scalar>& x) const { return f_(x) >= Scalar(0) && region_.contains(x); }

  /// One to a few Newton steps along Df onto {f = 0}.
  VectorX<Scalar> project_to_boundary(VectorX<Scalar> x, int max_iter = 20) const {
    for (int it = 0; it < max_iter; ++it) {
      const Scalar fx = f_(x);
      if (std::abs(fx) <= Scalar(1e-14)) break;
      const VectorX<Scalar> g = grad_(x);
      const Scalar g2 = g.squaredNorm();
      require(g2 > Scalar(1e-20), ErrorKind::DegenerateBoundary, "vanishing Df while projecting onto the boundary");
      x -= fx * g / g2;
    }
    return x;
  }

 private:
  void validate() const {
    require(n_ >= 1, ErrorKind::InvalidInput, "table dimension must be positive");
    require(p0_.size() == n_, ErrorKind::InvalidInput, "p0 dimension mismatch");
    require(region_.center.size() == n_, ErrorKind::InvalidInput, "region center dimension mismatch");
    require(std::isfinite(region_.radius) && region_.radius > 0, ErrorKind::InvalidInput,
            "region radius must be finite and positive");
    require(region_.contains(p0_), ErrorKind::InvalidInput, "p0 must lie in U");
    require(std::abs(f_(p0_)) <= Scalar(1e-10), ErrorKind::InvalidInput, "f(p0) must vanish");
    require(grad_(p0_).norm() >= Scalar(1e-10), ErrorKind::DegenerateBoundary, "0 must be a regular value at p0");
    const MatrixX<Scalar> h = hess_(p0_);
    require((h - h.transpose()).cwiseAbs().maxCoeff() <= Scalar(1e-12), ErrorKind::InvalidInput,
            "hessian of f is not symmetric");
  }

  TableKind kind_;
  std::string name_;
  int n_;
  Function f_;
  Gradient grad_;
  Hessian hess_;
  Region<Scalar> region_;
  VectorX<Scalar> p0_;
  std::shared_ptr<const Polynomial> poly_;
};

namespace tables {

inline std::vector<int> unit_powers(int n, int index, int power) {
  std::vector<int> p(static_cast<std::size_t>(n), 0);
  p[static_cast<std::size_t>(index)] = power;
  return p;
}

/// f = 1 - |x|^2, p0 = e_1, U = B(p0, 2.5) so that K ∩ U is the whole closed disk.
template <typename Scalar = double>
TableSpec<Scalar> disk(int n = 2) {
  std::vector<Monomial> terms{{1.0, std::vector<int>(static_cast<std::size_t>(n), 0)}};
  for (int i = 0; i < n; ++i) terms.push_back({-1.0, unit_powers(n, i, 2)});
  VectorX<Scalar> p0 = VectorX<Scalar>::Zero(n);
  p0(0) = 1;
  return TableSpec<Scalar>::from_polynomial(TableKind::Disk, "disk", Polynomial(n, terms),
                                            Region<Scalar>{p0, Scalar(2.5), {}}, p0);
}

/// f = x_1, p0 = 0, U = B(0, 1).
template <typename Scalar = double>
TableSpec<Scalar> half_space(int n = 2) {
  const VectorX<Scalar> p0 = VectorX<Scalar>::Zero(n);
  return TableSpec<Scalar>::from_polynomial(TableKind::HalfSpace, "half-space",
                                            Polynomial(n, {{1.0, unit_powers(n, 0, 1)}}),
                                            Region<Scalar>{p0, Scalar(1), {}}, p0);
}

/// f = x_1^2 - x_2 (the region outside the parabola x_2 = x_1^2), p0 = 0, U = B(0, 1).
template <typename Scalar = double>
TableSpec<Scalar> parabola_complement() {
  const VectorX<Scalar> p0 = VectorX<Scalar>::Zero(2);
  return TableSpec<Scalar>::from_polynomial(TableKind::ParabolaComplement, "parabola",
                                            Polynomial(2, {{1.0, {2, 0}}, {-1.0, {0, 1}}}),
                                            Region<Scalar>{p0, Scalar(1), {}}, p0);
}

/// f = x_1 with U = {-3/2 < 3 x_1^2 - 1 - x_2^2 - ... - x_n^2 < 0} ∩ B(0, 1).
template <typename Scalar = double>
TableSpec<Scalar> spherical_half_space(int n = 3) {
  const VectorX<Scalar> p0 = VectorX<Scalar>::Zero(n);
  std::vector<Monomial> terms{{3.0, unit_powers(n, 0, 2)}, {-1.0, std::vector<int>(static_cast<std::size_t>(n), 0)}};
  for (int i = 1; i < n; ++i) terms.push_back({-1.0, unit_powers(n, i, 2)});
  Region<Scalar> region{p0, Scalar(1), {RegionConstraint{Polynomial(n, terms), -1.5, 0.0}}};
  return TableSpec<Scalar>::from_polynomial(TableKind::SphericalHalfSpace, "spherical-halfspace",
                                            Polynomial(n, {{1.0, unit_powers(n, 0, 1)}}), std::move(region), p0);
}

}  // namespace tables

template <typename Scalar>
struct BoundaryFrame {
  VectorX<Scalar> x0;
  MetricAt<Scalar> metric;
  VectorX<Scalar> nu;              // inward g-unit normal
  MatrixX<Scalar> tangent_basis;   // n x (n - 1), g-orthonormal columns

  Scalar normal_component(const VectorX<Scalar>& w) const { return metric.inner(w, nu); }
  VectorX<Scalar> tangential_part(const VectorX<Scalar>& w) const { return w - normal_component(w) * nu; }
};

namespace detail {
inline constexpr double boundary_tol = 1e-8;
inline constexpr double cone_tol = 1e-10;
inline constexpr double polar_tol = 1e-9;
inline constexpr double unit_tol = 1e-9;
}  // namespace detail

template <typename Scalar>
BoundaryFrame<Scalar> boundary_frame(const TableSpec<Scalar>& table, const AmbientModel& model,
                                     const VectorX<Scalar>& x0) {
  require(x0.size() == table.n() && model.dim == table.n() + 1, ErrorKind::InvalidInput,
          "boundary_frame dimension mismatch");
  require(std::abs(table.value(x0)) <= Scalar(detail::boundary_tol), ErrorKind::Precondition,
          "point is not on the boundary f = 0");
  require(table.in_region(x0), ErrorKind::Precondition, "boundary point outside U");
  const VectorX<Scalar> df = table.gradient(x0);
  require(df.norm() >= Scalar(1e-10), ErrorKind::DegenerateBoundary, "Df vanishes at boundary point");

  BoundaryFrame<Scalar> frame;
  frame.x0 = x0;
  frame.metric = induced_metric_on_H(model, x0);
  frame.nu = frame.metric.normalized(frame.metric.raise(df));

  const Eigen::Index n = x0.size();
  frame.tangent_basis.resize(n, n - 1);
  Eigen::Index found = 0;
  for (Eigen::Index i = 0; i < n && found < n - 1; ++i) {
    VectorX<Scalar> v = VectorX<Scalar>::Unit(n, i);
    v -= frame.metric.inner(v, frame.nu) * frame.nu;
    for (Eigen::Index j = 0; j < found; ++j)
      v -= frame.metric.inner(v, frame.tangent_basis.col(j)) * frame.tangent_basis.col(j);
    const Scalar len = frame.metric.norm(v);
    if (len < Scalar(1e-6)) continue;
    frame.tangent_basis.col(found++) = v / len;
  }
  require(found == n - 1, ErrorKind::Numeric, "failed to build a boundary tangent basis");
  return frame;
}

namespace detail {

template <typename Scalar>
void check_cone_unit(const BoundaryFrame<Scalar>& frame, const VectorX<Scalar>& u, const char* what) {
  require(u.size() == frame.x0.size(), ErrorKind::InvalidInput, std::string(what) + " has wrong dimension");
  require(std::abs(frame.metric.inner(u, u) - Scalar(1)) <= Scalar(unit_tol), ErrorKind::Precondition,
          std::string(what) + " is not unit in g");
  require(frame.normal_component(u) >= -Scalar(cone_tol), ErrorKind::Precondition,
          std::string(what) + " is not in the tangent cone");
}

}  // namespace detail

/// The two equivalent polarity tests; exposed separately so they can be cross-checked.
struct PolarityTests {
  bool generating_set = false;  // g(u + v, w) >= -tol for w in {±t_i, nu}
  bool parallel_normal = false; // u + v = s nu with s >= -tol
};

template <typename Scalar>
PolarityTests polarity_tests(const BoundaryFrame<Scalar>& frame, const VectorX<Scalar>& u, const VectorX<Scalar>& v) {
  detail::check_cone_unit(frame, u, "u");
  detail::check_cone_unit(frame, v, "v");
  const Scalar tol = Scalar(detail::polar_tol);
  const VectorX<Scalar> sum = u + v;
  PolarityTests out;
  bool ok = frame.metric.inner(sum, frame.nu) >= -tol;
  for (Eigen::Index i = 0; i < frame.tangent_basis.cols(); ++i) {
    const Scalar c = frame.metric.inner(sum, frame.tangent_basis.col(i));
    ok = ok && c >= -tol && -c >= -tol;
  }
  out.generating_set = ok;
  const Scalar s = frame.normal_component(sum);
  const VectorX<Scalar> residual = sum - s * frame.nu;
  out.parallel_normal = s >= -tol && frame.metric.norm(residual) <= tol;
  return out;
}

template <typename Scalar>
bool is_polar(const TableSpec<Scalar>& table, const AmbientModel& model, const VectorX<Scalar>& x0,
              const VectorX<Scalar>& u, const VectorX<Scalar>& v) {
  return polarity_tests(boundary_frame(table, model, x0), u, v).generating_set;
}

/// Unique polar partner: u = ũ + r nu maps to -ũ + r nu.
template <typename Scalar>
VectorX<Scalar> polar_vector(const BoundaryFrame<Scalar>& frame, const VectorX<Scalar>& u) {
  detail::check_cone_unit(frame, u, "u");
  const Scalar r = frame.normal_component(u);
  return -(u - r * frame.nu) + r * frame.nu;
}

template <typename Scalar>
VectorX<Scalar> polar_vector(const TableSpec<Scalar>& table, const AmbientModel& model, const VectorX<Scalar>& x0,
                             const VectorX<Scalar>& u) {
  return polar_vector(boundary_frame(table, model, x0), u);
}

/// Mirror law v = w - 2 g(w, nu) nu for an incoming unit vector (g(w, nu) <= 0).
template <typename Scalar>
VectorX<Scalar> reflect(const BoundaryFrame<Scalar>& frame, const VectorX<Scalar>& w_in) {
  require(w_in.size() == frame.x0.size(), ErrorKind::InvalidInput, "w_in has wrong dimension");
  require(std::abs(frame.metric.inner(w_in, w_in) - Scalar(1)) <= Scalar(detail::unit_tol), ErrorKind::Precondition,
          "w_in is not unit in g");
  const Scalar c = frame.normal_component(w_in);
  require(c <= Scalar(detail::cone_tol), ErrorKind::Precondition, "w_in points into the table (outgoing)");
  return w_in - Scalar(2) * c * frame.nu;
}

template <typename Scalar>
VectorX<Scalar> reflect(const TableSpec<Scalar>& table, const AmbientModel& model, const VectorX<Scalar>& x0,
                        const VectorX<Scalar>& w_in) {
  return reflect(boundary_frame(table, model, x0), w_in);
}

/// Random boundary point: a uniform point of U pushed onto f = 0 by Newton steps, retried until it stays in U.
template <typename Scalar, typename Rng>
VectorX<Scalar> random_boundary_point(const TableSpec<Scalar>& table, Rng& rng, int max_tries = 10000) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto& U = table.region();
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    VectorX<Scalar> x(table.n());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = U.center(i) + U.radius * Scalar(unit(rng));
    if (!U.contains(x)) continue;
    try {
      x = table.project_to_boundary(x);
    } catch (const Error&) {
      continue;
    }
    if (std::abs(table.value(x)) <= Scalar(1e-12) && U.contains(x)) return x;
  }
  throw Error(ErrorKind::Numeric, "could not sample a boundary point of " + table.name());
}

template <typename Scalar, typename Rng>
VectorX<Scalar> random_unit_vector(const MetricAt<Scalar>& metric, Rng& rng) {
  std::normal_distribution<double> normal;
  VectorX<Scalar> v(metric.g.rows());
  do {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Scalar(normal(rng));
  } while (v.norm() < Scalar(1e-6));
  return metric.normalized(v);
}

struct PolarCheckReport {
  int samples = 0;
  int passed = 0;
  int failed = 0;
  int test_disagreements = 0;
};

/// Property check: the reflected pair is polar, and a tangential perturbation of the outgoing vector is not.
template <typename Scalar>
PolarCheckReport reflection_iff_polar_check(const TableSpec<Scalar>& table, const AmbientModel& model, int samples,
                                            std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  PolarCheckReport report;
  report.samples = samples;
  const Scalar perturbation = Scalar(1e-3);
  for (int s = 0; s < samples; ++s) {
    const VectorX<Scalar> x0 = random_boundary_point(table, rng);
    const BoundaryFrame<Scalar> frame = boundary_frame(table, model, x0);
    VectorX<Scalar> w = random_unit_vector(frame.metric, rng);
    if (frame.normal_component(w) > 0) w -= Scalar(2) * frame.normal_component(w) * frame.nu;
    const VectorX<Scalar> v = reflect(frame, w);
    const VectorX<Scalar> u = -w;

    const PolarityTests exact = polarity_tests(frame, u, v);
    if (exact.generating_set != exact.parallel_normal) ++report.test_disagreements;

    bool broken = true;
    if (frame.tangent_basis.cols() > 0) {
      std::normal_distribution<double> normal;
      VectorX<Scalar> t = VectorX<Scalar>::Zero(x0.size());
      for (Eigen::Index i = 0; i < frame.tangent_basis.cols(); ++i) t += Scalar(normal(rng)) * frame.tangent_basis.col(i);
      t = frame.metric.normalized(t);
      const VectorX<Scalar> v_perturbed = frame.metric.normalized(v + perturbation * t);
      const PolarityTests perturbed = polarity_tests(frame, u, v_perturbed);
      if (perturbed.generating_set != perturbed.parallel_normal) ++report.test_disagreements;
      broken = !perturbed.generating_set;
    }
    if (exact.generating_set && broken)
      ++report.passed;
    else
      ++report.failed;
  }
  return report;
}

}  // namespace foldlab
