#pragma once

// Constant-curvature ambient structures on R^{dim}: the flat metric, the
// hyperboloid-pullback metric g_ij = delta_ij - x_i x_j / (1 + r^2) and the
// stereographic metric 4 / (1 + r^2)^2 delta_ij.

#include "foldlab/errors.hpp"
#include "foldlab/types.hpp"

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

namespace foldlab {

enum class ModelKind { Euclidean, Hyperbolic, Spherical };

constexpr std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Euclidean: return "euclidean";
    case ModelKind::Hyperbolic: return "hyperbolic";
    case ModelKind::Spherical: return "spherical";
  }
  return "unknown";
}

struct AmbientModel {
  ModelKind kind = ModelKind::Euclidean;
  int dim = 3;

  static AmbientModel euclidean(int dim) { return {ModelKind::Euclidean, dim}; }
  static AmbientModel hyperbolic(int dim) { return {ModelKind::Hyperbolic, dim}; }
  static AmbientModel spherical(int dim) { return {ModelKind::Spherical, dim}; }

  template <typename Scalar = double>
  Scalar kappa() const {
    switch (kind) {
      case ModelKind::Euclidean: return Scalar(0);
      case ModelKind::Hyperbolic: return Scalar(-1);
      case ModelKind::Spherical: return Scalar(1);
    }
    return Scalar(0);
  }
};

template <typename Scalar>
struct MetricAt {
  VectorX<Scalar> point;
  MatrixX<Scalar> g;
  MatrixX<Scalar> g_inv;

  template <typename A, typename B>
  Scalar inner(const Eigen::MatrixBase<A>& v, const Eigen::MatrixBase<B>& w) const {
    return v.dot(g * w);
  }
  template <typename A>
  Scalar norm(const Eigen::MatrixBase<A>& v) const {
    return std::sqrt(std::max(Scalar(0), inner(v, v)));
  }
  template <typename A>
  VectorX<Scalar> normalized(const Eigen::MatrixBase<A>& v) const {
    return v / norm(v);
  }
  /// Riemannian gradient from a Euclidean gradient (raise the index).
  template <typename A>
  VectorX<Scalar> raise(const Eigen::MatrixBase<A>& covector) const {
    return g_inv * covector;
  }
};

namespace detail {

template <typename Derived>
void check_finite(const Eigen::MatrixBase<Derived>& x, const char* what) {
  require(x.allFinite(), ErrorKind::InvalidInput, std::string(what) + " has non-finite entries");
}

template <typename Derived>
void check_dim(const AmbientModel& model, const Eigen::MatrixBase<Derived>& x) {
  require(x.size() == model.dim, ErrorKind::InvalidInput,
          "point dimension " + std::to_string(x.size()) + " does not match ambient dimension " +
              std::to_string(model.dim));
}

}  // namespace detail

template <typename Derived>
MetricAt<typename Derived::Scalar> metric_tensor(const AmbientModel& model,
                                                 const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::check_finite(x, "metric_tensor point");
  detail::check_dim(model, x);
  const Eigen::Index d = x.size();
  MetricAt<Scalar> m;
  m.point = x;
  const Scalar r2 = x.squaredNorm();
  switch (model.kind) {
    case ModelKind::Euclidean:
      m.g = MatrixX<Scalar>::Identity(d, d);
      m.g_inv = m.g;
      break;
    case ModelKind::Hyperbolic:
      m.g = MatrixX<Scalar>::Identity(d, d) - x * x.transpose() / (Scalar(1) + r2);
      // Sherman-Morrison: (I - x x^T / (1 + r^2))^{-1} = I + x x^T.
      m.g_inv = MatrixX<Scalar>::Identity(d, d) + x * x.transpose();
      break;
    case ModelKind::Spherical: {
      const Scalar s = Scalar(1) + r2;
      m.g = MatrixX<Scalar>::Identity(d, d) * (Scalar(4) / (s * s));
      m.g_inv = MatrixX<Scalar>::Identity(d, d) * (s * s / Scalar(4));
      break;
    }
  }
  return m;
}

/// Christoffel symbols of the second kind, stored as symbols[k](i, j) = Gamma^k_ij.
template <typename Scalar>
class Christoffel {
 public:
  explicit Christoffel(Eigen::Index dim)
      : symbols_(static_cast<std::size_t>(dim), MatrixX<Scalar>::Zero(dim, dim)) {}

  Eigen::Index dim() const { return static_cast<Eigen::Index>(symbols_.size()); }

  Scalar operator()(Eigen::Index k, Eigen::Index i, Eigen::Index j) const {
    return symbols_[static_cast<std::size_t>(k)](i, j);
  }
  Scalar& operator()(Eigen::Index k, Eigen::Index i, Eigen::Index j) {
    return symbols_[static_cast<std::size_t>(k)](i, j);
  }
  const MatrixX<Scalar>& slice(Eigen::Index k) const { return symbols_[static_cast<std::size_t>(k)]; }

  /// Gamma^k_ij v^i w^j for every k.
  template <typename A, typename B>
  VectorX<Scalar> contract(const Eigen::MatrixBase<A>& v, const Eigen::MatrixBase<B>& w) const {
    VectorX<Scalar> out(dim());
    for (Eigen::Index k = 0; k < dim(); ++k) out(k) = v.dot(slice(k) * w);
    return out;
  }

  /// Leading n x n x n block (indices restricted to the first n coordinates).
  Christoffel leading_block(Eigen::Index n) const {
    Christoffel out(n);
    for (Eigen::Index k = 0; k < n; ++k) out.symbols_[static_cast<std::size_t>(k)] = slice(k).topLeftCorner(n, n);
    return out;
  }

 private:
  std::vector<MatrixX<Scalar>> symbols_;
};

template <typename Derived>
Christoffel<typename Derived::Scalar> christoffel(const AmbientModel& model,
                                                  const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::check_finite(x, "christoffel point");
  detail::check_dim(model, x);
  const Eigen::Index d = x.size();
  Christoffel<Scalar> gamma(d);
  switch (model.kind) {
    case ModelKind::Euclidean:
      break;
    case ModelKind::Hyperbolic: {
      // Geodesics satisfy x'' = |x'|_g^2 x, hence Gamma^k_ij = -x_k g_ij.
      const MatrixX<Scalar> g = MatrixX<Scalar>::Identity(d, d) - x * x.transpose() / (Scalar(1) + x.squaredNorm());
      for (Eigen::Index k = 0; k < d; ++k)
        for (Eigen::Index i = 0; i < d; ++i)
          for (Eigen::Index j = 0; j < d; ++j) gamma(k, i, j) = -x(k) * g(i, j);
      break;
    }
    case ModelKind::Spherical: {
      // Conformal metric e^{2 phi} delta with phi = log 2 - log(1 + r^2).
      const VectorX<Scalar> dphi = Scalar(-2) * x / (Scalar(1) + x.squaredNorm());
      for (Eigen::Index k = 0; k < d; ++k)
        for (Eigen::Index i = 0; i < d; ++i)
          for (Eigen::Index j = 0; j < d; ++j) {
            Scalar value = 0;
            if (i == k) value += dphi(j);
            if (j == k) value += dphi(i);
            if (i == j) value -= dphi(k);
            gamma(k, i, j) = value;
          }
      break;
    }
  }
  return gamma;
}

/// Gamma^k_ij v^i w^j without materializing the symbols; the integrators' inner loop.
template <typename DX, typename DV, typename DW>
VectorX<typename DX::Scalar> christoffel_contract(const AmbientModel& model, const Eigen::MatrixBase<DX>& x,
                                                  const Eigen::MatrixBase<DV>& v,
                                                  const Eigen::MatrixBase<DW>& w) {
  using Scalar = typename DX::Scalar;
  switch (model.kind) {
    case ModelKind::Euclidean:
      return VectorX<Scalar>::Zero(x.size());
    case ModelKind::Hyperbolic: {
      const Scalar gvw = v.dot(w) - x.dot(v) * x.dot(w) / (Scalar(1) + x.squaredNorm());
      return -gvw * x;
    }
    case ModelKind::Spherical: {
      const VectorX<Scalar> dphi = Scalar(-2) * x / (Scalar(1) + x.squaredNorm());
      return v * dphi.dot(w) + w * dphi.dot(v) - v.dot(w) * dphi;
    }
  }
  return VectorX<Scalar>::Zero(x.size());
}

/// Inverse stereographic map R^d -> S^d, (2x, |x|^2 - 1) / (1 + |x|^2).
template <typename Derived>
VectorX<typename Derived::Scalar> inverse_stereographic(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Scalar r2 = x.squaredNorm();
  VectorX<Scalar> y(x.size() + 1);
  y.head(x.size()) = Scalar(2) * x / (Scalar(1) + r2);
  y(x.size()) = (r2 - Scalar(1)) / (r2 + Scalar(1));
  return y;
}

/// Stereographic projection from the north pole, S^d \ {N} -> R^d.
template <typename Derived>
VectorX<typename Derived::Scalar> stereographic(const Eigen::MatrixBase<Derived>& y) {
  const Eigen::Index d = y.size() - 1;
  return y.head(d) / (typename Derived::Scalar(1) - y(d));
}

/// Upper-sheet hyperboloid point (x, sqrt(1 + |x|^2)).
template <typename Derived>
VectorX<typename Derived::Scalar> hyperboloid_lift(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  VectorX<Scalar> y(x.size() + 1);
  y.head(x.size()) = x;
  y(x.size()) = std::sqrt(Scalar(1) + x.squaredNorm());
  return y;
}

template <typename DP, typename DQ>
typename DP::Scalar distance(const AmbientModel& model, const Eigen::MatrixBase<DP>& p,
                             const Eigen::MatrixBase<DQ>& q) {
  using Scalar = typename DP::Scalar;
  detail::check_finite(p, "distance point");
  detail::check_finite(q, "distance point");
  detail::check_dim(model, p);
  detail::check_dim(model, q);
  constexpr Scalar slack = Scalar(1e-12);
  switch (model.kind) {
    case ModelKind::Euclidean:
      return (p - q).norm();
    case ModelKind::Hyperbolic: {
      // arccosh(sqrt(1+|p|^2) sqrt(1+|q|^2) - p.q) in its cancellation-free form:
      // 4 sinh^2(d/2) = |p - q|^2 - (s_p - s_q)^2 (Minkowski chord on the hyperboloid).
      const Scalar sp = std::sqrt(Scalar(1) + p.squaredNorm());
      const Scalar sq = std::sqrt(Scalar(1) + q.squaredNorm());
      const Scalar ds = (p.squaredNorm() - q.squaredNorm()) / (sp + sq);
      Scalar chord2 = (p - q).squaredNorm() - ds * ds;
      require(chord2 >= -slack * (Scalar(1) + (p - q).squaredNorm()), ErrorKind::Numeric,
              "hyperbolic distance argument out of range");
      chord2 = std::max(chord2, Scalar(0));
      return Scalar(2) * std::asinh(std::sqrt(chord2) / Scalar(2));
    }
    case ModelKind::Spherical: {
      // arccos(S(p).S(q)) written as 2 asin(|S(p) - S(q)| / 2).
      const Scalar half_chord = (inverse_stereographic(p) - inverse_stereographic(q)).norm() / Scalar(2);
      require(half_chord <= Scalar(1) + slack, ErrorKind::Numeric, "spherical distance argument out of range");
      return Scalar(2) * std::asin(std::min(half_chord, Scalar(1)));
    }
  }
  return Scalar(0);
}

/// Point at parameter s on the model geodesic with gamma(0) = p, gamma(1) = q.
template <typename DP, typename DQ>
VectorX<typename DP::Scalar> geodesic_point(const AmbientModel& model, const Eigen::MatrixBase<DP>& p,
                                            const Eigen::MatrixBase<DQ>& q, typename DP::Scalar s) {
  using Scalar = typename DP::Scalar;
  const Scalar d = distance(model, p, q);
  if (d < Scalar(1e-14)) return p + s * (q - p);
  switch (model.kind) {
    case ModelKind::Euclidean:
      return p + s * (q - p);
    case ModelKind::Hyperbolic: {
      const Scalar sd = std::sinh(d);
      return (std::sinh((Scalar(1) - s) * d) * p + std::sinh(s * d) * q) / sd;
    }
    case ModelKind::Spherical: {
      const VectorX<Scalar> a = inverse_stereographic(p);
      const VectorX<Scalar> b = inverse_stereographic(q);
      const Scalar sd = std::sin(d);
      const VectorX<Scalar> y = (std::sin((Scalar(1) - s) * d) * a + std::sin(s * d) * b) / sd;
      return stereographic(y);
    }
  }
  return p;
}

/// Logarithm map: the tangent vector v at p with exp_p(v) = q, |v|_g = d(p, q).
template <typename DP, typename DQ>
VectorX<typename DP::Scalar> log_map(const AmbientModel& model, const Eigen::MatrixBase<DP>& p,
                                     const Eigen::MatrixBase<DQ>& q) {
  using Scalar = typename DP::Scalar;
  const Scalar d = distance(model, p, q);
  if (d < Scalar(1e-14)) return q - p;
  switch (model.kind) {
    case ModelKind::Euclidean:
      return q - p;
    case ModelKind::Hyperbolic:
      // Spatial part of d (Q - cosh(d) P) / sinh(d) on the hyperboloid.
      return d * (q - std::cosh(d) * p) / std::sinh(d);
    case ModelKind::Spherical: {
      const VectorX<Scalar> a = inverse_stereographic(p);
      const VectorX<Scalar> b = inverse_stereographic(q);
      const VectorX<Scalar> w = d * (b - std::cos(d) * a) / std::sin(d);
      // Push w through the differential of the stereographic projection at a.
      const Eigen::Index n = p.size();
      const Scalar denom = Scalar(1) - a(n);
      return w.head(n) / denom + a.head(n) * w(n) / (denom * denom);
    }
  }
  return q - p;
}

/// Comparison profile: (1 - cos(r sqrt k)) / k, r^2 / 2, (1 - cosh(r sqrt(-k))) / k.
template <typename Scalar>
Scalar rho_kappa(Scalar kappa, Scalar r) {
  require(r >= Scalar(0), ErrorKind::InvalidInput, "rho_kappa requires r >= 0");
  require(std::isfinite(kappa) && std::isfinite(r), ErrorKind::InvalidInput, "rho_kappa requires finite input");
  if (kappa > 0) {
    const Scalar s = std::sin(r * std::sqrt(kappa) / Scalar(2));
    return Scalar(2) * s * s / kappa;
  }
  if (kappa < 0) {
    const Scalar s = std::sinh(r * std::sqrt(-kappa) / Scalar(2));
    return Scalar(2) * s * s / (-kappa);
  }
  return r * r / Scalar(2);
}

/// Diameter of the simply connected model surface of curvature kappa.
template <typename Scalar>
Scalar alpha_kappa(Scalar kappa) {
  if (kappa > 0) return pi_v<Scalar> / std::sqrt(kappa);
  return std::numeric_limits<Scalar>::infinity();
}

/// Metric induced on H = {x_{n+1} = 0} at (x, 0); x has length dim - 1.
template <typename Derived>
MetricAt<typename Derived::Scalar> induced_metric_on_H(const AmbientModel& model,
                                                       const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  require(x.size() + 1 == model.dim, ErrorKind::InvalidInput, "table point must have dimension dim - 1");
  const MetricAt<Scalar> full = metric_tensor(model, embed_in_H(x));
  const Eigen::Index n = x.size();
  MetricAt<Scalar> m;
  m.point = x;
  m.g = full.g.topLeftCorner(n, n);
  // Cross terms g_{i,n+1} vanish on H for all three models, so the block inverse is the inverse block.
  m.g_inv = full.g_inv.topLeftCorner(n, n);
  return m;
}

/// Distance between two table points, measured in the ambient model on H.
template <typename DP, typename DQ>
typename DP::Scalar distance_on_H(const AmbientModel& model, const Eigen::MatrixBase<DP>& x,
                                  const Eigen::MatrixBase<DQ>& y) {
  return distance(model, embed_in_H(x), embed_in_H(y));
}

}  // namespace foldlab
