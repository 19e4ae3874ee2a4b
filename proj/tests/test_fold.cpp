#include "foldlab/fold.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace foldlab;
using oracle::Mat;
using oracle::Vec;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Second derivative of F along the curve q + t v - t^2/2 Γ(v, v), which agrees with the
// model geodesic to second order. Γ comes from finite differences of the metric.
double hessian_along_geodesic_fd(const Fold<double>& fold, const Vec& q, const Vec& v) {
  const auto gamma = oracle::christoffel_fd(fold.model(), q);
  Vec gvv(q.size());
  for (Eigen::Index k = 0; k < q.size(); ++k) gvv(k) = v.dot(gamma[std::size_t(k)] * v);
  const double t = 1e-3;
  auto curve = [&](double s) { return Vec(q + s * v - 0.5 * s * s * gvv); };
  return (fold.level(curve(t)) - 2 * fold.level(q) + fold.level(curve(-t))) / (t * t);
}

// Random point of the fold over the sampled part of K ∩ U.
template <typename Rng>
Vec random_fold_point(const Fold<double>& fold, Rng& rng) {
  const auto& t = fold.table();
  std::uniform_int_distribution<int> sign(0, 1);
  for (;;) {
    const Vec x = t.region().center + oracle::random_point(rng, t.n(), t.region().radius);
    if (t.contains(x) && t.value(x) > 1e-6) return fold.lift(x, sign(rng) ? 1 : -1);
  }
}

double xi(double lambda, const Vec& q) {
  const Eigen::Index n = q.size() - 1;
  double rest = 0;
  for (Eigen::Index j = 1; j < n; ++j) rest += q(j) * q(j);
  const double x1 = q(0);
  const double den = 4 * x1 + lambda * lambda;
  return lambda * lambda * x1 * (3 * x1 * x1 - 1 - rest) / (den * den);
}

}  // namespace

TEST(Fold, LiftExamples) {
  const Fold<double> disk(tables::disk(), AmbientModel::euclidean(3), 0.5);
  EXPECT_LT((disk.lift(vec({0, 0}), 1) - vec({0, 0, 0.5})).norm(), 1e-15);
  EXPECT_LT((disk.lift(vec({1, 0}), 1) - vec({1, 0, 0})).norm(), 1e-15);
  EXPECT_LT((disk.lift(vec({1, 0}), -1) - vec({1, 0, 0})).norm(), 1e-15);
  const auto wide = tables::half_space().rebased(Region<double>{Vec::Zero(2), 10.0, {}}, Vec::Zero(2));
  const Fold<double> hs(wide, AmbientModel::euclidean(3), 0.2);
  EXPECT_LT((hs.lift(vec({4, 0}), -1) - vec({4, 0, -0.4})).norm(), 1e-15);
  try {
    disk.lift(vec({1.5, 0}), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutsideTable);
  }
}

TEST(Fold, LiftLiesOnFoldProperty) {
  std::mt19937_64 rng(1);
  for (const auto& model : oracle::all_models(3))
    for (double lambda : {0.9, 0.3, 0.01}) {
      const Fold<double> fold(tables::disk(), model, lambda);
      for (int s = 0; s < 50; ++s) EXPECT_LE(std::abs(fold.level(random_fold_point(fold, rng))), 1e-12);
    }
}

TEST(Fold, RejectsBadLambdaAndDimension) {
  EXPECT_THROW(Fold<double>(tables::disk(), AmbientModel::euclidean(3), 0.0), Error);
  EXPECT_THROW(Fold<double>(tables::disk(), AmbientModel::euclidean(3), 1.5), Error);
  EXPECT_THROW(Fold<double>(tables::disk(), AmbientModel::euclidean(4), 0.5), Error);
}

TEST(FrameAt, ParabolaSecondFundamentalForm) {
  for (double lambda : {0.5, 0.25, 0.1}) {
    const Fold<double> fold(tables::parabola_complement(), AmbientModel::euclidean(3), lambda);
    const auto fr = frame_at(fold, Vec(Vec::Zero(3)));
    const Vec e1 = vec({1, 0, 0}), e3 = vec({0, 0, 1});
    EXPECT_NEAR(fr.second_fundamental(e1, e1), -2.0, 1e-12);
    EXPECT_NEAR(fr.second_fundamental(e3, e3), 2.0 / (lambda * lambda), 1e-9);
    EXPECT_NEAR(fr.second_fundamental(e1, e3), 0.0, 1e-12);
  }
}

TEST(FrameAt, UnitSphereHasIdentityForm) {
  const Fold<double> sphere(tables::disk(), AmbientModel::euclidean(3), 1.0);
  const auto fr = frame_at(sphere, vec({1, 0, 0}));
  EXPECT_LT((fr.h - Mat::Identity(2, 2)).norm(), 1e-12);
}

TEST(FrameAt, SphericalGradientMatchesClosedForm) {
  std::mt19937_64 rng(2);
  for (double lambda : {0.9, 0.1}) {
    const Fold<double> fold(tables::spherical_half_space(3), AmbientModel::spherical(4), lambda);
    const auto at_p0 = frame_at(fold, Vec(Vec::Zero(4)));
    EXPECT_LT((at_p0.grad_F - vec({-lambda * lambda / 4, 0, 0, 0})).norm(), 1e-15);
    for (int s = 0; s < 20; ++s) {
      const Vec q = random_fold_point(fold, rng);
      const double r2 = q.squaredNorm();
      Vec expect = Vec::Zero(4);
      expect(0) = -lambda * lambda;
      expect(3) = 2 * q(3);
      expect *= (1 + r2) * (1 + r2) / 4;
      EXPECT_LT((frame_at(fold, q).grad_F - expect).norm(), 1e-13);
    }
  }
}

TEST(FrameAt, InvariantsProperty) {
  std::mt19937_64 rng(3);
  for (const auto& model : oracle::all_models(3))
    for (const auto& table : {tables::disk(), tables::half_space(), tables::parabola_complement()})
      for (double lambda : {0.7, 0.05}) {
        const Fold<double> fold(table, model, lambda);
        for (int s = 0; s < 20; ++s) {
          const auto fr = frame_at(fold, random_fold_point(fold, rng));
          for (Eigen::Index i = 0; i < fr.tangent_basis.cols(); ++i)
            EXPECT_NEAR(fr.metric.inner(fr.unit_normal, fr.tangent_basis.col(i)), 0.0, 1e-9);
          EXPECT_LT((fr.h - fr.h.transpose()).cwiseAbs().maxCoeff(), 1e-10);
          EXPECT_NEAR(fr.metric.norm(fr.unit_normal), 1.0, 1e-12);
        }
      }
}

TEST(FrameAt, HessianMatchesSecondDerivativeAlongGeodesics) {
  std::mt19937_64 rng(4);
  for (const auto& model : oracle::all_models(3))
    for (const auto& table : {tables::disk(), tables::parabola_complement()}) {
      const Fold<double> fold(table, model, 0.4);
      for (int s = 0; s < 10; ++s) {
        const Vec q = random_fold_point(fold, rng);
        const auto fr = frame_at(fold, q);
        const Vec v = oracle::random_point(rng, 3, 1.0);
        const double expect = hessian_along_geodesic_fd(fold, q, v);
        EXPECT_NEAR(v.dot(fr.hess_F * v), expect, 1e-5 * std::max(1.0, std::abs(expect)));
      }
    }
}

TEST(FrameAt, OffFoldAndSingularErrors) {
  const Fold<double> fold(tables::disk(), AmbientModel::euclidean(3), 0.5);
  try {
    frame_at(fold, vec({0, 0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Precondition);
  }
  // f = x_1 + x_1^2 - x_2^2 has Df = 0 at (-1/2, 0), so DF vanishes at (-1/2, 0, 0).
  const auto cone = TableSpec<double>::from_polynomial(
      TableKind::Polynomial, "cone", Polynomial(2, {{1.0, {1, 0}}, {1.0, {2, 0}}, {-1.0, {0, 2}}}),
      Region<double>{Vec::Zero(2), 0.5, {}}, Vec::Zero(2));
  const Fold<double> fold2(cone, AmbientModel::euclidean(3), 0.5);
  try {
    frame_at(fold2, vec({-0.5, 0, 0}), false);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularPoint);
  }
}

TEST(Sectional, ParabolaCounterexampleValues) {
  for (double lambda : {0.5, 0.25, 0.1}) {
    const Fold<double> fold(tables::parabola_complement(), AmbientModel::euclidean(3), lambda);
    const double k = sectional_curvature(fold, Vec(Vec::Zero(3)), vec({1, 0, 0}), vec({0, 0, 1}));
    EXPECT_NEAR(k, -4 / (lambda * lambda), 1e-6 * 4 / (lambda * lambda));
  }
}

TEST(Sectional, UnitSphereIsOne) {
  std::mt19937_64 rng(5);
  const Fold<double> sphere(tables::disk(), AmbientModel::euclidean(3), 1.0);
  for (int s = 0; s < 50; ++s) {
    const Vec q = random_fold_point(sphere, rng);
    const auto fr = frame_at(sphere, q);
    const Vec v = fr.project_tangent(oracle::random_point(rng, 3, 1));
    const Vec w = fr.project_tangent(oracle::random_point(rng, 3, 1));
    EXPECT_NEAR(sectional_curvature(sphere.model(), fr, v, w), 1.0, 1e-10);
  }
}

TEST(Sectional, EuclideanDiskFoldIsEllipsoidCurvature) {
  std::mt19937_64 rng(6);
  for (double lambda : {0.8, 0.3, 0.05}) {
    const Fold<double> fold(tables::disk(), AmbientModel::euclidean(3), lambda);
    for (int s = 0; s < 50; ++s) {
      const Vec q = random_fold_point(fold, rng);
      const auto fr = frame_at(fold, q);
      const double k = sectional_curvature(fold.model(), fr, Vec(fr.tangent_basis.col(0)), Vec(fr.tangent_basis.col(1)));
      const double expect = oracle::ellipsoid_curvature(1, 1, lambda, q);
      EXPECT_NEAR(k, expect, 1e-9 * std::max(1.0, expect));
    }
  }
}

TEST(Sectional, BasisInvarianceProperty) {
  std::mt19937_64 rng(7);
  for (const auto& model : oracle::all_models(3)) {
    const Fold<double> fold(tables::parabola_complement(), model, 0.3);
    for (int s = 0; s < 30; ++s) {
      const Vec q = random_fold_point(fold, rng);
      const auto fr = frame_at(fold, q);
      const Vec v = fr.project_tangent(oracle::random_point(rng, 3, 1));
      const Vec w = fr.project_tangent(oracle::random_point(rng, 3, 1));
      const Mat A = oracle::random_point(rng, 4, 1).reshaped(2, 2) + 2 * Mat::Identity(2, 2);
      const Vec v2 = A(0, 0) * v + A(1, 0) * w, w2 = A(0, 1) * v + A(1, 1) * w;
      const double k = sectional_curvature(model, fr, v, w);
      EXPECT_NEAR(sectional_curvature(model, fr, v2, w2), k, 1e-9 * std::max(1.0, std::abs(k)));
    }
  }
}

TEST(Sectional, Errors) {
  const Fold<double> fold(tables::disk(), AmbientModel::euclidean(3), 0.5);
  const Vec q = vec({0, 0, 0.5});
  try {
    sectional_curvature(fold, q, vec({1, 0, 0}), vec({2, 0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegeneratePlane);
  }
  EXPECT_THROW(sectional_curvature(fold, q, vec({1, 0, 0}), vec({0, 0, 1})), Error);  // normal is not tangent
}

TEST(Sectional, SphericalHalfSpaceClosedForms) {
  // The tangent vectors v_1 = 2 x_{n+1} e_1 + λ^2 e_{n+1}, v_j = e_j and the Hessian entries below are
  // hand-derived; the sectional curvatures then follow from the Gauss equation.
  std::mt19937_64 rng(8);
  for (double lambda : {0.9, 0.5, 0.1, 0.01}) {
    const Fold<double> fold(tables::spherical_half_space(3), AmbientModel::spherical(4), lambda);
    const double l2 = lambda * lambda;
    for (int s = 0; s < 200; ++s) {
      const Vec q = random_fold_point(fold, rng);
      const auto fr = frame_at(fold, q);
      const double x1 = q(0), r2 = q.squaredNorm();
      Vec v1 = Vec::Zero(4);
      v1(0) = 2 * q(3);
      v1(3) = l2;
      const Vec e2 = vec({0, 1, 0, 0}), e3 = vec({0, 0, 1, 0});

      const double h11 = 2 * l2 * l2 - 8 * l2 * l2 * x1 * x1 / (1 + r2) - 2 * l2 * l2 * l2 * x1 / (1 + r2);
      const double hjj = -2 * l2 * x1 / (1 + r2);
      EXPECT_NEAR(v1.dot(fr.hess_F * v1), h11, 1e-12);
      EXPECT_NEAR(e2.dot(fr.hess_F * e2), hjj, 1e-12);
      EXPECT_NEAR(v1.dot(fr.hess_F * e2), 0.0, 1e-12);

      const double sec1j = sectional_curvature(fold.model(), fr, v1, e2);
      EXPECT_NEAR(sec1j - 1, xi(lambda, q), 1e-8);
      EXPECT_GE(xi(lambda, q), -3.0 / 32);

      // Gauss equation with the hand-derived entries, g = 4/(1+r^2)^2 I.
      const double g = 4 / ((1 + r2) * (1 + r2));
      const double grad2 = fr.grad_norm * fr.grad_norm;
      const double sec23 = sectional_curvature(fold.model(), fr, e2, e3);
      EXPECT_NEAR(sec23, 1 + hjj * hjj / (grad2 * g * g), 1e-10);
      EXPECT_GE(sec23, 1 - 1e-12);
    }
  }
}

TEST(Scan, DiskEuclideanCertified) {
  ScanSpec spec;
  spec.grid_per_axis = 21;
  spec.boundary_points = 16;
  const auto r = scan_curvature(tables::disk(), AmbientModel::euclidean(3), {0.5, 0.2, 0.1}, 0.0, spec);
  EXPECT_EQ(r.verdict, Verdict::Certified);
  EXPECT_GE(r.global_min, -1e-8);
  for (const auto& row : r.rows) EXPECT_EQ(row.n_skipped, 0);
}

TEST(Scan, ParabolaViolatedNearBasePoint) {
  ScanSpec spec;
  spec.grid_per_axis = 21;
  spec.boundary_points = 16;
  const auto r = scan_curvature(tables::parabola_complement(), AmbientModel::euclidean(3), {0.5, 0.1}, -20.0, spec);
  EXPECT_EQ(r.verdict, Verdict::Violated);
  EXPECT_EQ(r.argmin_row, 1u);
  EXPECT_EQ(r.rows[0].verdict, Verdict::Certified);
  EXPECT_EQ(r.rows[1].verdict, Verdict::Violated);
  EXPECT_NEAR(r.global_min, -400, 1.0);
  EXPECT_LT(r.rows[1].argmin_point.head(2).norm(), 0.05);
}

TEST(Scan, DiskHyperbolicCertifiedAtMinusOne) {
  ScanSpec spec;
  spec.grid_per_axis = 21;
  spec.boundary_points = 16;
  const auto r = scan_curvature(tables::disk(), AmbientModel::hyperbolic(3), {0.5, 0.2, 0.1}, -1.0, spec);
  EXPECT_EQ(r.verdict, Verdict::Certified);
  EXPECT_GE(r.global_min, -1 - 1e-6);
}

TEST(Scan, WorkerCountDoesNotChangeResult) {
  ScanSpec spec;
  spec.grid_per_axis = 15;
  spec.boundary_points = 8;
  const auto a = scan_curvature(tables::disk(), AmbientModel::hyperbolic(3), {0.3}, -1.0, spec);
  spec.workers = 3;
  const auto b = scan_curvature(tables::disk(), AmbientModel::hyperbolic(3), {0.3}, -1.0, spec);
  EXPECT_EQ(a.global_min, b.global_min);
  EXPECT_EQ(a.rows[0].n_samples, b.rows[0].n_samples);
}

TEST(Scan, RejectsLambdaOutsideOpenInterval) {
  try {
    scan_curvature(tables::disk(), AmbientModel::euclidean(3), {1.0}, 0.0, ScanSpec{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
}

TEST(SufficientConditions, Examples) {
  const auto hyp = check_h_sufficient_conditions(tables::disk(), AmbientModel::hyperbolic(3));
  EXPECT_TRUE(hyp.pass);
  EXPECT_TRUE(hyp.concave);
  EXPECT_NEAR(hyp.min_homogeneity, 2.0, 1e-12);
  const auto par = check_h_sufficient_conditions(tables::parabola_complement(), AmbientModel::euclidean(3));
  EXPECT_FALSE(par.pass);
  EXPECT_NEAR(par.max_hessian_eigenvalue, 2.0, 1e-12);
  EXPECT_TRUE(check_h_sufficient_conditions(tables::half_space(), AmbientModel::euclidean(3)).pass);
  EXPECT_THROW(check_h_sufficient_conditions(tables::spherical_half_space(3), AmbientModel::spherical(4)), Error);
}

TEST(Hausdorff, DiskEuclideanEqualsLambda) {
  const Fold<double> fold(tables::disk(), AmbientModel::euclidean(3), 0.1);
  const auto r = hausdorff_distance(fold, HausdorffSpec{});
  EXPECT_NEAR(r.fold_to_table, 0.1, 1e-3);
  EXPECT_NEAR(r.table_to_fold, 0.1, 1e-3);
  EXPECT_TRUE(r.within_bound);
}

TEST(Hausdorff, WithinBoundForOtherModels) {
  HausdorffSpec spec;
  spec.grid_per_axis = 61;
  spec.slack = 1e-2;
  for (const auto& model : {AmbientModel::hyperbolic(3), AmbientModel::spherical(3)}) {
    const Fold<double> fold(tables::disk(), model, 0.2);
    const auto r = hausdorff_distance(fold, spec);
    EXPECT_TRUE(r.within_bound) << to_string(model.kind);
    EXPECT_GT(r.fold_to_table, 0.0);
  }
}

TEST(Hausdorff, PrunedSearchMatchesBruteForce) {
  HausdorffSpec spec;
  spec.grid_per_axis = 15;
  struct Case {
    TableSpec<double> table;
    AmbientModel model;
  };
  const std::vector<Case> cases{{tables::disk(), AmbientModel::euclidean(3)},
                                {tables::disk(), AmbientModel::hyperbolic(3)},
                                {tables::parabola_complement(), AmbientModel::spherical(3)},
                                {tables::spherical_half_space(3), AmbientModel::spherical(4)}};
  for (const auto& c : cases)
    for (double lambda : {0.6, 0.1}) {
      const Fold<double> fold(c.table, c.model, lambda);
      const auto grid = region_grid(c.table.region(), spec.grid_per_axis, spec.max_points);
      std::vector<Vec> table_pts, fold_pts;
      for (long k = 0; k < grid.size(); ++k) {
        const Vec x = grid.point(k);
        if (!c.table.contains(x)) continue;
        table_pts.push_back(embed_in_H(x));
        fold_pts.push_back(fold.lift(x, 1));
        fold_pts.push_back(fold.lift(x, -1));
      }
      auto one_sided = [&](const std::vector<Vec>& from, const std::vector<Vec>& to) {
        double worst = 0;
        for (const auto& p : from) {
          double best = std::numeric_limits<double>::infinity();
          for (const auto& q : to) best = std::min(best, distance(c.model, p, q));
          worst = std::max(worst, best);
        }
        return worst;
      };
      const auto r = hausdorff_distance(fold, spec);
      EXPECT_DOUBLE_EQ(r.fold_to_table, one_sided(fold_pts, table_pts)) << c.table.name();
      EXPECT_DOUBLE_EQ(r.table_to_fold, one_sided(table_pts, fold_pts)) << c.table.name();
    }
}
