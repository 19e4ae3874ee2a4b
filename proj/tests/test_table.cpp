#include "foldlab/table.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace foldlab;
using oracle::Vec;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

// Lower half-plane {x_2 <= 0}, i.e. f = -x_2, with the wall x_2 = 0.
TableSpec<double> lower_half_plane() {
  const Vec p0 = Vec::Zero(2);
  return TableSpec<double>::from_polynomial(TableKind::Polynomial, "lower-half-plane",
                                            Polynomial(2, {{-1.0, {0, 1}}}), Region<double>{p0, 1.0, {}}, p0);
}

const AmbientModel E3 = AmbientModel::euclidean(3);
const AmbientModel H3 = AmbientModel::hyperbolic(3);
const AmbientModel S3 = AmbientModel::spherical(3);
const double r2 = std::sqrt(2.0) / 2;

}  // namespace

TEST(TableSpec, BuiltinInvariants) {
  for (const auto& t : {tables::disk(2), tables::disk(3), tables::half_space(2), tables::parabola_complement(),
                        tables::spherical_half_space(3)}) {
    EXPECT_NEAR(t.value(t.p0()), 0.0, 1e-10) << t.name();
    EXPECT_GT(t.gradient(t.p0()).norm(), 1e-10) << t.name();
    EXPECT_TRUE(t.in_region(t.p0())) << t.name();
    std::mt19937_64 rng(1);
    for (int s = 0; s < 20; ++s) {
      const Vec x = t.region().center + oracle::random_point(rng, t.n(), t.region().radius / 2);
      const auto h = t.hessian(x);
      EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(TableSpec, RejectsBadBasePoint) {
  EXPECT_THROW(TableSpec<double>::from_polynomial(TableKind::Polynomial, "bad", Polynomial(2, {{1.0, {1, 0}}}),
                                                  Region<double>{Vec::Zero(2), 1.0, {}}, v2(0.5, 0)),
               Error);
  try {
    // f = x_1^2 has a critical point on its zero set.
    TableSpec<double>::from_polynomial(TableKind::Polynomial, "critical", Polynomial(2, {{1.0, {2, 0}}}),
                                       Region<double>{Vec::Zero(2), 1.0, {}}, Vec::Zero(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateBoundary);
  }
  EXPECT_THROW(tables::disk().rebased(Region<double>{v2(5, 5), 1.0, {}}, v2(1, 0)), Error);
}

TEST(TableSpec, FiniteDifferenceFallbackMatchesAnalytic) {
  std::mt19937_64 rng(2);
  for (const auto& t : {tables::disk(2), tables::parabola_complement(), tables::spherical_half_space(3)}) {
    const auto fd = TableSpec<double>::from_function(
        "fd", t.n(), [&t](const Vec& x) { return t.value(x); }, t.region(), t.p0());
    for (int s = 0; s < 20; ++s) {
      const Vec x = oracle::random_point(rng, t.n(), 0.8);
      EXPECT_LT((fd.gradient(x) - t.gradient(x)).norm(), 1e-6);
      EXPECT_LT((fd.hessian(x) - t.hessian(x)).norm(), 1e-6);
    }
  }
}

TEST(TableSpec, SphericalRegionConstraint) {
  const auto t = tables::spherical_half_space(3);
  const Vec inside = (Vec(3) << 0.0, 0.2, 0.0).finished();  // 3*0 - 1 - 0.04 = -1.04
  const Vec outside = (Vec(3) << 0.7, 0.0, 0.0).finished(); // 1.47 - 1 > 0
  EXPECT_TRUE(t.in_region(inside));
  EXPECT_FALSE(t.in_region(outside));
}

TEST(BoundaryFrame, Examples) {
  const auto disk = tables::disk();
  EXPECT_LT((boundary_frame(disk, E3, v2(1, 0)).nu - v2(-1, 0)).norm(), 1e-12);
  EXPECT_LT((boundary_frame(tables::half_space(), E3, v2(0, 0)).nu - v2(1, 0)).norm(), 1e-12);
  // Hyperbolic: g = diag(1/2, 1) at (1, 0, 0), so g^{-1} Df = (-4, 0) normalizes to (-sqrt 2, 0).
  const auto frame = boundary_frame(disk, H3, v2(1, 0));
  EXPECT_LT((frame.nu - v2(-std::sqrt(2.0), 0)).norm(), 1e-12);
  EXPECT_NEAR(frame.metric.inner(frame.nu, frame.nu), 1.0, 1e-12);
}

TEST(BoundaryFrame, InvariantsProperty) {
  std::mt19937_64 rng(3);
  for (const auto& model : {E3, H3, S3})
    for (const auto& t : {tables::disk(2), tables::half_space(2), tables::parabola_complement()})
      for (int s = 0; s < 30; ++s) {
        const Vec x0 = random_boundary_point(t, rng);
        const auto f = boundary_frame(t, model, x0);
        EXPECT_NEAR(f.metric.inner(f.nu, f.nu), 1.0, 1e-10);
        for (Eigen::Index i = 0; i < f.tangent_basis.cols(); ++i) {
          EXPECT_NEAR(f.metric.inner(f.nu, f.tangent_basis.col(i)), 0.0, 1e-10);
          EXPECT_NEAR(f.metric.inner(f.tangent_basis.col(i), f.tangent_basis.col(i)), 1.0, 1e-10);
        }
        EXPECT_GT(t.gradient(x0).dot(f.nu), 0.0);
      }
}

TEST(BoundaryFrame, Errors) {
  const auto disk = tables::disk();
  try {
    boundary_frame(disk, E3, v2(0.5, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Precondition);
  }
  EXPECT_THROW(boundary_frame(disk, AmbientModel::euclidean(4), v2(1, 0)), Error);
}

TEST(Polarity, HalfPlaneExamples) {
  const auto t = lower_half_plane();
  const Vec o = Vec::Zero(2);
  EXPECT_TRUE(is_polar(t, E3, o, v2(-1, 0), v2(1, 0)));
  EXPECT_TRUE(is_polar(t, E3, o, v2(-r2, -r2), v2(r2, -r2)));
  EXPECT_FALSE(is_polar(t, E3, o, v2(-1, 0), v2(0, -1)));
  const auto frame = boundary_frame(t, E3, o);
  const auto both = polarity_tests(frame, v2(-1, 0), v2(0, -1));
  EXPECT_EQ(both.generating_set, both.parallel_normal);
}

TEST(Polarity, PolarVectorExamples) {
  const auto t = lower_half_plane();
  const Vec o = Vec::Zero(2);
  EXPECT_LT((polar_vector(t, E3, o, v2(-r2, -r2)) - v2(r2, -r2)).norm(), 1e-12);
  EXPECT_LT((polar_vector(t, E3, o, v2(1, 0)) - v2(-1, 0)).norm(), 1e-12);
  EXPECT_LT((polar_vector(t, E3, o, v2(0, -1)) - v2(0, -1)).norm(), 1e-12);
}

TEST(Polarity, PreconditionErrors) {
  const auto t = lower_half_plane();
  const Vec o = Vec::Zero(2);
  EXPECT_THROW(is_polar(t, E3, o, v2(2, 0), v2(1, 0)), Error);  // not unit
  EXPECT_THROW(is_polar(t, E3, o, v2(0, 1), v2(1, 0)), Error);  // outside the cone
  EXPECT_THROW(polar_vector(t, E3, o, v2(0, 1)), Error);
}

TEST(Polarity, InvolutionUniquenessAndTangentialProperty) {
  std::mt19937_64 rng(4);
  for (const auto& model : {E3, H3, S3})
    for (const auto& t : {tables::disk(2), tables::half_space(2), tables::parabola_complement()})
      for (int s = 0; s < 30; ++s) {
        const Vec x0 = random_boundary_point(t, rng);
        const auto frame = boundary_frame(t, model, x0);
        Vec u = random_unit_vector(frame.metric, rng);
        if (frame.normal_component(u) < 0) u -= 2 * frame.normal_component(u) * frame.nu;
        const Vec v = polar_vector(frame, u);
        EXPECT_LT((polar_vector(frame, v) - u).norm(), 1e-10);
        const auto tests = polarity_tests(frame, u, v);
        EXPECT_TRUE(tests.generating_set);
        EXPECT_TRUE(tests.parallel_normal);
        // Any other unit cone vector is not polar to u.
        Vec other = frame.metric.normalized(Vec(v + 1e-4 * frame.tangent_basis.col(0)));
        if (frame.normal_component(other) >= 0) {
          EXPECT_FALSE(polarity_tests(frame, u, other).generating_set);
        }
        // Tangent vectors are polar exactly to their negatives.
        const Vec tan = frame.tangent_basis.col(0);
        EXPECT_TRUE(polarity_tests(frame, tan, Vec(-tan)).generating_set);
        EXPECT_FALSE(polarity_tests(frame, tan, tan).generating_set);
      }
}

TEST(Reflect, Examples) {
  const auto wall = lower_half_plane();
  const Vec o = Vec::Zero(2);
  // Incoming from below means moving up towards x_2 = 0 inside {x_2 <= 0}.
  EXPECT_LT((reflect(wall, E3, o, v2(r2, r2)) - v2(r2, -r2)).norm(), 1e-12);
  const auto disk = tables::disk();
  EXPECT_LT((reflect(disk, E3, v2(1, 0), v2(0, 1)) - v2(0, 1)).norm(), 1e-12);
  EXPECT_LT((reflect(disk, E3, v2(1, 0), v2(r2, r2)) - v2(-r2, r2)).norm(), 1e-12);
  EXPECT_THROW(reflect(disk, E3, v2(1, 0), v2(-r2, r2)), Error);
}

TEST(Reflect, PreservesNormAndTangentialPartProperty) {
  std::mt19937_64 rng(5);
  for (const auto& t : {tables::disk(2), tables::disk(3), tables::parabola_complement()})
    for (const auto& model : oracle::all_models(t.n() + 1))
      for (int s = 0; s < 30; ++s) {
        const Vec x0 = random_boundary_point(t, rng);
        const auto frame = boundary_frame(t, model, x0);
        Vec w = random_unit_vector(frame.metric, rng);
        if (frame.normal_component(w) > 0) w -= 2 * frame.normal_component(w) * frame.nu;
        const Vec v = reflect(frame, w);
        EXPECT_NEAR(frame.metric.norm(v), 1.0, 1e-12);
        EXPECT_NEAR(frame.normal_component(v), -frame.normal_component(w), 1e-10);
        for (Eigen::Index i = 0; i < frame.tangent_basis.cols(); ++i)
          EXPECT_NEAR(frame.metric.inner(v, frame.tangent_basis.col(i)),
                      frame.metric.inner(w, frame.tangent_basis.col(i)), 1e-10);
        EXPECT_TRUE(polarity_tests(frame, Vec(-w), v).generating_set);
      }
}

TEST(ReflectionIffPolar, Examples) {
  for (const auto& [table, model] : {std::pair{tables::disk(), E3}, std::pair{tables::disk(), H3},
                                     std::pair{tables::half_space(), S3}}) {
    const auto report = reflection_iff_polar_check(table, model, 100, 7);
    EXPECT_EQ(report.passed, 100);
    EXPECT_EQ(report.failed, 0);
    EXPECT_EQ(report.test_disagreements, 0);
  }
}

TEST(RandomBoundaryPoint, LiesOnBoundaryInsideRegion) {
  std::mt19937_64 rng(8);
  const auto t = tables::spherical_half_space(3);
  for (int s = 0; s < 50; ++s) {
    const Vec x = random_boundary_point(t, rng);
    EXPECT_LE(std::abs(t.value(x)), 1e-12);
    EXPECT_TRUE(t.in_region(x));
  }
}
