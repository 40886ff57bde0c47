#include <gtest/gtest.h>

#include <vector>

#include "chariot/curvature.hpp"
#include "chariot/errors.hpp"
#include "test_support.hpp"

using namespace chariot;
using namespace chariot::testing;

namespace {

double hill_curvature(ChartPoint p) {
  // K = (f_uu f_vv - f_uv^2) / (1 + f_u^2 + f_v^2)^2 for z = exp(-(u^2 + v^2)).
  const double e = std::exp(-(p.u * p.u + p.v * p.v));
  const double fu = -2 * p.u * e, fv = -2 * p.v * e;
  const double fuu = (-2 + 4 * p.u * p.u) * e, fvv = (-2 + 4 * p.v * p.v) * e, fuv = 4 * p.u * p.v * e;
  const double w = 1 + fu * fu + fv * fv;
  return (fuu * fvv - fuv * fuv) / (w * w);
}

Surface paraboloid() {
  return make_graph_surface("paraboloid", ChartDomain{-1, 1, -1, 1, false, false, 0.0}, [](ChartPoint p) {
    HeightSample h;
    h.f = p.u * p.u + p.v * p.v;
    h.f_u = 2 * p.u;
    h.f_v = 2 * p.v;
    h.f_uu = 2;
    h.f_vv = 2;
    return h;
  });
}

}  // namespace

TEST(CurvatureAt, Examples) {
  EXPECT_NEAR(curvature_at(plane(), {0.3, -2.0}).extrapolated, 0.0, 1e-8);
  EXPECT_NEAR(curvature_at(sphere(2.0), {1.0, 2.0}).extrapolated, 0.25, 1e-4);
  EXPECT_NEAR(curvature_at(cylinder(1.0), {0.5, 1.0}).extrapolated, 0.0, 1e-6);
}

TEST(CurvatureAt, HillAgainstClosedForm) {
  for (ChartPoint p : {ChartPoint{0.3, 0.2}, ChartPoint{-0.8, 0.5}, ChartPoint{0.0, 0.0}}) {
    const double exact = hill_curvature(p);
    EXPECT_NEAR(curvature_at(hill(), p).extrapolated, exact, 1e-4 * std::max(1.0, std::abs(exact)));
  }
}

TEST(CurvatureAt, TorusOuterEquator) {
  // K = cos u / (r (R + r cos u)) = 1/3 at u = 0 for R = 2, r = 1.
  EXPECT_NEAR(curvature_at(torus(), {0.0, 1.0}).extrapolated, 1.0 / 3.0, 1e-5);
  EXPECT_NEAR(curvature_at(torus(), {kPi, 1.0}).extrapolated, -1.0, 1e-4);
}

TEST(CurvatureAt, EstimateStructure) {
  const CurvatureEstimate e = curvature_at(hill(), {0.4, -0.3});
  ASSERT_EQ(e.ratios.size(), 3u);
  for (std::size_t i = 1; i < e.ratios.size(); ++i) EXPECT_LT(e.ratios[i].area, e.ratios[i - 1].area);
  EXPECT_LE(std::abs(e.extrapolated - e.ratios.back().ratio), 10 * e.error_estimate);
  EXPECT_GT(e.error_estimate, 0.0);
}

TEST(CurvatureAt, Errors) {
  const Surface s = sphere();
  EXPECT_THROW(curvature_at(s, {0.01, 0.0}), DomainError);
  const std::vector<double> rising{0.01, 0.02};
  EXPECT_THROW(curvature_at(s, {1.0, 0.0}, rising), InvalidArgument);
  const std::vector<double> single{0.01};
  EXPECT_THROW(curvature_at(s, {1.0, 0.0}, single), InvalidArgument);
  CurvatureOptions coarse;
  coarse.transport_step = 0.01;
  EXPECT_THROW(curvature_at(s, {1.0, 0.0}, default_curvature_scales(s), coarse), DomainError);
  CurvatureOptions flat;
  flat.aspect_u = 0.0;
  EXPECT_THROW(curvature_at(s, {1.0, 0.0}, flat), InvalidArgument);
}

TEST(CurvatureProperty, ScaleIndependence) {
  const Surface s = hill();
  const ChartPoint p{0.5, 0.4};
  const std::vector<double> base{0.08, 0.04, 0.02}, finer{0.04, 0.02, 0.01};
  const double k1 = curvature_at(s, p, base).extrapolated, k2 = curvature_at(s, p, finer).extrapolated;
  EXPECT_NEAR(k1, k2, 1e-3 * std::abs(k2));
}

TEST(CurvatureProperty, AspectIndependence) {
  const Surface s = hill();
  const ChartPoint p{0.5, 0.4};
  const double ref = curvature_at(s, p).extrapolated;
  for (auto [au, av] : {std::pair{2.0, 1.0}, std::pair{1.0, 3.0}}) {
    CurvatureOptions o;
    o.aspect_u = au;
    o.aspect_v = av;
    EXPECT_NEAR(curvature_at(s, p, o).extrapolated, ref, 1e-3 * std::abs(ref));
  }
}

TEST(CurvatureProperty, SphereIsotropy) {
  const Surface s = sphere(1.5);
  const auto pts = random_points(20, 0.3, kPi - 0.3, 0.0, kTwoPi, 17);
  const auto est = curvature_field(s, pts, default_curvature_scales(s));
  for (const auto& e : est) EXPECT_NEAR(e.extrapolated, est.front().extrapolated, 1e-4 / 2.25);
}

TEST(CurvatureProperty, CylinderWrappingMatchesPlane) {
  const auto pts = random_points(5, -3.0, 3.0, 0.5, 5.0, 19);
  for (const ChartPoint& p : pts) {
    EXPECT_NEAR(curvature_at(cylinder(0.7), p).extrapolated, curvature_at(plane(), p).extrapolated, 1e-8);
  }
}

TEST(GaussBonnet, SphereOctant) {
  const Surface s = sphere();
  GeodesicOptions g;
  g.step = 2e-3;
  const RegionBoundary r(geodesic_polygon(s, octant_vertices(), g));
  const GaussBonnetResult gb = gauss_bonnet_check(s, r, 8);
  EXPECT_NEAR(gb.holonomy, kPi / 2, 1e-5);
  EXPECT_NEAR(gb.integral, kPi / 2, 1e-4);
  EXPECT_LT(gb.residual, 1e-4);
}

TEST(GaussBonnet, PlaneIsZero) {
  const RegionBoundary r(generators::chart_rectangle(-1, 1, 0, 2, 0.05));
  const GaussBonnetResult gb = gauss_bonnet_check(plane(), r, 4);
  EXPECT_NEAR(gb.holonomy, 0.0, 1e-8);
  EXPECT_NEAR(gb.integral, 0.0, 1e-8);
}

TEST(GaussBonnet, TorusSmallRectangle) {
  const Surface s = torus();
  const RegionBoundary r(generators::chart_rectangle(-0.1, 0.1, 0.9, 1.1, 0.005, s.domain()));
  const GaussBonnetResult gb = gauss_bonnet_check(s, r, 4);
  EXPECT_LT(gb.residual, 1e-3);
  const double k = quadratic_fit_curvature(s, {0.0, 1.0}).curvature();
  const double area = area_of_region(s, r.loop().path().samples());
  EXPECT_NEAR(gb.integral, k * area, 2e-2 * k * area);
}

TEST(GaussBonnet, ResidualHalvesOnHill) {
  const Surface s = hill();
  const RegionBoundary r(generators::chart_rectangle(-0.5, 1.0, -0.25, 0.75, 0.005));
  const GaussBonnetResult coarse = gauss_bonnet_check(s, r, 4), fine = gauss_bonnet_check(s, r, 8);
  EXPECT_LE(fine.residual, 0.5 * coarse.residual);
  EXPECT_NEAR(fine.holonomy, fine.integral, 1e-3);
  // Reversed orientation flips both sides.
  const RegionBoundary rev(r.loop().reversed());
  const GaussBonnetResult back = gauss_bonnet_check(s, rev, 4);
  EXPECT_NEAR(back.holonomy, -coarse.holonomy, 1e-7);
  EXPECT_NEAR(back.integral, -coarse.integral, 1e-9);
}

TEST(GaussBonnet, Errors) {
  const RegionBoundary r(generators::chart_rectangle(0, 1, 0, 1, 0.1));
  EXPECT_THROW(gauss_bonnet_check(plane(), r, 3), InvalidArgument);
}

TEST(AngleExcess, PlaneTriangle) {
  const std::vector<ChartPoint> v{{0, 0}, {1, 0}, {0, 1}};
  const AngleExcess e = polygon_angle_excess(plane(), v);
  EXPECT_NEAR(e.exterior_angle_sum, kTwoPi, 1e-9);
  EXPECT_NEAR(e.holonomy, 0.0, 1e-12);
  EXPECT_NEAR(e.interior_angles[0], kPi / 2, 1e-9);
  EXPECT_NEAR(e.interior_angles[1], kPi / 4, 1e-9);
}

TEST(AngleExcess, SphereOctantRightAngles) {
  GeodesicOptions g;
  g.step = 2e-3;
  const AngleExcess e = polygon_angle_excess(sphere(), octant_vertices(), g);
  for (double a : e.interior_angles) EXPECT_NEAR(a, kPi / 2, 1e-6);
  EXPECT_NEAR(e.exterior_angle_sum, 1.5 * kPi, 1e-6);
  EXPECT_NEAR(e.exterior_angle_sum, kTwoPi - std::abs(e.holonomy), 1e-5);
}

TEST(AngleExcess, ThinTriangleHasSmallExcess) {
  const Surface s = sphere();
  // Two corners 0.1 apart on the equator, apex 1.2 north: two near-right angles, one tiny.
  const std::vector<ChartPoint> v{{kPi / 2, 0.0}, {kPi / 2, 0.1}, {kPi / 2 - 1.2, 0.05}};
  GeodesicOptions g;
  g.step = 2e-3;
  const AngleExcess e = polygon_angle_excess(s, v, g);
  double interior = 0.0;
  for (double a : e.interior_angles) interior += a;
  const double excess = interior - kPi;
  std::vector<GeodesicShot> sides;
  const Loop l = geodesic_polygon(s, v, g, &sides);
  const double area = area_of_region(s, l.path().samples());
  EXPECT_LT(excess, 0.1);
  EXPECT_NEAR(excess, area, 1e-5);
  EXPECT_NEAR(std::abs(e.holonomy), area, 1e-5);
}

TEST(AngleExcess, Errors) {
  const std::vector<ChartPoint> two{{0, 0}, {1, 0}};
  EXPECT_THROW(polygon_angle_excess(plane(), two), InvalidArgument);
  const std::vector<ChartPoint> bowtie{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  EXPECT_THROW(polygon_angle_excess(plane(), bowtie), InvalidArgument);
}

TEST(QuadraticFit, ParaboloidAtOrigin) {
  const QuadraticFit f = quadratic_fit_curvature(paraboloid(), {0.0, 0.0});
  EXPECT_NEAR(f.a, 1.0, 1e-6);
  EXPECT_NEAR(f.b, 1.0, 1e-6);
  EXPECT_NEAR(f.curvature(), 4.0, 1e-5);
  // The intrinsic route agrees at the same point.
  EXPECT_NEAR(curvature_at(paraboloid(), {0.0, 0.0}).extrapolated, 4.0, 1e-3);
}

TEST(QuadraticFit, SphereAndCylinder) {
  EXPECT_NEAR(quadratic_fit_curvature(sphere(2.0), {1.1, 0.3}, 1e-2).curvature(), 0.25, 1e-5);
  const QuadraticFit c = quadratic_fit_curvature(cylinder(1.0), {0.2, 1.0});
  EXPECT_NEAR(std::min(std::abs(c.a), std::abs(c.b)), 0.0, 1e-7);
  EXPECT_NEAR(std::max(std::abs(c.a), std::abs(c.b)), 0.5, 1e-6);
  EXPECT_NEAR(c.curvature(), 0.0, 1e-6);
  EXPECT_LT(c.residual, 1e-6 * (std::abs(c.a) + std::abs(c.b)));
}

TEST(QuadraticFit, Errors) {
  const Surface bare = make_custom_surface("bare", ChartDomain{-1, 1, -1, 1, false, false, 0.0},
                                           [](ChartPoint) { return Metric{}; });
  EXPECT_THROW(quadratic_fit_curvature(bare, {0, 0}), InvalidArgument);
}

TEST(Egregium, Builtins) {
  const auto sphere_pts = random_points(10, 0.3, kPi - 0.3, 0.0, kTwoPi, 23);
  for (const auto& row : egregium_check(sphere(), sphere_pts)) EXPECT_LT(row.relative_gap, 1e-3);
  for (const auto& row : egregium_check(ellipsoid(1.0, 1.0, 0.5), sphere_pts)) {
    EXPECT_LT(row.relative_gap, 1e-2);
  }
  const auto cyl_pts = random_points(10, -3.0, 3.0, 0.0, kTwoPi, 29);
  for (const auto& row : egregium_check(cylinder(1.0), cyl_pts)) {
    EXPECT_LT(row.relative_gap, 1e-4);
    EXPECT_NEAR(row.intrinsic, 0.0, 1e-6);
  }
}
