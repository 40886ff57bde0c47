#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "chariot/errors.hpp"
#include "chariot/geodesics.hpp"
#include "chariot/transport.hpp"
#include "test_support.hpp"

using namespace chariot;
using namespace chariot::testing;

namespace {

TangentVector at_angle(const Surface& s, ChartPoint p, double angle) {
  const auto v = frame_vector(s.metric_at(p), angle);
  return {p, v[0], v[1]};
}

double final_angle(const Surface& s, const TransportResult& r) {
  return frame_angle(s.metric_at(r.final_vector.base), r.final_vector.du, r.final_vector.dv);
}

Loop hill_loop(ChartPoint base, double radius, std::size_t n) {
  std::vector<ChartPoint> pts;
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = kTwoPi * static_cast<double>(i % n) / static_cast<double>(n);
    pts.push_back({base.u + radius * (1 - std::cos(t)), base.v + radius * std::sin(t)});
  }
  return Loop(Path(pts));
}

GeodesicOptions fine_geodesics() {
  GeodesicOptions g;
  g.step = 2e-3;
  return g;
}

}  // namespace

TEST(Transport, PlaneIsTrivial) {
  const Surface s = plane();
  const Path p({{0, 0}, {1, 2}, {-1, 3}, {2, 2}});
  const TangentVector v0{{0, 0}, 0.3, -0.7};
  const TransportResult r = parallel_transport(s, p, v0);
  EXPECT_NEAR(r.total_rotation, 0.0, 1e-15);
  EXPECT_NEAR(r.final_vector.du, 0.3, 1e-15);
  EXPECT_NEAR(r.final_vector.dv, -0.7, 1e-15);
  EXPECT_EQ(r.angle_trace.size(), p.size());
}

TEST(Transport, OctantTriangleHolonomy) {
  const Surface s = sphere();
  const auto verts = octant_vertices();
  const Loop l = geodesic_polygon(s, verts, fine_geodesics());
  EXPECT_NEAR(loop_holonomy(s, l), kPi / 2, 1e-5);
  // The vector pointing back along the first side ends up a quarter turn further round.
  const auto dir = connect_geodesic(s, verts[0], verts[1], fine_geodesics()).direction;
  const TangentVector back{verts[0], -dir.du, -dir.dv};
  const TransportResult r = parallel_transport(s, l.path(), back);
  const double start = frame_angle(s.metric_at(verts[0]), back.du, back.dv);
  EXPECT_NEAR(wrap_angle(final_angle(s, r) - start), kPi / 2, 1e-5);
}

TEST(Transport, LatitudeCircleEnclosesCap) {
  const Surface s = sphere();
  const Loop l = generators::latitude_circle(kPi / 3, 0.0, 1, 720, s.domain());
  const std::vector<ChartPoint> cap{{0, 0}, {kPi / 3, 0}, {kPi / 3, kTwoPi}, {0, kTwoPi}};
  EXPECT_NEAR(loop_holonomy(s, l), area_of_region(s, cap), 1e-8);
}

TEST(Transport, EquatorIsTwoPiNotZero) {
  const Surface s = sphere();
  const Loop l = generators::latitude_circle(kPi / 2, 0.0, 1, 400, s.domain());
  const HolonomyResult h = loop_holonomy_detailed(s, l);
  EXPECT_NEAR(h.holonomy, kTwoPi, 1e-9);
  EXPECT_NEAR(h.wrapped, 0.0, 1e-9);
  EXPECT_NEAR(loop_holonomy(s, l.reversed()), -kTwoPi, 1e-9);
}

TEST(Transport, Errors) {
  const Surface s = sphere();
  const Path p({{1.0, 0.0}, {1.2, 0.1}});
  EXPECT_THROW(parallel_transport(s, p, {{1.0, 0.0}, 0.0, 0.0}), InvalidArgument);
  EXPECT_THROW(parallel_transport(s, p, {{1.1, 0.0}, 1.0, 0.0}), InvalidArgument);
  EXPECT_THROW(parallel_transport(s, Path({{1.0, 0.0}, {0.0, 0.0}}), {{1.0, 0.0}, 1.0, 0.0}),
               DomainError);
}

TEST(TransportProperty, NormPreservationAndContinuity) {
  const Surface s = hill();
  const Path p = generators::circular_arc({0.2, 0.1}, 1.1, 0.3, 5.0, 300);
  const TangentVector v0 = at_angle(s, p.front(), 0.7);
  const TransportResult r = parallel_transport(s, p, v0);
  const double n0 = s.metric_at(p.front()).norm(v0.du, v0.dv);
  EXPECT_NEAR(s.metric_at(p.back()).norm(r.final_vector.du, r.final_vector.dv), n0, 1e-6 * n0);
  for (std::size_t i = 1; i < r.angle_trace.size(); ++i) {
    EXPECT_LT(std::abs(r.angle_trace[i].angle - r.angle_trace[i - 1].angle), kPi);
  }
}

TEST(TransportProperty, InitialAngleEquivariance) {
  const Surface s = ellipsoid(1.0, 1.5, 0.5);
  const Path p = generators::line({0.8, 0.2}, {2.0, 1.4}, 60);
  const TransportResult base = parallel_transport(s, p, at_angle(s, p.front(), 0.0));
  for (double alpha : {0.4, 1.9, -2.5}) {
    const TransportResult r = parallel_transport(s, p, at_angle(s, p.front(), alpha));
    EXPECT_NEAR(r.total_rotation, base.total_rotation, 1e-9);
    EXPECT_NEAR(wrap_angle(final_angle(s, r) - final_angle(s, base) - alpha), 0.0, 1e-9);
  }
}

TEST(TransportProperty, HolonomyIndependentOfInitialVector) {
  const Surface s = hill();
  const Loop l = hill_loop({-0.4, 0.0}, 0.5, 200);
  const double h = loop_holonomy(s, l);
  for (double alpha : {0.5, 2.0, -1.0}) {
    const TransportResult r = parallel_transport(s, l.path(), at_angle(s, l.base(), alpha));
    EXPECT_NEAR(r.total_rotation, h, 1e-9);
  }
}

TEST(TransportProperty, ReversalNegates) {
  const Surface s = hill();
  const Loop l = hill_loop({-0.7, 0.2}, 0.6, 300);
  EXPECT_NEAR(loop_holonomy(s, l.reversed()), -loop_holonomy(s, l), 1e-7);
  const Surface sp = sphere();
  const Loop oct = geodesic_polygon(sp, octant_vertices(), fine_geodesics());
  EXPECT_NEAR(loop_holonomy(sp, oct.reversed()), -loop_holonomy(sp, oct), 1e-7);
}

TEST(TransportProperty, HomomorphismUnderComposition) {
  const Surface s = hill();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> r(0.2, 0.8);
  for (int trial = 0; trial < 5; ++trial) {
    const ChartPoint base{-1.0 + 0.3 * trial, -0.5};
    const Loop a = hill_loop(base, r(rng), 150);
    const Loop b = hill_loop(base, r(rng), 170).reversed();
    EXPECT_NEAR(loop_holonomy(s, compose(b, a)), loop_holonomy(s, a) + loop_holonomy(s, b), 1e-9);
  }
}

TEST(TransportProperty, DetourInvariance) {
  const Surface s = hill();
  const Loop l = generators::chart_rectangle(-0.5, 0.8, -0.3, 0.9, 0.02);
  const double h = loop_holonomy(s, l);
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::size_t> idx(0, l.size() - 2);
  std::uniform_real_distribution<double> ang(-kPi, kPi), len(0.05, 0.6);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t i = idx(rng);
    const ChartPoint a = l.path()[i];
    const double t = ang(rng), d = len(rng);
    const Path spur = generators::line(a, {a.u + d * std::cos(t), a.v + d * std::sin(t)}, 12);
    EXPECT_NEAR(loop_holonomy(s, add_detour(l, i, spur)), h, 1e-6);
  }
}

TEST(TransportProperty, BaseShiftByBracket) {
  const Surface s = hill();
  const Loop l = hill_loop({0.1, -0.2}, 0.4, 200);
  const Path approach = generators::line({-1.2, -1.4}, {0.1, -0.2}, 40);
  EXPECT_NEAR(loop_holonomy(s, bracket(l, approach)), loop_holonomy(s, l), 1e-6);
}

TEST(TransportProperty, RebaseInvariance) {
  const Surface s = hill();
  const Loop l = hill_loop({-0.3, 0.4}, 0.5, 240);
  const double h = loop_holonomy(s, l);
  for (std::size_t k : {1u, 37u, 120u, 239u}) EXPECT_NEAR(loop_holonomy(s, rebase(l, k)), h, 1e-9);
}

TEST(TransportProperty, RegionAdditivity) {
  const Surface s = hill();
  const RegionBoundary r(generators::chart_rectangle(-0.6, 0.7, -0.4, 0.8, 0.02));
  const double h = loop_holonomy(s, r.loop());
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> t(0.1, 0.9);
  for (int trial = 0; trial < 10; ++trial) {
    const ChartPoint a{-0.6 + 1.3 * t(rng), -0.4}, b{-0.6 + 1.3 * t(rng), 0.8};
    const auto [r1, r2] = subdivide_region(r, generators::line(a, b, 60));
    EXPECT_NEAR(loop_holonomy(s, r1.loop()) + loop_holonomy(s, r2.loop()), h, 1e-6);
  }
}

TEST(TransportProperty, CylinderWrappingMatchesPlane) {
  const Surface p = plane(), c = cylinder(0.8);
  const Loop l = generators::chart_rectangle(0.5, 2.0, 0.5, 3.5, 0.05);
  EXPECT_NEAR(loop_holonomy(p, l), 0.0, 1e-7);
  EXPECT_NEAR(loop_holonomy(c, l), loop_holonomy(p, l), 1e-7);
}

TEST(TransportProperty, TorusRibbonLoopIsComputed) {
  const Surface s = torus(2.0, 1.0);
  // Around the tube: u winds once; no region law applies, the value is only finite.
  const Path p = generators::line({0.0, 1.0}, {kTwoPi, 1.0}, 200);
  const Loop l(p, s.domain());
  EXPECT_EQ(l.u_winding(), 1);
  EXPECT_TRUE(std::isfinite(loop_holonomy(s, l)));
  EXPECT_THROW(RegionBoundary{l}, InvalidArgument);
}

TEST(Chariot, WheelDifferenceOnPlaneArc) {
  const Surface s = plane();
  // Quarter turn to the right on a circle of radius 2: the left wheel runs outside.
  const Path arc = generators::circular_arc({0, 0}, 2.0, kPi / 2, -kPi / 2, 2000);
  ChariotConfig cfg;
  cfg.width_w = 0.1;
  const ChariotResult r = finite_chariot(s, arc, cfg);
  EXPECT_NEAR(r.d_left.back() - r.d_right.back(), 0.05 * kPi, 1e-6);
  EXPECT_NEAR(r.transport.total_rotation, 0.0, 1e-6);
}

TEST(Chariot, PlaneStatueCancelsHeading) {
  const Surface s = plane();
  const Path p = generators::circular_arc({1, 1}, 1.5, 0.2, 2.0, 800);
  ChariotConfig cfg;
  const ChariotResult r = finite_chariot(s, p, cfg);
  for (std::size_t i = 0; i < p.size(); i += 100) {
    EXPECT_NEAR(r.transport.angle_trace[i].angle, r.transport.angle_trace[0].angle, 1e-6);
  }
}

TEST(Chariot, HillPassingTurnsAwayFromPeak) {
  const Surface s = hill();
  const Path p = generators::line({-3.0, 0.5}, {3.0, 0.5}, 1200);
  ChariotConfig cfg;
  const ChariotResult r = finite_chariot(s, p, cfg);
  const TransportResult t = parallel_transport(s, p, path_tangents(s, p).front());
  // Peak on the right of an eastward drive: the statue turns clockwise.
  EXPECT_LT(t.total_rotation, -0.1);
  EXPECT_LT(r.transport.total_rotation, -0.1);
  EXPECT_NEAR(r.transport.total_rotation, t.total_rotation, 5e-3);
  const ChariotResult mirrored = finite_chariot(s, p.reversed(), cfg);
  EXPECT_GT(mirrored.transport.total_rotation, 0.1);
}

TEST(Chariot, Errors) {
  const Surface s = plane();
  const Path p = generators::circular_arc({0, 0}, 0.05, 0.0, 2.0, 100);
  ChariotConfig cfg;
  cfg.width_w = 0.3;
  EXPECT_THROW(finite_chariot(s, p, cfg), InvalidArgument);
  cfg.width_w = -1;
  EXPECT_THROW(finite_chariot(s, p, cfg), InvalidArgument);
  cfg.width_w = 0.1;
  EXPECT_THROW(finite_chariot(s, generators::line({9.99, 0}, {9.99, 1}, 10), cfg), DomainError);
}

TEST(ChariotConvergence, PlaneErrorsVanish) {
  const Surface s = plane();
  const Path p = generators::circular_arc({0, 0}, 2.0, 0.0, 1.0, 500);
  for (const auto& pt : chariot_convergence(s, p, {0.2, 0.1, 0.05})) EXPECT_NEAR(pt.error, 0.0, 1e-6);
}

TEST(ChariotConvergence, SphereLatitudeArcIsSecondOrder) {
  const Surface s = sphere();
  const Path p = generators::latitude_arc(kPi / 3, 0.0, 0.25, 2000);
  const auto pts = chariot_convergence(s, p, {0.2, 0.1, 0.05, 0.025});
  for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_LT(pts[i].error, pts[i - 1].error);
  EXPECT_GE(empirical_order(pts), 1.5);
}

TEST(ChariotConvergence, HillErrorsHalveAtLeast) {
  const Surface s = hill();
  const Path p = generators::line({-3.0, 0.5}, {3.0, 0.5}, 1200);
  const auto pts = chariot_convergence(s, p, {0.2, 0.1, 0.05, 0.025});
  for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_GE(pts[i - 1].error / pts[i].error, 2.0);
  EXPECT_GE(empirical_order(pts), 1.5);
}
