#include <gtest/gtest.h>

#include <vector>

#include "chariot/errors.hpp"
#include "chariot/paths.hpp"
#include "test_support.hpp"

using namespace chariot;
using namespace chariot::testing;

namespace {

Loop unit_square(std::size_t per_side = 1) {
  const std::vector<ChartPoint> v{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  return generators::polygon(v, per_side);
}

Loop triangle() {
  const std::vector<ChartPoint> v{{0, 0}, {0.5, -1}, {1, -0.5}};
  return generators::polygon(v, 1);
}

}  // namespace

TEST(Path, Construction) {
  EXPECT_THROW(Path({{0, 0}}), InvalidArgument);
  EXPECT_THROW(Path({{0, 0}, {0, 0}, {1, 0}}), InvalidArgument);
  EXPECT_THROW(Loop(Path({{0, 0}, {1, 0}, {1, 1}})), InvalidArgument);
  const Path p({{0, 0}, {1, 0}, {1, 2}});
  EXPECT_EQ(p.reversed().reversed(), p);
  EXPECT_DOUBLE_EQ(p.chart_length(), 3.0);
  const Path r = p.refined(0.3);
  EXPECT_LE(r.max_segment(), 0.3);
  EXPECT_DOUBLE_EQ(r.chart_length(), 3.0);
}

TEST(Path, LengthsOnSphere) {
  const Surface s = sphere(2.0);
  const Path meridian = generators::line({0.5, 1.0}, {1.5, 1.0}, 7);
  EXPECT_NEAR(path_length(s, meridian), 2.0, 1e-12);
  const auto cum = cumulative_length(s, meridian);
  EXPECT_EQ(cum.front(), 0.0);
  EXPECT_NEAR(cum.back(), 2.0, 1e-12);
}

TEST(Loops, ComposeExamples) {
  const Loop a = unit_square(), b = triangle();
  const Loop ab = compose(a, b), ba = compose(b, a);
  EXPECT_EQ(ab.size(), a.size() + b.size() - 1);
  EXPECT_FALSE(ab.path() == ba.path());
  EXPECT_EQ(ab.path()[1], a.path()[1]);
  EXPECT_EQ(ab.path()[a.size()], b.path()[1]);
  const Loop moved = generators::polygon(std::vector<ChartPoint>{{5, 5}, {6, 5}, {6, 6}}, 1);
  EXPECT_THROW(compose(a, moved), InvalidArgument);
}

TEST(Loops, ComposeIsAssociative) {
  const Loop a = unit_square(3), b = triangle();
  const Loop c = unit_square(2).reversed();
  EXPECT_EQ(compose(compose(a, b), c).path(), compose(a, compose(b, c)).path());
}

TEST(Loops, DetourKeepsEnclosure) {
  const Loop l = unit_square(4);
  const Path spur({{1.0, 0.5}, {1.3, 0.7}, {1.5, 0.4}});
  const Loop d = add_detour(l, 6, spur);
  EXPECT_EQ(d.size(), l.size() + 2 * (spur.size() - 1));
  EXPECT_NEAR(signed_chart_area(d.path().samples()), signed_chart_area(l.path().samples()), 1e-12);
  EXPECT_THROW(add_detour(l, 5, spur), InvalidArgument);
  EXPECT_THROW(add_detour(l, 99, spur), InvalidArgument);
}

TEST(Loops, BracketMovesTheBase) {
  const Loop l = unit_square();
  const Path approach({{-1, -1}, {-0.5, -0.2}, {0, 0}});
  const Loop b = bracket(l, approach);
  EXPECT_EQ(b.base(), (ChartPoint{-1, -1}));
  EXPECT_EQ(b.size(), l.size() + 2 * (approach.size() - 1));
  EXPECT_THROW(bracket(l, Path({{-1, -1}, {0.5, 0.5}})), InvalidArgument);
}

TEST(Loops, Rebase) {
  const Loop l = unit_square();
  EXPECT_EQ(rebase(l, 0).path(), l.path());
  const Loop r = rebase(l, 2);
  EXPECT_EQ(r.base(), (ChartPoint{1, 1}));
  const std::vector<ChartPoint> expected{{1, 1}, {0, 1}, {0, 0}, {1, 0}, {1, 1}};
  EXPECT_EQ(r.path().samples(), expected);
  EXPECT_THROW(rebase(l, 5), InvalidArgument);
}

TEST(Loops, RebaseOnPeriodicAxisKeepsUnwrappedSamples) {
  const ChartDomain d = sphere().domain();
  const Loop l = generators::latitude_circle(1.0, 0.0, 1, 8, d);
  const Loop r = rebase(l, 3);
  EXPECT_EQ(r.v_winding(), 1);
  EXPECT_NEAR(r.path().back().v - r.path().front().v, kTwoPi, 1e-12);
}

TEST(Regions, OrientationAndValidation) {
  const RegionBoundary pos(unit_square());
  EXPECT_EQ(pos.orientation(), Orientation::positive);
  const RegionBoundary neg(unit_square().reversed());
  EXPECT_EQ(neg.orientation(), Orientation::negative);
  const Loop bowtie = generators::polygon(std::vector<ChartPoint>{{0, 0}, {1, 1}, {1, 0}, {0, 1}}, 1);
  EXPECT_THROW(RegionBoundary{bowtie}, InvalidArgument);
  const Loop wrap = generators::latitude_circle(1.0, 0.0, 1, 16, sphere().domain());
  EXPECT_THROW(RegionBoundary{wrap}, InvalidArgument);
}

TEST(Regions, SubdivideSquareAlongMidline) {
  const RegionBoundary r(unit_square(2));
  const auto [r1, r2] = subdivide_region(r, generators::line({0.5, 0}, {0.5, 1}, 4));
  EXPECT_NEAR(std::abs(r1.signed_chart_area()), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(r2.signed_chart_area()), 0.5, 1e-15);
  EXPECT_EQ(r1.orientation(), Orientation::positive);
  EXPECT_EQ(r2.orientation(), Orientation::positive);
  EXPECT_NEAR(area_of_region(plane(), r1.loop().path().samples()) +
                  area_of_region(plane(), r2.loop().path().samples()),
              1.0, 1e-12);
  EXPECT_THROW(subdivide_region(r, Path({{0.5, 0.2}, {0.5, 1}})), InvalidArgument);
  EXPECT_THROW(subdivide_region(r, Path({{0.5, 0}, {1.5, 0.5}, {0.5, 1}})), InvalidArgument);
}

TEST(RegionsProperty, SubdivisionPreservesSignedArea) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> t(0.05, 0.95);
  const RegionBoundary r(unit_square(5));
  for (int trial = 0; trial < 50; ++trial) {
    const ChartPoint a{t(rng), 0.0}, b{1.0, t(rng)};
    const auto [r1, r2] = subdivide_region(r, generators::line(a, b, 5));
    EXPECT_NEAR(r1.signed_chart_area() + r2.signed_chart_area(), r.signed_chart_area(), 1e-12);
  }
}

TEST(Generators, Shapes) {
  const Loop rect = generators::chart_rectangle(0, 2, 0, 1, 0.1);
  EXPECT_LE(rect.path().max_segment(), 0.1 + 1e-15);
  EXPECT_NEAR(signed_chart_area(rect.path().samples()), 2.0, 1e-12);
  const Path arc = generators::circular_arc({0, 0}, 2.0, 0.0, kPi / 2, 10);
  EXPECT_NEAR(arc.back().u, 0.0, 1e-15);
  EXPECT_NEAR(arc.back().v, 2.0, 1e-15);
  EXPECT_THROW(generators::chart_rectangle(1, 0, 0, 1, 0.1), InvalidArgument);
  EXPECT_THROW(generators::line({0, 0}, {1, 1}, 0), InvalidArgument);
}
