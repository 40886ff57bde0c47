#include <gtest/gtest.h>

#include <vector>

#include "chariot/curvature.hpp"
#include "chariot/errors.hpp"
#include "chariot/projection.hpp"
#include "test_support.hpp"

using namespace chariot;
using namespace chariot::testing;

// Every parallel kernel must reproduce its serial reference bit for bit.

TEST(ParallelEquality, CurvatureField) {
  const Surface s = hill();
  const auto pts = random_points(24, -1.5, 1.5, -1.5, 1.5, 3);
  const auto scales = default_curvature_scales(s);
  const auto a = curvature_field(s, pts, scales, {}, Execution::serial);
  const auto b = curvature_field(s, pts, scales, {}, Execution::parallel);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].extrapolated, b[i].extrapolated);
    EXPECT_EQ(a[i].error_estimate, b[i].error_estimate);
  }
}

TEST(ParallelEquality, GaussBonnet) {
  const Surface s = hill();
  const RegionBoundary r(generators::chart_rectangle(-0.5, 0.5, -0.3, 0.6, 0.01));
  const auto a = gauss_bonnet_check(s, r, 4, {}, Execution::serial);
  const auto b = gauss_bonnet_check(s, r, 4, {}, Execution::parallel);
  EXPECT_EQ(a.integral, b.integral);
  EXPECT_EQ(a.holonomy, b.holonomy);
  EXPECT_EQ(a.nodes, b.nodes);
}

TEST(ParallelEquality, Egregium) {
  const Surface s = torus();
  const auto pts = random_points(12, 0.0, kTwoPi, 0.0, kTwoPi, 5);
  const auto a = egregium_check(s, pts, Execution::serial);
  const auto b = egregium_check(s, pts, Execution::parallel);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].intrinsic, b[i].intrinsic);
    EXPECT_EQ(a[i].extrinsic, b[i].extrinsic);
  }
}

TEST(ParallelEquality, Distortion) {
  const Surface s = sphere();
  const FlatMap m = builtin_projection("mercator", s);
  const auto a = distortion_report(m, s, 60, 8, Execution::serial);
  const auto b = distortion_report(m, s, 60, 8, Execution::parallel);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(a.samples[i].ratio, b.samples[i].ratio);
  EXPECT_EQ(a.skipped.size(), b.skipped.size());
}

TEST(ParallelErrors, LowestFailingIndexWins) {
  const Surface s = sphere();
  // Two points too close to the pole; the first of them must be the one reported.
  const std::vector<ChartPoint> pts{{1.0, 0.0}, {0.02, 1.0}, {1.2, 0.0}, {0.015, 2.0}};
  for (Execution e : {Execution::serial, Execution::parallel}) {
    try {
      curvature_field(s, pts, default_curvature_scales(s), {}, e);
      FAIL() << "expected a domain error";
    } catch (const DomainError& err) {
      EXPECT_NE(std::string(err.what()).find("0.02"), std::string::npos) << err.what();
    }
  }
}
