#pragma once

#include <span>
#include <vector>

#include "chariot/execution.hpp"
#include "chariot/geodesics.hpp"
#include "chariot/paths.hpp"
#include "chariot/surface.hpp"
#include "chariot/transport.hpp"

namespace chariot {

struct ScaleRatio {
  double scale = 0.0;
  double holonomy = 0.0;
  double area = 0.0;
  double ratio = 0.0;
};

struct CurvatureEstimate {
  ChartPoint point;
  std::vector<ScaleRatio> ratios;  // in the order the scales were given (shrinking)
  double extrapolated = 0.0;
  double error_estimate = 0.0;
};

struct CurvatureOptions {
  /// Half-widths of the quadrilateral family along e1 and e2 are scale * aspect_u and
  /// scale * aspect_v.
  double aspect_u = 1.0;
  double aspect_v = 1.0;
  /// Transport step; 0 selects (smallest scale) / 20. Must not exceed (smallest scale) / 10.
  double transport_step = 0.0;
};

/// Default shrinking family: feature_scale * {0.08, 0.04, 0.02}.
std::vector<double> default_curvature_scales(const Surface& s);

/// Gaussian curvature at p as the limit of holonomy / area over geodesic quadrilaterals
/// whose corners are exp_p(+-a e1 +- b e2). Scales must be strictly decreasing.
CurvatureEstimate curvature_at(const Surface& s, ChartPoint p, std::span<const double> scales,
                               const CurvatureOptions& opts = {});
CurvatureEstimate curvature_at(const Surface& s, ChartPoint p, const CurvatureOptions& opts = {});

/// curvature_at at every point; identical results for both execution modes.
std::vector<CurvatureEstimate> curvature_field(const Surface& s, std::span<const ChartPoint> points,
                                               std::span<const double> scales,
                                               const CurvatureOptions& opts = {},
                                               Execution exec = Execution::parallel);

struct GaussBonnetResult {
  double holonomy = 0.0;
  double integral = 0.0;
  double residual = 0.0;
  double holonomy_error = 0.0;
  std::size_t nodes = 0;
};

/// Compares the boundary holonomy with the quadrature of curvature_at * sqrt(det g) over
/// the enclosed chart region. `grid` cells span the region's v-extent (and proportionally
/// its u-extent), with 2-point Gauss nodes per cell on both axes.
GaussBonnetResult gauss_bonnet_check(const Surface& s, const RegionBoundary& r, int grid,
                                     std::span<const double> scales = {},
                                     Execution exec = Execution::parallel);

struct AngleExcess {
  double exterior_angle_sum = 0.0;
  double holonomy = 0.0;
  std::vector<double> exterior_angles;
  std::vector<double> interior_angles;
  /// +1 for a counterclockwise polygon, -1 otherwise.
  double orientation = 1.0;
};

/// Geodesic polygon through `vertices`: signed exterior angles at the corners and the
/// holonomy of the enclosed region.
AngleExcess polygon_angle_excess(const Surface& s, std::span<const ChartPoint> vertices,
                                 const GeodesicOptions& gopts = {},
                                 const TransportOptions& topts = {});

struct QuadraticFit {
  /// Principal coefficients of z = a x^2 + b y^2 after removing the cross term.
  double a = 0.0;
  double b = 0.0;
  /// RMS of what the quadratic part leaves unexplained over the stencil.
  double residual = 0.0;
  double curvature() const { return 4.0 * a * b; }
};

/// Extrinsic curvature from a least-squares fit of the height over the tangent plane on a
/// 5x5 tangent-plane stencil of the given radius. A non-positive radius selects
/// 1e-2 * feature_scale.
QuadraticFit quadratic_fit_curvature(const Surface& s, ChartPoint p, double stencil_radius = 0.0);

struct EgregiumRow {
  ChartPoint point;
  double intrinsic = 0.0;
  double extrinsic = 0.0;
  double relative_gap = 0.0;
  double error_estimate = 0.0;
};

std::vector<EgregiumRow> egregium_check(const Surface& s, std::span<const ChartPoint> points,
                                        Execution exec = Execution::parallel);

}  // namespace chariot
