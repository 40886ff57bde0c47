#include "chariot/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include <Eigen/Dense>

#include "chariot/errors.hpp"
#include "parallel.hpp"

namespace chariot {

namespace {

void check_scales(std::span<const double> scales) {
  if (scales.size() < 2) throw InvalidArgument("curvature_at: needs at least two scales");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0)) throw InvalidArgument("curvature_at: scales must be positive");
    if (i > 0 && !(scales[i] < scales[i - 1])) {
      throw InvalidArgument("curvature_at: scales must be strictly decreasing");
    }
  }
}

ScaleRatio quadrilateral_ratio(const Surface& s, ChartPoint p, double scale,
                               const CurvatureOptions& opts, const TransportOptions& topts) {
  const Metric g = s.metric_at(p);
  const auto e1 = frame_vector(g, 0.0);
  const auto e2 = frame_vector(g, 0.5 * kPi);
  const double a = scale * opts.aspect_u, b = scale * opts.aspect_v;
  GeodesicOptions gopts;
  gopts.step = std::min(a, b) / 8.0;

  std::vector<ChartPoint> corners;
  std::optional<RegionBoundary> built;
  try {
    for (const auto& [su, sv] : {std::pair{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}}) {
      corners.push_back(exponential_map(s, p, su * a * e1[0] + sv * b * e2[0],
                                        su * a * e1[1] + sv * b * e2[1], gopts));
    }
    built.emplace(geodesic_polygon(s, corners, gopts));
  } catch (const Error& e) {
    // The arguments were validated already: a side that cannot be solved, or a quadrilateral
    // that wraps a pole, means it does not fit in the chart at this scale.
    std::ostringstream os;
    os << "curvature_at: quadrilateral of scale " << scale << " around (" << p.u << ", " << p.v
       << ") does not fit in the chart (" << e.what() << ")";
    throw DomainError(os.str());
  }
  const RegionBoundary& region = *built;
  const Loop& quad = region.loop();
  const double area = area_of_region(s, quad.path().samples());
  const double holonomy = loop_holonomy(s, quad, topts);
  return {scale, holonomy, area, holonomy / (region.sign() * area)};
}

}  // namespace

std::vector<double> default_curvature_scales(const Surface& s) {
  const double f = s.feature_scale();
  return {0.08 * f, 0.04 * f, 0.02 * f};
}

CurvatureEstimate curvature_at(const Surface& s, ChartPoint p, std::span<const double> scales,
                               const CurvatureOptions& opts) {
  check_scales(scales);
  if (!(opts.aspect_u > 0.0) || !(opts.aspect_v > 0.0)) {
    throw InvalidArgument("curvature_at: aspect factors must be positive");
  }
  s.require_inside(p, "curvature_at");
  const double smallest = scales.back() * std::min(opts.aspect_u, opts.aspect_v);
  TransportOptions topts;
  topts.step = opts.transport_step > 0.0 ? opts.transport_step : smallest / 20.0;
  if (topts.step > smallest / 10.0) {
    std::ostringstream os;
    os << "curvature_at: smallest scale " << smallest << " is below the noise floor of "
       << "transport step " << topts.step;
    throw DomainError(os.str());
  }

  CurvatureEstimate est;
  est.point = p;
  for (double scale : scales) est.ratios.push_back(quadrilateral_ratio(s, p, scale, opts, topts));

  // Richardson tableau with even-order error: first level removes scale^2, second scale^4.
  const std::size_t n = est.ratios.size();
  auto level1 = [&](std::size_t i) {
    const double q = est.ratios[i].scale / est.ratios[i + 1].scale;
    const double q2 = q * q;
    return (q2 * est.ratios[i + 1].ratio - est.ratios[i].ratio) / (q2 - 1.0);
  };
  if (n == 2) {
    est.extrapolated = level1(0);
    est.error_estimate = std::abs(est.extrapolated - est.ratios[1].ratio);
    return est;
  }
  const double t_prev = level1(n - 3), t_last = level1(n - 2);
  const double q = est.ratios[n - 2].scale / est.ratios[n - 1].scale;
  const double q4 = q * q * q * q;
  est.extrapolated = (q4 * t_last - t_prev) / (q4 - 1.0);
  // Larger of the two corrections applied at the finest scale.
  est.error_estimate =
      std::max(std::abs(est.extrapolated - t_last), std::abs(t_last - est.ratios[n - 1].ratio));
  return est;
}

CurvatureEstimate curvature_at(const Surface& s, ChartPoint p, const CurvatureOptions& opts) {
  const std::vector<double> scales = default_curvature_scales(s);
  return curvature_at(s, p, scales, opts);
}

std::vector<CurvatureEstimate> curvature_field(const Surface& s, std::span<const ChartPoint> points,
                                               std::span<const double> scales,
                                               const CurvatureOptions& opts, Execution exec) {
  std::vector<CurvatureEstimate> out(points.size());
  detail::for_each_index(points.size(), exec,
                         [&](std::size_t i) { out[i] = curvature_at(s, points[i], scales, opts); });
  return out;
}

GaussBonnetResult gauss_bonnet_check(const Surface& s, const RegionBoundary& r, int grid,
                                     std::span<const double> scales, Execution exec) {
  if (grid < 4) throw InvalidArgument("gauss_bonnet_check: grid must be at least 4");
  std::vector<double> default_scales;
  if (scales.empty()) {
    default_scales = default_curvature_scales(s);
    scales = default_scales;
  }

  std::vector<ChartPoint> poly = r.loop().path().samples();
  poly.pop_back();
  double u_lo = poly[0].u, u_hi = poly[0].u, v_lo = poly[0].v, v_hi = poly[0].v;
  for (const ChartPoint& q : poly) {
    u_lo = std::min(u_lo, q.u);
    u_hi = std::max(u_hi, q.u);
    v_lo = std::min(v_lo, q.v);
    v_hi = std::max(v_hi, q.v);
  }
  const double u_extent = u_hi - u_lo;
  const double gauss = 0.5 / std::sqrt(3.0);

  std::vector<ChartPoint> nodes;
  std::vector<double> weights;
  const double hv = (v_hi - v_lo) / grid;
  for (int j = 0; j < grid; ++j) {
    for (double gv : {0.5 - gauss, 0.5 + gauss}) {
      const double v = v_lo + (j + gv) * hv;
      std::vector<double> crossings;
      for (std::size_t k = 0; k < poly.size(); ++k) {
        const ChartPoint a = poly[k], b = poly[(k + 1) % poly.size()];
        if ((a.v <= v) != (b.v <= v)) {
          crossings.push_back(a.u + (v - a.v) / (b.v - a.v) * (b.u - a.u));
        }
      }
      std::sort(crossings.begin(), crossings.end());
      for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
        const double u0 = crossings[k], u1 = crossings[k + 1];
        const int cells = std::max(1, static_cast<int>(std::ceil(grid * (u1 - u0) / u_extent)));
        const double hu = (u1 - u0) / cells;
        for (int i = 0; i < cells; ++i) {
          for (double gu : {0.5 - gauss, 0.5 + gauss}) {
            const ChartPoint q{u0 + (i + gu) * hu, v};
            nodes.push_back(q);
            weights.push_back(0.25 * hu * hv * std::sqrt(s.metric_unchecked(q).det()));
          }
        }
      }
    }
  }

  const HolonomyResult h = loop_holonomy_detailed(s, r.loop());
  const std::vector<CurvatureEstimate> k = curvature_field(s, nodes, scales, {}, exec);
  double integral = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) integral += weights[i] * k[i].extrapolated;

  GaussBonnetResult out;
  out.holonomy = h.holonomy;
  out.holonomy_error = h.error_estimate;
  out.integral = r.sign() * integral;
  out.residual = std::abs(out.holonomy - out.integral);
  out.nodes = nodes.size();
  return out;
}

AngleExcess polygon_angle_excess(const Surface& s, std::span<const ChartPoint> vertices,
                                 const GeodesicOptions& gopts, const TransportOptions& topts) {
  std::vector<GeodesicShot> sides;
  const Loop loop = geodesic_polygon(s, vertices, gopts, &sides);
  const RegionBoundary region(loop);

  AngleExcess out;
  out.orientation = region.sign();
  const std::size_t n = sides.size();
  for (std::size_t k = 0; k < n; ++k) {
    const TangentVector& in = sides[(k + n - 1) % n].end_velocity;
    const TangentVector& outgoing = sides[k].direction;
    const Metric g = s.metric_unchecked(vertices[k]);
    const double turn =
        wrap_angle(frame_angle(g, outgoing.du, outgoing.dv) - frame_angle(g, in.du, in.dv));
    out.exterior_angles.push_back(turn);
    out.interior_angles.push_back(kPi - out.orientation * turn);
    out.exterior_angle_sum += turn;
  }
  out.holonomy = loop_holonomy(s, loop, topts);
  return out;
}

QuadraticFit quadratic_fit_curvature(const Surface& s, ChartPoint p, double stencil_radius) {
  if (!s.has_embedding()) throw InvalidArgument("quadratic_fit_curvature: surface has no embedding");
  s.require_inside(p, "quadratic_fit_curvature");
  const double r = stencil_radius > 0.0 ? stencil_radius : 1e-2 * s.feature_scale();

  const Eigen::Vector3d origin = s.embed(p);
  const Eigen::Vector3d normal = s.unit_normal(p);
  const Eigen::Vector3d t1 = s.embedding_tangents(p).first.normalized();
  const Eigen::Vector3d t2 = normal.cross(t1);

  // Height over the tangent plane in scaled coordinates (x, y) / r; the polynomial carries
  // cubic and quartic terms so they do not leak into the quadratic coefficients.
  constexpr int kTerms = 14;
  Eigen::MatrixXd A(25, kTerms);
  Eigen::VectorXd z(25);
  std::vector<std::pair<double, double>> xy;
  int row = 0;
  for (int i = -2; i <= 2; ++i) {
    for (int j = -2; j <= 2; ++j) {
      const double x = 0.5 * i * r, y = 0.5 * j * r;
      ChartPoint q = p;
      for (int it = 0; it < 50; ++it) {
        const Eigen::Vector3d d = s.embed(q) - origin;
        const double rx = x - t1.dot(d), ry = y - t2.dot(d);
        if (std::hypot(rx, ry) <= 1e-15 * r) break;
        const auto [xu, xv] = s.embedding_tangents(q);
        Eigen::Matrix2d J;
        J << t1.dot(xu), t1.dot(xv), t2.dot(xu), t2.dot(xv);
        const Eigen::Vector2d step = J.partialPivLu().solve(Eigen::Vector2d(rx, ry));
        q = q + ChartPoint{step[0], step[1]};
      }
      s.require_inside(q, "quadratic_fit_curvature stencil");
      const double X = x / r, Y = y / r;
      A.row(row) << X, Y, X * X, X * Y, Y * Y, X * X * X, X * X * Y, X * Y * Y, Y * Y * Y,
          X * X * X * X, X * X * X * Y, X * X * Y * Y, X * Y * Y * Y, Y * Y * Y * Y;
      z[row] = normal.dot(s.embed(q) - origin);
      xy.emplace_back(x, y);
      ++row;
    }
  }
  const auto qr = A.colPivHouseholderQr();
  if (qr.rank() < kTerms) throw DomainError("quadratic_fit_curvature: rank-deficient fit");
  const Eigen::VectorXd c = qr.solve(z);
  const double qa = c[2] / (r * r), qc = c[3] / (r * r), qb = c[4] / (r * r);

  // Rotating about the normal diagonalizes [[a, c/2], [c/2, b]].
  const double mean = 0.5 * (qa + qb);
  const double radius = std::hypot(0.5 * (qa - qb), 0.5 * qc);
  QuadraticFit fit;
  fit.a = mean + radius;
  fit.b = mean - radius;
  double ss = 0.0;
  for (int k = 0; k < 25; ++k) {
    const auto [x, y] = xy[static_cast<std::size_t>(k)];
    const double e = z[k] - (qa * x * x + qc * x * y + qb * y * y);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / 25.0);
  return fit;
}

std::vector<EgregiumRow> egregium_check(const Surface& s, std::span<const ChartPoint> points,
                                        Execution exec) {
  const std::vector<double> scales = default_curvature_scales(s);
  std::vector<EgregiumRow> out(points.size());
  detail::for_each_index(points.size(), exec, [&](std::size_t i) {
    const CurvatureEstimate k = curvature_at(s, points[i], scales);
    const double extrinsic = quadratic_fit_curvature(s, points[i]).curvature();
    out[i] = EgregiumRow{points[i], k.extrapolated, extrinsic,
                         std::abs(k.extrapolated - extrinsic) / std::max(1.0, std::abs(extrinsic)),
                         k.error_estimate};
  });
  return out;
}

}  // namespace chariot
