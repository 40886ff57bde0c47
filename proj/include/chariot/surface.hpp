#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace chariot {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Chart coordinates (u, v).
struct ChartPoint {
  double u = 0.0;
  double v = 0.0;

  friend ChartPoint operator+(ChartPoint a, ChartPoint b) { return {a.u + b.u, a.v + b.v}; }
  friend ChartPoint operator-(ChartPoint a, ChartPoint b) { return {a.u - b.u, a.v - b.v}; }
  friend ChartPoint operator*(double s, ChartPoint a) { return {s * a.u, s * a.v}; }
  friend bool operator==(ChartPoint a, ChartPoint b) = default;
};

inline double chart_distance(ChartPoint a, ChartPoint b) { return std::hypot(a.u - b.u, a.v - b.v); }

/// A tangent vector with components in the chart coordinate basis (d/du, d/dv).
struct TangentVector {
  ChartPoint base;
  double du = 0.0;
  double dv = 0.0;
};

/// First fundamental form at a point.
struct Metric {
  double E = 1.0;
  double F = 0.0;
  double G = 1.0;

  double det() const { return E * G - F * F; }
  double inner(double a_u, double a_v, double b_u, double b_v) const {
    return E * a_u * b_u + F * (a_u * b_v + a_v * b_u) + G * a_v * b_v;
  }
  double norm(double a_u, double a_v) const { return std::sqrt(inner(a_u, a_v, a_u, a_v)); }
  bool positive_definite() const { return E > 0.0 && G > 0.0 && det() > 0.0; }
};

/// Partial derivatives of (E, F, G) with respect to u and v.
struct MetricDerivatives {
  double E_u = 0.0, E_v = 0.0;
  double F_u = 0.0, F_v = 0.0;
  double G_u = 0.0, G_v = 0.0;
};

/// Connection coefficients; gamma[k][i][j] with indices 0 = u, 1 = v.
struct ChristoffelSymbols {
  std::array<std::array<std::array<double, 2>, 2>, 2> gamma{};

  double operator()(int k, int i, int j) const { return gamma[k][i][j]; }

  /// Contraction Gamma^k_ij a^i b^j.
  std::array<double, 2> contract(double a_u, double a_v, double b_u, double b_v) const {
    std::array<double, 2> out{};
    for (int k = 0; k < 2; ++k) {
      out[k] = gamma[k][0][0] * a_u * b_u + gamma[k][0][1] * (a_u * b_v + a_v * b_u) +
               gamma[k][1][1] * a_v * b_v;
    }
    return out;
  }
};

/// Angle of the chart vector (du, dv) in the orthonormal frame built from the chart basis
/// by Gram-Schmidt (first axis along d/du), counterclockwise positive.
inline double frame_angle(const Metric& g, double du, double dv) {
  return std::atan2(dv * std::sqrt(g.det()), g.E * du + g.F * dv);
}

/// Chart components of the unit vector at `angle` in that frame.
inline std::array<double, 2> frame_vector(const Metric& g, double angle) {
  const double se = std::sqrt(g.E), sd = std::sqrt(g.det());
  const double c = std::cos(angle), s = std::sin(angle);
  return {c / se - s * g.F / (se * sd), s * se / sd};
}

/// Counterclockwise quarter turn of (du, dv) with respect to the metric.
inline std::array<double, 2> quarter_turn(const Metric& g, double du, double dv) {
  const double inv = 1.0 / std::sqrt(g.det());
  return {-(g.F * du + g.G * dv) * inv, (g.E * du + g.F * dv) * inv};
}

/// Wraps an angle difference into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, kTwoPi);
  return a <= -kPi ? a + kTwoPi : a;
}

/// Rectangular chart domain with per-axis periodicity.
///
/// `u_margin` shrinks the usable u-range at both ends; sphere-like charts use it
/// to keep clear of the coordinate singularity at the poles. Region-level
/// queries (areas) work on the closed rectangle without the margin.
struct ChartDomain {
  double u_min = 0.0, u_max = 1.0;
  double v_min = 0.0, v_max = 1.0;
  bool periodic_u = false;
  bool periodic_v = false;
  double u_margin = 0.0;

  double u_period() const { return u_max - u_min; }
  double v_period() const { return v_max - v_min; }
  double extent() const { return std::max(u_max - u_min, v_max - v_min); }
};

enum class SurfaceKind { plane, sphere, cylinder, torus, hill, ellipsoid, graph, custom };

/// Height function of a graph surface z = f(u, v) with derivatives up to second order.
struct HeightSample {
  double f = 0.0, f_u = 0.0, f_v = 0.0, f_uu = 0.0, f_uv = 0.0, f_vv = 0.0;
};

/// A parametrized surface: chart domain, metric, optional embedding in 3-space.
///
/// Immutable after construction; every member function is const and safe to
/// call concurrently.
class Surface {
 public:
  using MetricFn = std::function<Metric(ChartPoint)>;
  using MetricDerivativeFn = std::function<MetricDerivatives(ChartPoint)>;
  using EmbeddingFn = std::function<Eigen::Vector3d(ChartPoint)>;

  Surface(std::string name, SurfaceKind kind, ChartDomain domain, MetricFn metric,
          std::optional<MetricDerivativeFn> derivatives, std::optional<EmbeddingFn> embedding,
          std::vector<double> params = {}, double feature_scale = 1.0);

  const std::string& name() const { return name_; }
  SurfaceKind kind() const { return kind_; }
  const ChartDomain& domain() const { return domain_; }
  const std::vector<double>& params() const { return params_; }
  bool has_embedding() const { return embedding_.has_value(); }
  bool has_analytic_derivatives() const { return derivatives_.has_value(); }

  /// Characteristic length of the surface (radius, bump width, ...).
  double feature_scale() const { return feature_scale_; }

  /// True when the chart collapses its u_min edge to a single point (a pole).
  /// Loops winding around the periodic v-axis then enclose that point.
  bool collapses_u_min_edge() const {
    return kind_ == SurfaceKind::sphere || kind_ == SurfaceKind::ellipsoid;
  }

  /// Inside the usable domain (u margin applied, periodic axes unbounded).
  bool contains(ChartPoint p) const;
  /// Inside the closed chart rectangle, ignoring the u margin.
  bool contains_closed(ChartPoint p) const;
  void require_inside(ChartPoint p, std::string_view what) const;

  Metric metric_at(ChartPoint p) const;
  Metric metric_unchecked(ChartPoint p) const { return metric_(p); }
  MetricDerivatives metric_derivatives(ChartPoint p) const;
  ChristoffelSymbols christoffel_at(ChartPoint p) const;
  /// Same as christoffel_at without the domain check; for inner loops that validated already.
  ChristoffelSymbols christoffel_unchecked(ChartPoint p) const;

  Eigen::Vector3d embed(ChartPoint p) const;
  /// Partial derivatives of the embedding (central differences).
  std::pair<Eigen::Vector3d, Eigen::Vector3d> embedding_tangents(ChartPoint p) const;
  /// Unit normal X_u x X_v / |X_u x X_v|.
  Eigen::Vector3d unit_normal(ChartPoint p) const;

  /// Step used for finite-difference metric derivatives.
  double fd_step() const { return 1e-6 * domain_.extent(); }

 private:
  std::string name_;
  SurfaceKind kind_;
  ChartDomain domain_;
  MetricFn metric_;
  std::optional<MetricDerivativeFn> derivatives_;
  std::optional<EmbeddingFn> embedding_;
  std::vector<double> params_;
  double feature_scale_;
};

/// Builds one of the analytic surfaces: plane, sphere(r), cylinder(r),
/// torus(R, r), hill(h, sigma), ellipsoid(a, b, c).
///
/// Charts: sphere and ellipsoid use (colatitude, longitude); cylinder uses
/// (axial, arc length around); torus uses (tube angle, ring angle); plane and
/// hill use Cartesian (x, y) with the hill z = h exp(-(x^2 + y^2) / sigma^2).
Surface builtin_surface(std::string_view name, std::span<const double> params);

/// Graph z = f(u, v) over a rectangle; metric derivatives come from the height's second derivatives.
Surface make_graph_surface(std::string name, ChartDomain domain,
                           std::function<HeightSample(ChartPoint)> height,
                           double feature_scale = 1.0);

/// Surface from a metric alone (optionally with an embedding); metric derivatives
/// are taken by central differences.
Surface make_custom_surface(std::string name, ChartDomain domain, Surface::MetricFn metric,
                            std::optional<Surface::EmbeddingFn> embedding = std::nullopt,
                            double feature_scale = 1.0);

/// Christoffel symbols from metric values and first derivatives.
ChristoffelSymbols christoffel_from_metric(const Metric& g, const MetricDerivatives& d);

/// Area of a simple chart polygon: integral of sqrt(EG - F^2) du dv by adaptive quadrature.
/// The polygon may be given open or closed (last == first); orientation does not matter.
double area_of_region(const Surface& s, std::span<const ChartPoint> polygon,
                      double relative_tolerance = 1e-10);

/// Signed chart area by the shoelace formula (counterclockwise positive).
double signed_chart_area(std::span<const ChartPoint> polygon);

/// True when no two non-adjacent edges of the closed polygon intersect.
bool polygon_is_simple(std::span<const ChartPoint> polygon);

/// Even-odd point-in-polygon test in chart coordinates.
bool point_in_polygon(std::span<const ChartPoint> polygon, ChartPoint p);

}  // namespace chariot
