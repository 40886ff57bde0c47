#pragma once

#include <optional>
#include <span>
#include <vector>

#include "chariot/errors.hpp"
#include "chariot/paths.hpp"
#include "chariot/surface.hpp"

namespace chariot {

struct GeodesicOptions {
  /// Largest arclength step of the RK4 integrator.
  double step = 1e-2;
  /// Minimum number of integration steps (and path segments) per geodesic.
  std::size_t min_samples = 16;
  /// Newton iterations for connect_geodesic.
  int max_iterations = 60;
  /// Chart-distance residual accepted by connect_geodesic.
  double tolerance = 1e-12;
};

/// Result of integrating the geodesic equation with unit speed.
struct GeodesicShot {
  ChartPoint start;
  TangentVector direction;  // unit metric norm
  double length = 0.0;
  Path result_path;
  std::vector<double> arclength;  // per sample, constant spacing
  TangentVector end_velocity;     // unit metric norm at the last sample
};

/// Thrown when a geodesic leaves the chart; carries what was traversed.
class GeodesicDomainExit : public DomainError {
 public:
  GeodesicDomainExit(const std::string& what, double traversed)
      : DomainError(what), traversed_(traversed) {}
  double traversed_length() const noexcept { return traversed_; }

 private:
  double traversed_;
};

GeodesicShot shoot_geodesic(const Surface& s, ChartPoint start, const TangentVector& dir,
                            double length, const GeodesicOptions& opts = {});

/// Endpoint of the geodesic from p with initial velocity (du, dv) run for unit time.
ChartPoint exponential_map(const Surface& s, ChartPoint p, double du, double dv,
                           const GeodesicOptions& opts = {});

/// Two-point solve by Newton iteration on launch angle and length, starting from the
/// chart straight line (or from `initial_angle`, measured in the orthonormal frame at a).
GeodesicShot connect_geodesic(const Surface& s, ChartPoint a, ChartPoint b,
                              const GeodesicOptions& opts = {},
                              std::optional<double> initial_angle = std::nullopt);

/// Closed loop whose sides are connect_geodesic solutions between consecutive vertices.
/// When `sides` is non-null it receives the individual side solutions.
Loop geodesic_polygon(const Surface& s, std::span<const ChartPoint> vertices,
                      const GeodesicOptions& opts = {}, std::vector<GeodesicShot>* sides = nullptr);

/// Unit tangents (chart components) at every sample, from second-order stencils in arclength.
std::vector<TangentVector> path_tangents(const Surface& s, const Path& p);

/// Geodesic curvature (counterclockwise turning per unit length) at each sample.
/// Endpoints are reported as 0.
std::vector<double> rotation_rates(const Surface& s, const Path& p);

struct RelaxationReport {
  int iterations = 0;
  std::vector<double> length_history;
  std::vector<double> max_rate_history;
  double final_max_rotation_rate = 0.0;
  Path final_path;
  bool converged = false;
};

/// Moves every interior sample sideways by step_gain * (geodesic curvature), i.e. to the left
/// while the statue turns clockwise and vice versa, until the rotation rate falls below `tol`.
/// A non-positive gain selects 0.25 * (shortest metric spacing)^2.
RelaxationReport relax_to_geodesic(const Surface& s, const Path& p, double step_gain = 0.0,
                                   double tol = 1e-6, int max_iterations = 200000);

struct SecondVariation {
  double delta_length_left = 0.0;
  double delta_length_right = 0.0;
};

/// Length change under the fixed-endpoint bump amplitude * sin(mode * pi * s / L) to either side.
SecondVariation second_variation_probe(const Surface& s, const GeodesicShot& g, double amplitude,
                                       int mode = 1);

}  // namespace chariot
