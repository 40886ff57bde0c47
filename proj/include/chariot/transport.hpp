#pragma once

#include <utility>
#include <vector>

#include "chariot/geodesics.hpp"
#include "chariot/paths.hpp"
#include "chariot/surface.hpp"

namespace chariot {

struct TransportOptions {
  /// Initial metric-length step of the RK4 integrator along each segment.
  double step = 1e-2;
  /// Halve the step until two successive total rotations agree to this.
  double tolerance = 1e-9;
  int max_halvings = 10;
};

struct AngleSample {
  double arclength = 0.0;
  double angle = 0.0;
};

struct TransportResult {
  /// Unwrapped counterclockwise rotation in the metric-orthonormal chart frame.
  double total_rotation = 0.0;
  std::vector<AngleSample> angle_trace;  // one entry per path sample
  TangentVector final_vector;
  /// Difference between the last two step refinements.
  double error_estimate = 0.0;
};

TransportResult parallel_transport(const Surface& s, const Path& p, const TangentVector& v0,
                                   const TransportOptions& opts = {});

struct HolonomyResult {
  double holonomy = 0.0;
  double error_estimate = 0.0;
  /// Loop holonomy modulo 2 pi, in (-pi, pi].
  double wrapped = 0.0;
};

/// Real-valued holonomy of a loop. For charts whose u_min edge is a pole, every turn the
/// loop makes around the periodic v-axis encircles that pole and adds 2 pi to the
/// frame-relative rotation.
HolonomyResult loop_holonomy_detailed(const Surface& s, const Loop& l,
                                      const TransportOptions& opts = {});
double loop_holonomy(const Surface& s, const Loop& l, const TransportOptions& opts = {});

struct ChariotConfig {
  double width_w = 0.1;
  /// Integration step for the perpendicular geodesics that place the wheels.
  double step = 1e-2;
};

struct ChariotResult {
  TransportResult transport;
  std::vector<double> d_left;   // cumulative track length per sample
  std::vector<double> d_right;
  Path left_track;
  Path right_track;
};

/// Two-wheel chariot of width w driven along p. The statue angle is the chariot heading
/// plus (d_l - d_r) / w, both counterclockwise; it starts along the initial heading.
ChariotResult finite_chariot(const Surface& s, const Path& p, const ChariotConfig& cfg);

struct ConvergencePoint {
  double width = 0.0;
  double error = 0.0;
};

/// |finite_chariot - parallel_transport| total rotation for each width.
std::vector<ConvergencePoint> chariot_convergence(const Surface& s, const Path& p,
                                                  const std::vector<double>& widths,
                                                  const TransportOptions& opts = {});

/// Least-squares slope of log(error) against log(width).
double empirical_order(const std::vector<ConvergencePoint>& points);

}  // namespace chariot
