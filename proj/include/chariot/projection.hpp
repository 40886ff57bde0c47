#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "chariot/execution.hpp"
#include "chariot/paths.hpp"
#include "chariot/surface.hpp"
#include "chariot/transport.hpp"

namespace chariot {

/// Planar map of a sphere given in (colatitude, longitude) chart coordinates.
struct FlatMap {
  std::string name;
  std::function<std::array<double, 2>(ChartPoint)> forward;
  double nominal_scale = 1.0;
  /// Colatitudes closer than this to either pole are outside the map.
  double pole_cutoff = 0.0;

  /// Image of p scaled by nominal_scale; throws DomainError outside the map.
  std::array<double, 2> operator()(ChartPoint p) const;
  FlatMap rescaled(double factor) const;
};

/// mercator (pole cutoff 0.2 rad) or equirectangular, for a sphere surface.
FlatMap builtin_projection(const std::string& name, const Surface& s, double nominal_scale = 1.0);

/// Map length of the chart segment p -> p + h (du, dv) over its metric length.
double local_scale(const FlatMap& m, const Surface& s, ChartPoint p, double du, double dv,
                   double h = 1e-6);

struct PairSample {
  ChartPoint first;
  ChartPoint second;
  double true_distance = 0.0;
  double map_distance = 0.0;
  double ratio = 0.0;
};

struct SkippedPair {
  std::size_t index = 0;
  std::string reason;
};

struct DistortionReport {
  std::vector<PairSample> samples;
  std::vector<SkippedPair> skipped;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double spread() const { return max_ratio / min_ratio; }
};

/// Ratios for explicit point pairs (true distance from connect_geodesic).
DistortionReport distortion_for_pairs(const FlatMap& m, const Surface& s,
                                      const std::vector<std::pair<ChartPoint, ChartPoint>>& pairs,
                                      Execution exec = Execution::parallel);

/// Pairs drawn from `seed`: the first point uniformly in longitude and in latitude within
/// +-70 degrees, the second 0.05 to 0.6 radians (times the radius) away in a uniform direction.
DistortionReport distortion_report(const FlatMap& m, const Surface& s, int n_pairs,
                                   std::uint64_t seed, Execution exec = Execution::parallel);

struct ObstructionVerdict {
  double holonomy = 0.0;
  double error_estimate = 0.0;
  double threshold = 0.0;
  bool certified = false;
  std::string explanation;
};

/// A distance-preserving flat map would carry every loop to a plane loop with zero holonomy;
/// a holonomy clearly above the transport error certifies that no such map exists.
ObstructionVerdict holonomy_obstruction(const Surface& s, const RegionBoundary& r,
                                        const TransportOptions& opts = {});

}  // namespace chariot
