#pragma once

#include <span>
#include <utility>
#include <vector>

#include "chariot/surface.hpp"

namespace chariot {

/// Polyline in chart coordinates. At least two samples; consecutive samples distinct.
/// Periodic coordinates are stored unwrapped, so a path never jumps by a period.
class Path {
 public:
  explicit Path(std::vector<ChartPoint> samples);

  const std::vector<ChartPoint>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  const ChartPoint& operator[](std::size_t i) const { return samples_[i]; }
  const ChartPoint& front() const { return samples_.front(); }
  const ChartPoint& back() const { return samples_.back(); }

  double max_segment() const;
  double chart_length() const;

  Path reversed() const;
  /// Midpoint insertion until every segment is at most `max_step` in chart distance.
  Path refined(double max_step) const;
  /// Every sample shifted by `offset` (used to re-anchor unwrapped periodic coordinates).
  Path shifted(ChartPoint offset) const;

  friend bool operator==(const Path&, const Path&) = default;

 private:
  std::vector<ChartPoint> samples_;
};

/// Metric length of a chart segment (3-point Gauss-Legendre along the segment).
double segment_length(const Surface& s, ChartPoint a, ChartPoint b);
/// Metric length of a polyline.
double path_length(const Surface& s, const Path& p);
/// Cumulative metric arclength at each sample (first entry 0).
std::vector<double> cumulative_length(const Surface& s, const Path& p);

/// Closed path: the last sample equals the first up to whole periods of periodic axes.
class Loop {
 public:
  /// `domain` supplies the periods that count as closure on periodic axes.
  explicit Loop(Path path, const ChartDomain& domain = ChartDomain{});

  const Path& path() const { return path_; }
  const ChartPoint& base() const { return path_.front(); }
  std::size_t size() const { return path_.size(); }
  /// last - first; zero for loops that do not wind around a periodic axis.
  ChartPoint wrap_offset() const { return path_.back() - path_.front(); }
  /// Net number of turns around the periodic v-axis (0 if v is not periodic).
  int v_winding() const { return v_winding_; }
  int u_winding() const { return u_winding_; }
  const ChartDomain& domain() const { return domain_; }

  Loop reversed() const;

 private:
  Path path_;
  ChartDomain domain_;
  int u_winding_ = 0;
  int v_winding_ = 0;
};

enum class Orientation { positive, negative };

/// Boundary of a simple region in the chart; positive = counterclockwise.
class RegionBoundary {
 public:
  /// Validates that the loop is contractible (no winding) and simple; orientation is detected.
  explicit RegionBoundary(Loop loop);

  const Loop& loop() const { return loop_; }
  Orientation orientation() const { return orientation_; }
  /// +1 for positive orientation, -1 for negative.
  double sign() const { return orientation_ == Orientation::positive ? 1.0 : -1.0; }
  double signed_chart_area() const;

 private:
  Loop loop_;
  Orientation orientation_;
};

/// `first` then `second`; both must share the base point (modulo periods).
Loop compose(const Loop& first, const Loop& second);

/// Splices an out-and-back excursion along `spur` into the loop at `at_index`.
Loop add_detour(const Loop& l, std::size_t at_index, const Path& spur);

/// Brackets the loop by `approach` and its reverse: the result is based at approach.front().
/// `approach` must end at the loop's base point.
Loop bracket(const Loop& l, const Path& approach);

/// Cyclic rotation so that traversal starts at sample `new_base_index`.
Loop rebase(const Loop& l, std::size_t new_base_index);

/// Splits the region along `chord`, whose endpoints must lie on the boundary.
/// Returns (R1, R2) with the original orientation; both loops are based at chord.front(),
/// R1 follows the boundary from chord.front() to chord.back() and returns along the chord,
/// R2 goes out along the chord and follows the remaining boundary home.
std::pair<RegionBoundary, RegionBoundary> subdivide_region(const RegionBoundary& r,
                                                           const Path& chord);

namespace generators {

/// Straight chart segment with `segments` equal pieces.
Path line(ChartPoint from, ChartPoint to, std::size_t segments);
/// Straight chart segment sampled so that no piece exceeds `max_step`.
Path line_max_step(ChartPoint from, ChartPoint to, double max_step);
/// Counterclockwise chart rectangle starting at (u0, v0).
Loop chart_rectangle(double u0, double u1, double v0, double v1, double max_step,
                     const ChartDomain& domain = ChartDomain{});
/// Constant-u curve from v_start through `turns` full turns (v increasing); a loop when turns is integral.
Path latitude_arc(double u, double v_start, double turns, std::size_t segments);
Loop latitude_circle(double u, double v_start, int turns, std::size_t segments,
                     const ChartDomain& domain);
/// Circular arc in the chart: centre, radius, start angle and signed sweep (radians).
Path circular_arc(ChartPoint centre, double radius, double start_angle, double sweep,
                  std::size_t segments);
/// Closed polyline through the given vertices, each side split into `per_side` pieces.
Loop polygon(std::span<const ChartPoint> vertices, std::size_t per_side,
             const ChartDomain& domain = ChartDomain{});

}  // namespace generators

}  // namespace chariot
