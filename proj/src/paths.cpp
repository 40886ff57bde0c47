#include "chariot/paths.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "chariot/errors.hpp"

namespace chariot {

namespace {

// Reduces an offset to a whole number of periods; returns that count or nullopt.
std::optional<int> whole_periods(double offset, bool periodic, double period) {
  if (offset == 0.0) return 0;
  if (!periodic) return std::nullopt;
  const double k = std::round(offset / period);
  if (std::abs(offset - k * period) > 1e-9 * period) return std::nullopt;
  return static_cast<int>(k);
}

// Offset that maps `from` onto `to` when both name the same surface point.
ChartPoint period_shift(const ChartDomain& d, ChartPoint from, ChartPoint to, const char* what) {
  const ChartPoint diff = to - from;
  const auto ku = whole_periods(diff.u, d.periodic_u, d.u_period());
  const auto kv = whole_periods(diff.v, d.periodic_v, d.v_period());
  if (!ku || !kv) throw InvalidArgument(std::string(what) + ": points do not coincide");
  return {*ku * d.u_period(), *kv * d.v_period()};
}

}  // namespace

Path::Path(std::vector<ChartPoint> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 2) throw InvalidArgument("Path: needs at least two samples");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i].u) || !std::isfinite(samples_[i].v)) {
      throw InvalidArgument("Path: non-finite sample");
    }
    if (i > 0 && samples_[i] == samples_[i - 1]) {
      throw InvalidArgument("Path: consecutive samples must be distinct");
    }
  }
}

double Path::max_segment() const {
  double m = 0.0;
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    m = std::max(m, chart_distance(samples_[i - 1], samples_[i]));
  }
  return m;
}

double Path::chart_length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    total += chart_distance(samples_[i - 1], samples_[i]);
  }
  return total;
}

Path Path::reversed() const {
  std::vector<ChartPoint> r(samples_.rbegin(), samples_.rend());
  return Path(std::move(r));
}

Path Path::refined(double max_step) const {
  if (!(max_step > 0.0)) throw InvalidArgument("Path::refined: max_step must be positive");
  std::vector<ChartPoint> out{samples_.front()};
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    const ChartPoint a = samples_[i - 1], b = samples_[i];
    std::size_t pieces = 1;
    while (chart_distance(a, b) / static_cast<double>(pieces) > max_step) pieces *= 2;
    for (std::size_t k = 1; k < pieces; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(pieces);
      out.push_back(a + t * (b - a));
    }
    out.push_back(b);
  }
  return Path(std::move(out));
}

Path Path::shifted(ChartPoint offset) const {
  std::vector<ChartPoint> out = samples_;
  for (auto& p : out) p = p + offset;
  return Path(std::move(out));
}

double segment_length(const Surface& s, ChartPoint a, ChartPoint b) {
  static constexpr double kNodes[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
  static constexpr double kWeights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const ChartPoint d = b - a;
  double sum = 0.0;
  for (int q = 0; q < 3; ++q) {
    const double t = 0.5 * (kNodes[q] + 1.0);
    sum += kWeights[q] * s.metric_unchecked(a + t * d).norm(d.u, d.v);
  }
  return 0.5 * sum;
}

double path_length(const Surface& s, const Path& p) {
  double total = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) total += segment_length(s, p[i - 1], p[i]);
  return total;
}

std::vector<double> cumulative_length(const Surface& s, const Path& p) {
  std::vector<double> out(p.size(), 0.0);
  for (std::size_t i = 1; i < p.size(); ++i) out[i] = out[i - 1] + segment_length(s, p[i - 1], p[i]);
  return out;
}

Loop::Loop(Path path, const ChartDomain& domain) : path_(std::move(path)), domain_(domain) {
  if (path_.size() < 3) throw InvalidArgument("Loop: needs at least three samples");
  const ChartPoint diff = path_.back() - path_.front();
  const auto ku = whole_periods(diff.u, domain.periodic_u, domain.u_period());
  const auto kv = whole_periods(diff.v, domain.periodic_v, domain.v_period());
  if (!ku || !kv) throw InvalidArgument("Loop: path is not closed");
  u_winding_ = *ku;
  v_winding_ = *kv;
  // Snap the closing sample onto an exact period multiple of the base.
  std::vector<ChartPoint> pts = path_.samples();
  pts.back() = pts.front() + ChartPoint{*ku * domain.u_period(), *kv * domain.v_period()};
  path_ = Path(std::move(pts));
}

Loop Loop::reversed() const { return Loop(path_.reversed(), domain_); }

RegionBoundary::RegionBoundary(Loop loop) : loop_(std::move(loop)) {
  if (loop_.u_winding() != 0 || loop_.v_winding() != 0) {
    throw InvalidArgument("RegionBoundary: loop is not contractible in the chart");
  }
  if (!polygon_is_simple(loop_.path().samples())) {
    throw InvalidArgument("RegionBoundary: loop is not simple");
  }
  orientation_ = chariot::signed_chart_area(loop_.path().samples()) >= 0.0 ? Orientation::positive
                                                                          : Orientation::negative;
}

double RegionBoundary::signed_chart_area() const {
  return chariot::signed_chart_area(loop_.path().samples());
}

Loop compose(const Loop& first, const Loop& second) {
  const ChartPoint shift = period_shift(first.domain(), second.base(), first.path().back(),
                                        "compose: base-point mismatch");
  std::vector<ChartPoint> pts = first.path().samples();
  const auto& tail = second.path().samples();
  for (std::size_t i = 1; i < tail.size(); ++i) pts.push_back(tail[i] + shift);
  return Loop(Path(std::move(pts)), first.domain());
}

Loop add_detour(const Loop& l, std::size_t at_index, const Path& spur) {
  const auto& s = l.path().samples();
  if (at_index >= s.size()) throw InvalidArgument("add_detour: index out of range");
  const ChartPoint shift =
      period_shift(l.domain(), spur.front(), s[at_index], "add_detour: spur start mismatch");
  const Path out_and_back = spur.shifted(shift);
  std::vector<ChartPoint> pts(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(at_index) + 1);
  const auto& sp = out_and_back.samples();
  for (std::size_t k = 1; k < sp.size(); ++k) pts.push_back(sp[k]);
  for (std::size_t k = sp.size() - 1; k-- > 0;) pts.push_back(sp[k]);
  for (std::size_t k = at_index + 1; k < s.size(); ++k) pts.push_back(s[k]);
  return Loop(Path(std::move(pts)), l.domain());
}

Loop bracket(const Loop& l, const Path& approach) {
  const ChartPoint shift =
      period_shift(l.domain(), approach.back(), l.base(), "bracket: approach must end at the base");
  const Path a = approach.shifted(shift);
  std::vector<ChartPoint> pts = a.samples();
  const auto& s = l.path().samples();
  for (std::size_t k = 1; k < s.size(); ++k) pts.push_back(s[k]);
  const ChartPoint w = l.wrap_offset();
  const auto& as = a.samples();
  for (std::size_t k = as.size() - 1; k-- > 0;) pts.push_back(as[k] + w);
  return Loop(Path(std::move(pts)), l.domain());
}

Loop rebase(const Loop& l, std::size_t new_base_index) {
  const auto& s = l.path().samples();
  const std::size_t n = s.size();
  if (new_base_index >= n) throw InvalidArgument("rebase: index out of range");
  if (new_base_index == 0) return l;
  const ChartPoint w = l.wrap_offset();
  std::vector<ChartPoint> pts;
  pts.reserve(n);
  for (std::size_t k = new_base_index; k < n; ++k) pts.push_back(s[k]);
  for (std::size_t k = 1; k <= new_base_index; ++k) pts.push_back(s[k] + w);
  return Loop(Path(std::move(pts)), l.domain());
}

std::pair<RegionBoundary, RegionBoundary> subdivide_region(const RegionBoundary& r,
                                                           const Path& chord) {
  const Loop& loop = r.loop();
  std::vector<ChartPoint> ring(loop.path().samples().begin(), loop.path().samples().end() - 1);
  const double tol = 1e-9 * std::max(1.0, loop.path().chart_length());

  // Index of p on the ring, inserting it into the segment that carries it if needed.
  auto locate = [&](ChartPoint p) -> std::size_t {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      if (chart_distance(ring[i], p) <= tol) {
        ring[i] = p;
        return i;
      }
    }
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const ChartPoint a = ring[i], b = ring[(i + 1) % ring.size()];
      const ChartPoint d = b - a;
      const double len2 = d.u * d.u + d.v * d.v;
      const double t = ((p.u - a.u) * d.u + (p.v - a.v) * d.v) / len2;
      if (t <= 0.0 || t >= 1.0) continue;
      if (chart_distance(a + t * d, p) <= tol) {
        ring.insert(ring.begin() + static_cast<std::ptrdiff_t>(i) + 1, p);
        return i + 1;
      }
    }
    throw InvalidArgument("subdivide_region: chord endpoint is not on the boundary");
  };

  const ChartPoint P = chord.front(), Q = chord.back();
  std::size_t i = locate(P);
  const std::size_t j = locate(Q);
  // Inserting Q before P shifts P by one.
  if (j <= i && ring[i] != P) ++i;
  if (i == j) throw InvalidArgument("subdivide_region: chord endpoints coincide");

  const auto& cs = chord.samples();
  for (std::size_t k = 1; k + 1 < cs.size(); ++k) {
    if (!point_in_polygon(ring, cs[k])) {
      throw InvalidArgument("subdivide_region: chord exits the region");
    }
  }

  const std::size_t m = ring.size();
  std::vector<ChartPoint> first, second;
  for (std::size_t k = i;; k = (k + 1) % m) {
    first.push_back(ring[k]);
    if (k == j) break;
  }
  for (std::size_t k = cs.size() - 1; k-- > 0;) first.push_back(cs[k]);

  second = cs;
  for (std::size_t k = (j + 1) % m;; k = (k + 1) % m) {
    second.push_back(ring[k]);
    if (k == i) break;
  }
  const ChartDomain& d = loop.domain();
  return {RegionBoundary(Loop(Path(std::move(first)), d)),
          RegionBoundary(Loop(Path(std::move(second)), d))};
}

namespace generators {

Path line(ChartPoint from, ChartPoint to, std::size_t segments) {
  if (segments == 0) throw InvalidArgument("line: needs at least one segment");
  std::vector<ChartPoint> pts;
  pts.reserve(segments + 1);
  for (std::size_t k = 0; k <= segments; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(segments);
    pts.push_back(k == segments ? to : from + t * (to - from));
  }
  return Path(std::move(pts));
}

Path line_max_step(ChartPoint from, ChartPoint to, double max_step) {
  if (!(max_step > 0.0)) throw InvalidArgument("line: max_step must be positive");
  const auto segments =
      static_cast<std::size_t>(std::max(1.0, std::ceil(chart_distance(from, to) / max_step)));
  return line(from, to, segments);
}

Loop chart_rectangle(double u0, double u1, double v0, double v1, double max_step,
                     const ChartDomain& domain) {
  if (!(u1 > u0) || !(v1 > v0)) throw InvalidArgument("chart_rectangle: empty rectangle");
  const ChartPoint corners[5] = {{u0, v0}, {u1, v0}, {u1, v1}, {u0, v1}, {u0, v0}};
  std::vector<ChartPoint> pts{corners[0]};
  for (int side = 0; side < 4; ++side) {
    const Path edge = line_max_step(corners[side], corners[side + 1], max_step);
    pts.insert(pts.end(), edge.samples().begin() + 1, edge.samples().end());
  }
  return Loop(Path(std::move(pts)), domain);
}

Path latitude_arc(double u, double v_start, double turns, std::size_t segments) {
  if (segments == 0 || turns == 0.0) throw InvalidArgument("latitude_arc: empty arc");
  std::vector<ChartPoint> pts;
  pts.reserve(segments + 1);
  const double sweep = kTwoPi * turns;
  for (std::size_t k = 0; k <= segments; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(segments);
    pts.push_back({u, v_start + t * sweep});
  }
  return Path(std::move(pts));
}

Loop latitude_circle(double u, double v_start, int turns, std::size_t segments,
                     const ChartDomain& domain) {
  return Loop(latitude_arc(u, v_start, static_cast<double>(turns), segments), domain);
}

Path circular_arc(ChartPoint centre, double radius, double start_angle, double sweep,
                  std::size_t segments) {
  if (!(radius > 0.0) || segments == 0 || sweep == 0.0) {
    throw InvalidArgument("circular_arc: needs positive radius, nonzero sweep");
  }
  std::vector<ChartPoint> pts;
  pts.reserve(segments + 1);
  for (std::size_t k = 0; k <= segments; ++k) {
    const double a = start_angle + sweep * static_cast<double>(k) / static_cast<double>(segments);
    pts.push_back({centre.u + radius * std::cos(a), centre.v + radius * std::sin(a)});
  }
  return Path(std::move(pts));
}

Loop polygon(std::span<const ChartPoint> vertices, std::size_t per_side, const ChartDomain& domain) {
  if (vertices.size() < 3) throw InvalidArgument("polygon: needs at least three vertices");
  std::vector<ChartPoint> pts{vertices[0]};
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    const Path side = line(vertices[k], vertices[(k + 1) % vertices.size()], per_side);
    pts.insert(pts.end(), side.samples().begin() + 1, side.samples().end());
  }
  return Loop(Path(std::move(pts)), domain);
}

}  // namespace generators

}  // namespace chariot
