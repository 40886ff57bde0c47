// Chart-polygon geometry: signed area, simplicity, containment and the
// metric area integral.

#include <algorithm>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "chariot/errors.hpp"
#include "chariot/surface.hpp"

namespace chariot {

namespace {

std::vector<ChartPoint> open_polygon(std::span<const ChartPoint> polygon) {
  std::vector<ChartPoint> pts(polygon.begin(), polygon.end());
  if (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
  return pts;
}

double orient(ChartPoint a, ChartPoint b, ChartPoint c) {
  return (b.u - a.u) * (c.v - a.v) - (b.v - a.v) * (c.u - a.u);
}

bool on_segment(ChartPoint a, ChartPoint b, ChartPoint p) {
  return std::min(a.u, b.u) <= p.u && p.u <= std::max(a.u, b.u) && std::min(a.v, b.v) <= p.v &&
         p.v <= std::max(a.v, b.v);
}

bool segments_intersect(ChartPoint a, ChartPoint b, ChartPoint c, ChartPoint d) {
  const double o1 = orient(a, b, c), o2 = orient(a, b, d);
  const double o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) {
    return true;
  }
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace

double signed_chart_area(std::span<const ChartPoint> polygon) {
  const auto pts = open_polygon(polygon);
  const std::size_t n = pts.size();
  if (n < 3) return 0.0;
  // Shoelace about the first vertex to limit cancellation.
  const ChartPoint o = pts[0];
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const ChartPoint a = pts[i] - o, b = pts[(i + 1) % n] - o;
    twice += a.u * b.v - a.v * b.u;
  }
  return 0.5 * twice;
}

bool polygon_is_simple(std::span<const ChartPoint> polygon) {
  const auto pts = open_polygon(polygon);
  const std::size_t n = pts.size();
  if (n < 3) return false;
  struct Edge {
    std::size_t index;
    double lo, hi;
  };
  std::vector<Edge> edges(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ChartPoint a = pts[i], b = pts[(i + 1) % n];
    if (a == b) return false;
    edges[i] = {i, std::min(a.u, b.u), std::max(a.u, b.u)};
  }
  // Sweep in u: only edges whose u-extents overlap can intersect.
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.lo < y.lo; });
  for (std::size_t p = 0; p < n; ++p) {
    const Edge& e = edges[p];
    for (std::size_t q = p + 1; q < n && edges[q].lo <= e.hi; ++q) {
      const std::size_t i = e.index, j = edges[q].index;
      const bool adjacent = (i + 1) % n == j || (j + 1) % n == i;
      const ChartPoint a = pts[i], b = pts[(i + 1) % n];
      const ChartPoint c = pts[j], d = pts[(j + 1) % n];
      if (adjacent) {
        // Adjacent edges share exactly one vertex; reject folding back onto each other.
        const ChartPoint shared = (i + 1) % n == j ? b : a;
        const ChartPoint other_i = shared == a ? b : a;
        const ChartPoint other_j = shared == c ? d : c;
        if (orient(shared, other_i, other_j) == 0.0) {
          const double dot = (other_i.u - shared.u) * (other_j.u - shared.u) +
                             (other_i.v - shared.v) * (other_j.v - shared.v);
          if (dot > 0.0 && n > 3) return false;
        }
        continue;
      }
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

bool point_in_polygon(std::span<const ChartPoint> polygon, ChartPoint p) {
  const auto pts = open_polygon(polygon);
  const std::size_t n = pts.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const ChartPoint a = pts[i], b = pts[j];
    if ((a.v > p.v) != (b.v > p.v)) {
      const double u_cross = a.u + (p.v - a.v) * (b.u - a.u) / (b.v - a.v);
      if (p.u < u_cross) inside = !inside;
    }
  }
  return inside;
}

double area_of_region(const Surface& s, std::span<const ChartPoint> polygon,
                      double relative_tolerance) {
  const auto pts = open_polygon(polygon);
  const std::size_t n = pts.size();
  if (n < 3) throw InvalidArgument("area_of_region: polygon needs at least 3 vertices");
  for (const ChartPoint& p : pts) {
    if (!s.contains_closed(p)) throw DomainError("area_of_region: region exits the chart domain");
  }
  if (!polygon_is_simple(pts)) throw InvalidArgument("area_of_region: self-intersecting boundary");

  std::vector<double> levels;
  levels.reserve(n);
  for (const ChartPoint& p : pts) levels.push_back(p.v);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  // Integrate over [-1, 1] after an explicit affine map: the library's recursion compares
  // its unscaled error estimate against a width-scaled tolerance, which on narrow slabs
  // would always subdivide to full depth.
  auto integrate = [relative_tolerance](auto f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        [&](double t) { return half * f(mid + half * t); }, -1.0, 1.0, 8, relative_tolerance);
  };
  auto density = [&s](double u, double v) {
    const double det = s.metric_unchecked({u, v}).det();
    return det > 0.0 ? std::sqrt(det) : 0.0;
  };

  // Between consecutive vertex levels every crossing edge is a straight line
  // u(v), so each slab splits into trapezoids with smooth integrands.
  struct Crossing {
    double u_mid;
    ChartPoint a, b;
  };
  double total = 0.0;
  std::vector<Crossing> crossings;
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    const double v0 = levels[k], v1 = levels[k + 1];
    const double vm = 0.5 * (v0 + v1);
    crossings.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const ChartPoint a = pts[i], b = pts[(i + 1) % n];
      if (std::min(a.v, b.v) <= v0 && std::max(a.v, b.v) >= v1) {
        const double t = (vm - a.v) / (b.v - a.v);
        crossings.push_back({a.u + t * (b.u - a.u), a, b});
      }
    }
    std::sort(crossings.begin(), crossings.end(),
              [](const Crossing& x, const Crossing& y) { return x.u_mid < y.u_mid; });
    for (std::size_t c = 0; c + 1 < crossings.size(); c += 2) {
      const Crossing left = crossings[c], right = crossings[c + 1];
      auto u_at = [](const Crossing& e, double v) {
        return e.a.u + (v - e.a.v) * (e.b.u - e.a.u) / (e.b.v - e.a.v);
      };
      auto row = [&](double v) {
        const double ul = u_at(left, v), ur = u_at(right, v);
        if (!(ur > ul)) return 0.0;
        return integrate([&](double u) { return density(u, v); }, ul, ur);
      };
      total += integrate(row, v0, v1);
    }
  }
  return total;
}

}  // namespace chariot
