#include "chariot/projection.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "chariot/errors.hpp"
#include "chariot/geodesics.hpp"
#include "parallel.hpp"

namespace chariot {

std::array<double, 2> FlatMap::operator()(ChartPoint p) const {
  if (p.u < pole_cutoff || p.u > kPi - pole_cutoff) {
    std::ostringstream os;
    os << name << ": colatitude " << p.u << " is outside the map (pole cutoff " << pole_cutoff << ")";
    throw DomainError(os.str());
  }
  const auto xy = forward(p);
  return {nominal_scale * xy[0], nominal_scale * xy[1]};
}

FlatMap FlatMap::rescaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidArgument("FlatMap::rescaled: factor must be positive");
  FlatMap m = *this;
  m.nominal_scale *= factor;
  return m;
}

FlatMap builtin_projection(const std::string& name, const Surface& s, double nominal_scale) {
  if (s.kind() != SurfaceKind::sphere) {
    throw InvalidArgument("builtin_projection: " + name + " needs a sphere, got " + s.name());
  }
  if (!(nominal_scale > 0.0)) throw InvalidArgument("builtin_projection: scale must be positive");
  const double r = s.params().front();
  if (name == "mercator") {
    return {name,
            [r](ChartPoint p) {
              const double lat = 0.5 * kPi - p.u;
              return std::array<double, 2>{r * p.v, r * std::log(std::tan(0.25 * kPi + 0.5 * lat))};
            },
            nominal_scale, 0.2};
  }
  if (name == "equirectangular") {
    return {name,
            [r](ChartPoint p) { return std::array<double, 2>{r * p.v, r * (0.5 * kPi - p.u)}; },
            nominal_scale, 0.0};
  }
  throw InvalidArgument("builtin_projection: unknown projection '" + name + "'");
}

double local_scale(const FlatMap& m, const Surface& s, ChartPoint p, double du, double dv, double h) {
  const ChartPoint q = p + ChartPoint{h * du, h * dv};
  const auto a = m(p), b = m(q);
  return std::hypot(b[0] - a[0], b[1] - a[1]) / segment_length(s, p, q);
}

DistortionReport distortion_for_pairs(const FlatMap& m, const Surface& s,
                                      const std::vector<std::pair<ChartPoint, ChartPoint>>& pairs,
                                      Execution exec) {
  std::vector<PairSample> samples(pairs.size());
  std::vector<std::string> failures(pairs.size());
  detail::for_each_index(pairs.size(), exec, [&](std::size_t i) {
    const auto [a, b] = pairs[i];
    try {
      const auto ia = m(a), ib = m(b);
      const double truth = connect_geodesic(s, a, b).length;
      const double mapped = std::hypot(ib[0] - ia[0], ib[1] - ia[1]);
      samples[i] = {a, b, truth, mapped, mapped / truth};
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });

  DistortionReport report;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (failures[i].empty()) {
      report.samples.push_back(samples[i]);
    } else {
      report.skipped.push_back({i, failures[i]});
    }
  }
  if (report.samples.empty()) throw DomainError("distortion_report: every pair failed");
  const auto [lo, hi] = std::minmax_element(
      report.samples.begin(), report.samples.end(),
      [](const PairSample& x, const PairSample& y) { return x.ratio < y.ratio; });
  report.min_ratio = lo->ratio;
  report.max_ratio = hi->ratio;
  return report;
}

DistortionReport distortion_report(const FlatMap& m, const Surface& s, int n_pairs,
                                   std::uint64_t seed, Execution exec) {
  if (n_pairs < 10) throw InvalidArgument("distortion_report: needs at least 10 pairs");
  const double r = s.params().front();
  const double band = 70.0 / 180.0 * kPi;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Pairs are drawn serially so that the sample set depends on the seed alone.
  std::vector<std::pair<ChartPoint, ChartPoint>> pairs;
  pairs.reserve(static_cast<std::size_t>(n_pairs));
  for (int i = 0; i < n_pairs; ++i) {
    const double lat = std::asin((2.0 * unit(rng) - 1.0) * std::sin(band));
    const ChartPoint a{0.5 * kPi - lat, kTwoPi * unit(rng)};
    const double heading = kTwoPi * unit(rng);
    const double dist = r * (0.05 + 0.55 * unit(rng));
    // Destination on the great circle, from the embedding to stay independent of the solver.
    const Eigen::Vector3d x = s.embed(a) / r;
    const Eigen::Vector3d east(-std::sin(a.v), std::cos(a.v), 0.0);
    const Eigen::Vector3d north = x.cross(east);
    const Eigen::Vector3d t = std::cos(heading) * east + std::sin(heading) * north;
    const double c = dist / r;
    const Eigen::Vector3d y = std::cos(c) * x + std::sin(c) * t;
    double lon = std::atan2(y[1], y[0]);
    lon += kTwoPi * std::round((a.v - lon) / kTwoPi);
    pairs.emplace_back(a, ChartPoint{std::acos(std::clamp(y[2], -1.0, 1.0)), lon});
  }
  return distortion_for_pairs(m, s, pairs, exec);
}

ObstructionVerdict holonomy_obstruction(const Surface& s, const RegionBoundary& r,
                                        const TransportOptions& opts) {
  const std::vector<ChartPoint>& pts = r.loop().path().samples();
  if (area_of_region(s, pts) <= 0.0) throw InvalidArgument("holonomy_obstruction: region has no area");
  const HolonomyResult h = loop_holonomy_detailed(s, r.loop(), opts);
  ObstructionVerdict v;
  v.holonomy = h.holonomy;
  v.error_estimate = h.error_estimate;
  v.threshold = 3.0 * std::max(h.error_estimate, 1e-9);
  v.certified = std::abs(h.holonomy) > v.threshold;
  std::ostringstream os;
  if (v.certified) {
    os << "holonomy " << h.holonomy << " exceeds " << v.threshold
       << ": no distance-preserving flat map of a neighbourhood of this region exists";
  } else {
    os << "holonomy " << h.holonomy << " is within " << v.threshold
       << " of zero: no obstruction to a flat map";
  }
  v.explanation = os.str();
  return v;
}

}  // namespace chariot
