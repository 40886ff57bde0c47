#include "chariot/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chariot {

namespace {

struct State {
  double u, v, pu, pv;
};

State geodesic_rhs(const Surface& s, const State& y) {
  const auto acc = s.christoffel_unchecked({y.u, y.v}).contract(y.pu, y.pv, y.pu, y.pv);
  return {y.pu, y.pv, -acc[0], -acc[1]};
}

State axpy(const State& y, double h, const State& k) {
  return {y.u + h * k.u, y.v + h * k.v, y.pu + h * k.pu, y.pv + h * k.pv};
}

State rk4_step(const Surface& s, const State& y, double h) {
  const State k1 = geodesic_rhs(s, y);
  const State k2 = geodesic_rhs(s, axpy(y, 0.5 * h, k1));
  const State k3 = geodesic_rhs(s, axpy(y, 0.5 * h, k2));
  const State k4 = geodesic_rhs(s, axpy(y, h, k3));
  return {y.u + h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
          y.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v),
          y.pu + h / 6.0 * (k1.pu + 2.0 * k2.pu + 2.0 * k3.pu + k4.pu),
          y.pv + h / 6.0 * (k1.pv + 2.0 * k2.pv + 2.0 * k3.pv + k4.pv)};
}

bool near_antipodal(const Surface& s, ChartPoint a, ChartPoint b) {
  if (s.kind() != SurfaceKind::sphere) return false;
  const double r = s.params().front();
  return (s.embed(a) + s.embed(b)).norm() < 1e-3 * r;
}

}  // namespace

GeodesicShot shoot_geodesic(const Surface& s, ChartPoint start, const TangentVector& dir,
                            double length, const GeodesicOptions& opts) {
  s.require_inside(start, "shoot_geodesic");
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InvalidArgument("shoot_geodesic: length must be positive");
  }
  const Metric g0 = s.metric_unchecked(start);
  const double speed = g0.norm(dir.du, dir.dv);
  if (!(speed > 0.0)) throw InvalidArgument("shoot_geodesic: zero direction");

  const auto n = static_cast<std::size_t>(
      std::max<double>(static_cast<double>(opts.min_samples), std::ceil(length / opts.step)));
  const double h = length / static_cast<double>(n);

  std::vector<ChartPoint> pts;
  std::vector<double> arc;
  pts.reserve(n + 1);
  arc.reserve(n + 1);
  State y{start.u, start.v, dir.du / speed, dir.dv / speed};
  pts.push_back(start);
  arc.push_back(0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    y = rk4_step(s, y, h);
    const ChartPoint p{y.u, y.v};
    if (!s.contains(p)) {
      std::ostringstream os;
      os << "shoot_geodesic: left the chart domain of " << s.name() << " after length "
         << static_cast<double>(k - 1) * h;
      throw GeodesicDomainExit(os.str(), static_cast<double>(k - 1) * h);
    }
    pts.push_back(p);
    arc.push_back(static_cast<double>(k) * h);
  }
  GeodesicShot shot{start,
                    TangentVector{start, dir.du / speed, dir.dv / speed},
                    length,
                    Path(std::move(pts)),
                    std::move(arc),
                    {}};
  shot.end_velocity = TangentVector{shot.result_path.back(), y.pu, y.pv};
  return shot;
}

ChartPoint exponential_map(const Surface& s, ChartPoint p, double du, double dv,
                           const GeodesicOptions& opts) {
  const double len = s.metric_at(p).norm(du, dv);
  if (len == 0.0) return p;
  return shoot_geodesic(s, p, TangentVector{p, du, dv}, len, opts).result_path.back();
}

GeodesicShot connect_geodesic(const Surface& s, ChartPoint a, ChartPoint b,
                              const GeodesicOptions& opts, std::optional<double> initial_angle) {
  s.require_inside(a, "connect_geodesic");
  s.require_inside(b, "connect_geodesic");
  if (a == b) throw InvalidArgument("connect_geodesic: endpoints coincide");
  if (near_antipodal(s, a, b)) {
    throw InvalidArgument("connect_geodesic: endpoints are (nearly) antipodal");
  }

  const Metric ga = s.metric_unchecked(a);
  double theta = initial_angle ? *initial_angle : frame_angle(ga, b.u - a.u, b.v - a.v);
  double length = segment_length(s, a, b);
  const double accept = opts.tolerance * std::max({1.0, std::abs(b.u), std::abs(b.v)});

  auto shoot_at = [&](double th, double len) {
    const auto d = frame_vector(ga, th);
    return shoot_geodesic(s, a, TangentVector{a, d[0], d[1]}, len, opts);
  };
  // b or its copy a whole number of periods away, whichever is nearest to `end`.
  const ChartDomain& dom = s.domain();
  auto target_for = [&](ChartPoint end) {
    ChartPoint t = b;
    if (dom.periodic_u) t.u += dom.u_period() * std::round((end.u - b.u) / dom.u_period());
    if (dom.periodic_v) t.v += dom.v_period() * std::round((end.v - b.v) / dom.v_period());
    return t;
  };
  auto residual_of = [&](const GeodesicShot& shot) {
    const ChartPoint end = shot.result_path.back();
    return chart_distance(end, target_for(end));
  };

  GeodesicShot shot = shoot_at(theta, length);
  double residual = residual_of(shot);
  for (int it = 0; it < opts.max_iterations && residual > accept; ++it) {
    const ChartPoint end = shot.result_path.back();
    const ChartPoint r = end - target_for(end);
    // d(end)/d(length) is the end velocity; d(end)/d(theta) by a forward difference.
    const double dth = 1e-7;
    const ChartPoint end_th = shoot_at(theta + dth, length).result_path.back();
    const double j00 = (end_th.u - end.u) / dth, j10 = (end_th.v - end.v) / dth;
    const double j01 = shot.end_velocity.du, j11 = shot.end_velocity.dv;
    const double det = j00 * j11 - j01 * j10;
    if (det == 0.0) break;
    double d_theta = -(j11 * r.u - j01 * r.v) / det;
    double d_len = -(-j10 * r.u + j00 * r.v) / det;
    if (std::abs(d_theta) > 0.5) {
      const double f = 0.5 / std::abs(d_theta);
      d_theta *= f;
      d_len *= f;
    }
    if (length + d_len < 0.2 * length) {
      const double f = 0.8 * length / std::abs(d_len);
      d_theta *= f;
      d_len *= f;
    }
    bool improved = false;
    for (double lambda = 1.0; lambda > 1e-6; lambda *= 0.5) {
      try {
        GeodesicShot trial = shoot_at(theta + lambda * d_theta, length + lambda * d_len);
        const double res = residual_of(trial);
        if (res < residual) {
          theta += lambda * d_theta;
          length += lambda * d_len;
          shot = std::move(trial);
          residual = res;
          improved = true;
          break;
        }
      } catch (const GeodesicDomainExit&) {
      }
    }
    if (!improved) break;
  }
  if (residual > accept) {
    std::ostringstream os;
    os << "connect_geodesic: no convergence, residual " << residual;
    throw ConvergenceError(os.str(), residual);
  }
  std::vector<ChartPoint> pts = shot.result_path.samples();
  pts.back() = target_for(pts.back());
  shot.end_velocity.base = pts.back();
  shot.result_path = Path(std::move(pts));
  return shot;
}

Loop geodesic_polygon(const Surface& s, std::span<const ChartPoint> vertices,
                      const GeodesicOptions& opts, std::vector<GeodesicShot>* sides) {
  if (vertices.size() < 3) throw InvalidArgument("geodesic_polygon: needs at least three vertices");
  std::vector<ChartPoint> pts{vertices.front()};
  if (sides) sides->clear();
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    GeodesicShot side = connect_geodesic(s, vertices[k], vertices[(k + 1) % vertices.size()], opts);
    const auto& sp = side.result_path.samples();
    pts.insert(pts.end(), sp.begin() + 1, sp.end());
    if (sides) sides->push_back(std::move(side));
  }
  return Loop(Path(std::move(pts)), s.domain());
}

std::vector<TangentVector> path_tangents(const Surface& s, const Path& p) {
  const std::size_t n = p.size();
  const std::vector<double> arc = cumulative_length(s, p);
  std::vector<TangentVector> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    ChartPoint d;
    if (n == 2) {
      d = p[1] - p[0];
    } else if (i == 0 || i == n - 1) {
      // One-sided second-order stencil.
      const bool head = i == 0;
      const std::size_t i0 = head ? 0 : n - 1, i1 = head ? 1 : n - 2, i2 = head ? 2 : n - 3;
      const double h1 = std::abs(arc[i1] - arc[i0]), h2 = std::abs(arc[i2] - arc[i1]);
      const double c0 = -(2.0 * h1 + h2) / (h1 * (h1 + h2));
      const double c1 = (h1 + h2) / (h1 * h2);
      const double c2 = -h1 / (h2 * (h1 + h2));
      d = c0 * p[i0] + c1 * p[i1] + c2 * p[i2];
      if (!head) d = -1.0 * d;
    } else {
      const double h1 = arc[i] - arc[i - 1], h2 = arc[i + 1] - arc[i];
      d = (1.0 / (h1 * h2 * (h1 + h2))) * (h1 * h1 * (p[i + 1] - p[i]) + h2 * h2 * (p[i] - p[i - 1]));
    }
    const double len = s.metric_unchecked(p[i]).norm(d.u, d.v);
    out[i] = TangentVector{p[i], d.u / len, d.v / len};
  }
  return out;
}

std::vector<double> rotation_rates(const Surface& s, const Path& p) {
  const std::size_t n = p.size();
  std::vector<double> rates(n, 0.0);
  if (n < 3) return rates;
  const std::vector<double> arc = cumulative_length(s, p);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = arc[i] - arc[i - 1], h2 = arc[i + 1] - arc[i];
    const double denom = h1 * h2 * (h1 + h2);
    const ChartPoint fwd = p[i + 1] - p[i], back = p[i] - p[i - 1];
    const ChartPoint d1 = (1.0 / denom) * (h1 * h1 * fwd + h2 * h2 * back);
    const ChartPoint d2 = (2.0 / denom) * (h1 * fwd - h2 * back);
    const Metric g = s.metric_unchecked(p[i]);
    const auto corr = s.christoffel_unchecked(p[i]).contract(d1.u, d1.v, d1.u, d1.v);
    const double acc_u = d2.u + corr[0], acc_v = d2.v + corr[1];
    const double speed = g.norm(d1.u, d1.v);
    rates[i] = std::sqrt(g.det()) * (d1.u * acc_v - d1.v * acc_u) / (speed * speed * speed);
  }
  return rates;
}

RelaxationReport relax_to_geodesic(const Surface& s, const Path& p, double step_gain, double tol,
                                   int max_iterations) {
  for (const ChartPoint& q : p.samples()) s.require_inside(q, "relax_to_geodesic");
  if (p.size() < 3) throw InvalidArgument("relax_to_geodesic: path needs interior samples");

  double gain = step_gain;
  if (!(gain > 0.0)) {
    double shortest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < p.size(); ++i) {
      shortest = std::min(shortest, segment_length(s, p[i - 1], p[i]));
    }
    gain = 0.25 * shortest * shortest;
  }
  const double min_gain = 1e-8 * gain;

  RelaxationReport report{0, {}, {}, 0.0, p, false};
  Path current = p;
  double length = path_length(s, current);
  report.length_history.push_back(length);

  std::vector<double> rates = rotation_rates(s, current);
  auto max_abs = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };
  double max_rate = max_abs(rates);
  report.max_rate_history.push_back(max_rate);

  while (report.iterations < max_iterations) {
    if (max_rate < tol) {
      report.converged = true;
      break;
    }
    const std::vector<TangentVector> tangents = path_tangents(s, current);
    std::vector<ChartPoint> moved = current.samples();
    bool inside = true;
    for (std::size_t i = 1; i + 1 < moved.size(); ++i) {
      const Metric g = s.metric_unchecked(moved[i]);
      const auto normal = quarter_turn(g, tangents[i].du, tangents[i].dv);
      moved[i] = moved[i] + (gain * rates[i]) * ChartPoint{normal[0], normal[1]};
      inside = inside && s.contains(moved[i]);
    }
    if (!inside) {
      gain *= 0.5;
      if (gain < min_gain) break;
      continue;
    }
    Path trial = [&] {
      try {
        return Path(std::move(moved));
      } catch (const InvalidArgument&) {
        throw DomainError("relax_to_geodesic: path degenerated (samples merged)");
      }
    }();
    const double trial_length = path_length(s, trial);
    if (trial_length > length * (1.0 + 1e-13)) {
      gain *= 0.5;
      if (gain < min_gain) break;
      continue;
    }
    current = std::move(trial);
    length = trial_length;
    rates = rotation_rates(s, current);
    max_rate = max_abs(rates);
    ++report.iterations;
    report.length_history.push_back(length);
    report.max_rate_history.push_back(max_rate);
  }
  if (max_rate < tol) report.converged = true;
  report.final_max_rotation_rate = max_rate;
  report.final_path = current;
  return report;
}

SecondVariation second_variation_probe(const Surface& s, const GeodesicShot& g, double amplitude,
                                       int mode) {
  if (!(amplitude > 0.0)) throw InvalidArgument("second_variation_probe: amplitude must be positive");
  if (mode < 1) throw InvalidArgument("second_variation_probe: mode must be >= 1");
  const Path& base = g.result_path;
  const std::vector<double> arc = cumulative_length(s, base);
  const double total = arc.back();
  const std::vector<TangentVector> tangents = path_tangents(s, base);
  const double base_length = path_length(s, base);

  auto perturbed_length = [&](double side) {
    std::vector<ChartPoint> pts = base.samples();
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
      const Metric m = s.metric_unchecked(pts[i]);
      const auto normal = quarter_turn(m, tangents[i].du, tangents[i].dv);
      const double bump = side * amplitude * std::sin(mode * kPi * arc[i] / total);
      pts[i] = pts[i] + bump * ChartPoint{normal[0], normal[1]};
      s.require_inside(pts[i], "second_variation_probe");
    }
    return path_length(s, Path(std::move(pts)));
  };
  return {perturbed_length(+1.0) - base_length, perturbed_length(-1.0) - base_length};
}

}  // namespace chariot
