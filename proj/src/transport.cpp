#include "chariot/transport.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chariot/errors.hpp"

namespace chariot {

namespace {

struct Vec {
  double u, v;
};

// dV/dt = -Gamma(x(t))(d, V) along the chart segment x(t) = a + t d.
Vec transport_rhs(const Surface& s, ChartPoint x, ChartPoint d, Vec w) {
  const auto c = s.christoffel_unchecked(x).contract(d.u, d.v, w.u, w.v);
  return {-c[0], -c[1]};
}

struct SingleRun {
  double total = 0.0;
  std::vector<AngleSample> trace;
  Vec final{};
};

SingleRun transport_once(const Surface& s, const Path& p, Vec v, double norm0, double step,
                         const std::vector<double>& seg_len) {
  SingleRun run;
  run.trace.reserve(p.size());
  double angle = frame_angle(s.metric_unchecked(p[0]), v.u, v.v);
  const double angle0 = angle;
  double arclength = 0.0;
  run.trace.push_back({0.0, angle});
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const ChartPoint a = p[i], d = p[i + 1] - p[i];
    const auto n = static_cast<int>(std::max(1.0, std::ceil(seg_len[i] / step)));
    const double h = 1.0 / n;
    for (int k = 0; k < n; ++k) {
      const double t = k * h;
      const ChartPoint x0 = a + t * d, xm = a + (t + 0.5 * h) * d, x1 = a + (t + h) * d;
      const Vec k1 = transport_rhs(s, x0, d, v);
      const Vec k2 = transport_rhs(s, xm, d, {v.u + 0.5 * h * k1.u, v.v + 0.5 * h * k1.v});
      const Vec k3 = transport_rhs(s, xm, d, {v.u + 0.5 * h * k2.u, v.v + 0.5 * h * k2.v});
      const Vec k4 = transport_rhs(s, x1, d, {v.u + h * k3.u, v.v + h * k3.v});
      v.u += h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
      v.v += h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
      const Metric g = s.metric_unchecked(x1);
      const double scale = norm0 / g.norm(v.u, v.v);
      v.u *= scale;
      v.v *= scale;
      const double next = frame_angle(g, v.u, v.v);
      angle += wrap_angle(next - wrap_angle(angle));
    }
    arclength += seg_len[i];
    run.trace.push_back({arclength, angle});
  }
  run.total = angle - angle0;
  run.final = v;
  return run;
}

}  // namespace

TransportResult parallel_transport(const Surface& s, const Path& p, const TangentVector& v0,
                                   const TransportOptions& opts) {
  for (const ChartPoint& q : p.samples()) s.require_inside(q, "parallel_transport");
  if (chart_distance(v0.base, p.front()) > 1e-12 * std::max(1.0, s.domain().extent())) {
    throw InvalidArgument("parallel_transport: initial vector is not based at the path start");
  }
  const double norm0 = s.metric_unchecked(p.front()).norm(v0.du, v0.dv);
  if (!(norm0 > 0.0) || !std::isfinite(norm0)) {
    throw InvalidArgument("parallel_transport: zero initial vector");
  }
  if (!(opts.step > 0.0)) throw InvalidArgument("parallel_transport: step must be positive");

  std::vector<double> seg_len(p.size() - 1);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) seg_len[i] = segment_length(s, p[i], p[i + 1]);

  double step = opts.step;
  SingleRun coarse = transport_once(s, p, {v0.du, v0.dv}, norm0, step, seg_len);
  double diff = 0.0;
  for (int k = 0; k < opts.max_halvings; ++k) {
    step *= 0.5;
    SingleRun fine = transport_once(s, p, {v0.du, v0.dv}, norm0, step, seg_len);
    diff = std::abs(fine.total - coarse.total);
    coarse = std::move(fine);
    if (diff <= opts.tolerance) break;
  }
  TransportResult out;
  out.total_rotation = coarse.total;
  out.angle_trace = std::move(coarse.trace);
  out.final_vector = TangentVector{p.back(), coarse.final.u, coarse.final.v};
  out.error_estimate = diff;
  return out;
}

HolonomyResult loop_holonomy_detailed(const Surface& s, const Loop& l,
                                      const TransportOptions& opts) {
  const Metric g = s.metric_at(l.base());
  const auto e1 = frame_vector(g, 0.0);
  const TransportResult t = parallel_transport(s, l.path(), TangentVector{l.base(), e1[0], e1[1]}, opts);
  HolonomyResult out;
  out.holonomy = t.total_rotation;
  if (s.collapses_u_min_edge()) out.holonomy += kTwoPi * l.v_winding();
  out.error_estimate = t.error_estimate;
  out.wrapped = wrap_angle(out.holonomy);
  return out;
}

double loop_holonomy(const Surface& s, const Loop& l, const TransportOptions& opts) {
  return loop_holonomy_detailed(s, l, opts).holonomy;
}

ChariotResult finite_chariot(const Surface& s, const Path& p, const ChariotConfig& cfg) {
  if (!(cfg.width_w > 0.0)) throw InvalidArgument("finite_chariot: width must be positive");
  if (!(cfg.step > 0.0)) throw InvalidArgument("finite_chariot: step must be positive");
  for (const ChartPoint& q : p.samples()) s.require_inside(q, "finite_chariot");

  const std::size_t n = p.size();
  const std::vector<TangentVector> tangents = path_tangents(s, p);
  const double half = 0.5 * cfg.width_w;
  GeodesicOptions gopts;
  gopts.step = cfg.step;

  std::vector<ChartPoint> left(n), right(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Metric g = s.metric_unchecked(p[i]);
    const auto normal = quarter_turn(g, tangents[i].du, tangents[i].dv);
    try {
      left[i] = exponential_map(s, p[i], half * normal[0], half * normal[1], gopts);
      right[i] = exponential_map(s, p[i], -half * normal[0], -half * normal[1], gopts);
    } catch (const DomainError& e) {
      std::ostringstream os;
      os << "finite_chariot: wheel track leaves the chart at sample " << i << " (" << e.what() << ")";
      throw DomainError(os.str());
    }
  }

  // A track segment running against the centre segment means the offset curve folded over.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Metric g = s.metric_unchecked(p[i]);
    const ChartPoint c = p[i + 1] - p[i];
    for (const auto* track : {&left, &right}) {
      const ChartPoint t = (*track)[i + 1] - (*track)[i];
      if (g.inner(c.u, c.v, t.u, t.v) <= 0.0) {
        std::ostringstream os;
        os << "finite_chariot: width " << cfg.width_w
           << " too large for the path curvature (wheel track self-intersects near sample " << i
           << ")";
        throw InvalidArgument(os.str());
      }
    }
  }

  ChariotResult out{TransportResult{}, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                    Path(left), Path(right)};
  for (std::size_t i = 1; i < n; ++i) {
    out.d_left[i] = out.d_left[i - 1] + segment_length(s, left[i - 1], left[i]);
    out.d_right[i] = out.d_right[i - 1] + segment_length(s, right[i - 1], right[i]);
  }

  const std::vector<double> arc = cumulative_length(s, p);
  double heading = frame_angle(s.metric_unchecked(p[0]), tangents[0].du, tangents[0].dv);
  TransportResult& t = out.transport;
  t.angle_trace.reserve(n);
  t.angle_trace.push_back({0.0, heading});
  for (std::size_t i = 1; i < n; ++i) {
    const double next = frame_angle(s.metric_unchecked(p[i]), tangents[i].du, tangents[i].dv);
    heading += wrap_angle(next - wrap_angle(heading));
    t.angle_trace.push_back({arc[i], heading + (out.d_left[i] - out.d_right[i]) / cfg.width_w});
  }
  t.total_rotation = t.angle_trace.back().angle - t.angle_trace.front().angle;
  const auto fv = frame_vector(s.metric_unchecked(p.back()), t.angle_trace.back().angle);
  t.final_vector = TangentVector{p.back(), fv[0], fv[1]};
  return out;
}

std::vector<ConvergencePoint> chariot_convergence(const Surface& s, const Path& p,
                                                  const std::vector<double>& widths,
                                                  const TransportOptions& opts) {
  if (widths.empty()) throw InvalidArgument("chariot_convergence: no widths given");
  const std::vector<TangentVector> tangents = path_tangents(s, p);
  const TransportResult continuum = parallel_transport(s, p, tangents.front(), opts);
  std::vector<ConvergencePoint> out;
  out.reserve(widths.size());
  for (double w : widths) {
    ChariotConfig cfg;
    cfg.width_w = w;
    const ChariotResult r = finite_chariot(s, p, cfg);
    out.push_back({w, std::abs(r.transport.total_rotation - continuum.total_rotation)});
  }
  return out;
}

double empirical_order(const std::vector<ConvergencePoint>& points) {
  if (points.size() < 2) throw InvalidArgument("empirical_order: needs two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& pt : points) {
    if (!(pt.error > 0.0)) throw InvalidArgument("empirical_order: zero error");
    const double x = std::log(pt.width), y = std::log(pt.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(points.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace chariot
