#include "chariot/surface.hpp"

#include <sstream>
#include <utility>

#include "chariot/errors.hpp"

namespace chariot {

namespace {

constexpr double kDefaultPoleMargin = 1e-3;

std::string describe(ChartPoint p) {
  std::ostringstream os;
  os.precision(12);
  os << "(" << p.u << ", " << p.v << ")";
  return os.str();
}

void require_positive(std::string_view surface, std::span<const double> params) {
  for (double x : params) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw InvalidArgument(std::string(surface) + ": size parameters must be positive and finite");
    }
  }
}

void require_param_count(std::string_view surface, std::span<const double> params, std::size_t lo,
                         std::size_t hi) {
  if (params.size() < lo || params.size() > hi) {
    std::ostringstream os;
    os << surface << ": expected " << lo;
    if (hi != lo) os << ".." << hi;
    os << " parameters, got " << params.size();
    throw InvalidArgument(os.str());
  }
}

Surface graph_surface(std::string name, SurfaceKind kind, ChartDomain domain,
                      std::function<HeightSample(ChartPoint)> height, std::vector<double> params,
                      double feature_scale) {
  auto metric = [height](ChartPoint p) {
    const HeightSample h = height(p);
    return Metric{1.0 + h.f_u * h.f_u, h.f_u * h.f_v, 1.0 + h.f_v * h.f_v};
  };
  auto derivs = [height](ChartPoint p) {
    const HeightSample h = height(p);
    MetricDerivatives m;
    m.E_u = 2.0 * h.f_u * h.f_uu;
    m.E_v = 2.0 * h.f_u * h.f_uv;
    m.F_u = h.f_uu * h.f_v + h.f_u * h.f_uv;
    m.F_v = h.f_uv * h.f_v + h.f_u * h.f_vv;
    m.G_u = 2.0 * h.f_v * h.f_uv;
    m.G_v = 2.0 * h.f_v * h.f_vv;
    return m;
  };
  auto embed = [height](ChartPoint p) { return Eigen::Vector3d(p.u, p.v, height(p).f); };
  return Surface(std::move(name), kind, domain, metric, derivs, embed, std::move(params),
                 feature_scale);
}

Surface make_plane() {
  ChartDomain d{-10.0, 10.0, -10.0, 10.0, false, false, 0.0};
  return Surface(
      "plane", SurfaceKind::plane, d, [](ChartPoint) { return Metric{1.0, 0.0, 1.0}; },
      [](ChartPoint) { return MetricDerivatives{}; },
      [](ChartPoint p) { return Eigen::Vector3d(p.u, p.v, 0.0); }, {}, 1.0);
}

Surface make_sphere(double r, double margin) {
  ChartDomain d{0.0, kPi, 0.0, kTwoPi, false, true, margin};
  const double r2 = r * r;
  return Surface(
      "sphere", SurfaceKind::sphere, d,
      [r2](ChartPoint p) {
        const double s = std::sin(p.u);
        return Metric{r2, 0.0, r2 * s * s};
      },
      [r2](ChartPoint p) {
        MetricDerivatives m;
        m.G_u = 2.0 * r2 * std::sin(p.u) * std::cos(p.u);
        return m;
      },
      [r](ChartPoint p) {
        const double s = std::sin(p.u);
        return Eigen::Vector3d(r * s * std::cos(p.v), r * s * std::sin(p.v), r * std::cos(p.u));
      },
      {r, margin}, r);
}

Surface make_cylinder(double r) {
  ChartDomain d{-10.0, 10.0, 0.0, kTwoPi * r, false, true, 0.0};
  return Surface(
      "cylinder", SurfaceKind::cylinder, d, [](ChartPoint) { return Metric{1.0, 0.0, 1.0}; },
      [](ChartPoint) { return MetricDerivatives{}; },
      [r](ChartPoint p) {
        const double a = p.v / r;
        return Eigen::Vector3d(r * std::cos(a), r * std::sin(a), p.u);
      },
      {r}, r);
}

Surface make_torus(double R, double r) {
  ChartDomain d{0.0, kTwoPi, 0.0, kTwoPi, true, true, 0.0};
  return Surface(
      "torus", SurfaceKind::torus, d,
      [R, r](ChartPoint p) {
        const double rho = R + r * std::cos(p.u);
        return Metric{r * r, 0.0, rho * rho};
      },
      [R, r](ChartPoint p) {
        MetricDerivatives m;
        m.G_u = -2.0 * r * std::sin(p.u) * (R + r * std::cos(p.u));
        return m;
      },
      [R, r](ChartPoint p) {
        const double rho = R + r * std::cos(p.u);
        return Eigen::Vector3d(rho * std::cos(p.v), rho * std::sin(p.v), r * std::sin(p.u));
      },
      {R, r}, r);
}

Surface make_ellipsoid(double a, double b, double c, double margin) {
  ChartDomain d{0.0, kPi, 0.0, kTwoPi, false, true, margin};
  const double a2 = a * a, b2 = b * b, c2 = c * c;
  return Surface(
      "ellipsoid", SurfaceKind::ellipsoid, d,
      [a2, b2, c2](ChartPoint p) {
        const double su = std::sin(p.u), cu = std::cos(p.u);
        const double sv = std::sin(p.v), cv = std::cos(p.v);
        const double A = a2 * cv * cv + b2 * sv * sv;
        const double B = a2 * sv * sv + b2 * cv * cv;
        return Metric{cu * cu * A + c2 * su * su, (b2 - a2) * su * cu * sv * cv, su * su * B};
      },
      [a2, b2, c2](ChartPoint p) {
        const double su = std::sin(p.u), cu = std::cos(p.u);
        const double sv = std::sin(p.v), cv = std::cos(p.v);
        const double A = a2 * cv * cv + b2 * sv * sv;
        const double B = a2 * sv * sv + b2 * cv * cv;
        MetricDerivatives m;
        m.E_u = 2.0 * su * cu * (c2 - A);
        m.E_v = cu * cu * 2.0 * (b2 - a2) * sv * cv;
        m.F_u = 0.5 * (b2 - a2) * std::cos(2.0 * p.u) * std::sin(2.0 * p.v);
        m.F_v = 0.5 * (b2 - a2) * std::sin(2.0 * p.u) * std::cos(2.0 * p.v);
        m.G_u = 2.0 * su * cu * B;
        m.G_v = su * su * 2.0 * (a2 - b2) * sv * cv;
        return m;
      },
      [a, b, c](ChartPoint p) {
        const double su = std::sin(p.u);
        return Eigen::Vector3d(a * su * std::cos(p.v), b * su * std::sin(p.v), c * std::cos(p.u));
      },
      {a, b, c, margin}, std::min({a, b, c}));
}

Surface make_hill(double h, double sigma) {
  ChartDomain d{-5.0 * sigma, 5.0 * sigma, -5.0 * sigma, 5.0 * sigma, false, false, 0.0};
  const double s2 = sigma * sigma;
  auto height = [h, s2](ChartPoint p) {
    const double e = h * std::exp(-(p.u * p.u + p.v * p.v) / s2);
    const double k = -2.0 / s2;
    HeightSample hs;
    hs.f = e;
    hs.f_u = k * p.u * e;
    hs.f_v = k * p.v * e;
    hs.f_uu = k * e + k * k * p.u * p.u * e;
    hs.f_uv = k * k * p.u * p.v * e;
    hs.f_vv = k * e + k * k * p.v * p.v * e;
    return hs;
  };
  return graph_surface("hill", SurfaceKind::hill, d, height, {h, sigma}, sigma);
}

}  // namespace

Surface::Surface(std::string name, SurfaceKind kind, ChartDomain domain, MetricFn metric,
                 std::optional<MetricDerivativeFn> derivatives, std::optional<EmbeddingFn> embedding,
                 std::vector<double> params, double feature_scale)
    : name_(std::move(name)),
      kind_(kind),
      domain_(domain),
      metric_(std::move(metric)),
      derivatives_(std::move(derivatives)),
      embedding_(std::move(embedding)),
      params_(std::move(params)),
      feature_scale_(feature_scale) {
  if (!(domain_.u_max > domain_.u_min) || !(domain_.v_max > domain_.v_min)) {
    throw InvalidArgument(name_ + ": empty chart domain");
  }
  if (!metric_) throw InvalidArgument(name_ + ": missing metric");
}

bool Surface::contains(ChartPoint p) const {
  if (!std::isfinite(p.u) || !std::isfinite(p.v)) return false;
  const double slack = 1e-12 * domain_.extent();
  if (!domain_.periodic_u) {
    if (p.u < domain_.u_min + domain_.u_margin - slack) return false;
    if (p.u > domain_.u_max - domain_.u_margin + slack) return false;
  }
  if (!domain_.periodic_v) {
    if (p.v < domain_.v_min - slack || p.v > domain_.v_max + slack) return false;
  }
  return true;
}

bool Surface::contains_closed(ChartPoint p) const {
  if (!std::isfinite(p.u) || !std::isfinite(p.v)) return false;
  const double slack = 1e-12 * domain_.extent();
  if (!domain_.periodic_u && (p.u < domain_.u_min - slack || p.u > domain_.u_max + slack)) {
    return false;
  }
  if (!domain_.periodic_v && (p.v < domain_.v_min - slack || p.v > domain_.v_max + slack)) {
    return false;
  }
  return true;
}

void Surface::require_inside(ChartPoint p, std::string_view what) const {
  if (!contains(p)) {
    throw DomainError(std::string(what) + ": point " + describe(p) + " is outside the chart domain of " +
                      name_);
  }
}

Metric Surface::metric_at(ChartPoint p) const {
  require_inside(p, "metric_at");
  return metric_(p);
}

MetricDerivatives Surface::metric_derivatives(ChartPoint p) const {
  if (derivatives_) return (*derivatives_)(p);
  const double h = fd_step();
  const Metric up = metric_({p.u + h, p.v}), um = metric_({p.u - h, p.v});
  const Metric vp = metric_({p.u, p.v + h}), vm = metric_({p.u, p.v - h});
  const double inv = 0.5 / h;
  MetricDerivatives d;
  d.E_u = (up.E - um.E) * inv;
  d.F_u = (up.F - um.F) * inv;
  d.G_u = (up.G - um.G) * inv;
  d.E_v = (vp.E - vm.E) * inv;
  d.F_v = (vp.F - vm.F) * inv;
  d.G_v = (vp.G - vm.G) * inv;
  return d;
}

ChristoffelSymbols christoffel_from_metric(const Metric& g, const MetricDerivatives& d) {
  const double det = g.det();
  if (!(det > 0.0)) throw DomainError("christoffel: degenerate metric");
  const double inv[2][2] = {{g.G / det, -g.F / det}, {-g.F / det, g.E / det}};
  // dg[l][i][j] = d_l g_ij
  const double dg[2][2][2] = {{{d.E_u, d.F_u}, {d.F_u, d.G_u}}, {{d.E_v, d.F_v}, {d.F_v, d.G_v}}};
  ChristoffelSymbols c;
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      for (int j = i; j < 2; ++j) {
        double sum = 0.0;
        for (int l = 0; l < 2; ++l) {
          sum += inv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
        }
        c.gamma[k][i][j] = 0.5 * sum;
        c.gamma[k][j][i] = 0.5 * sum;
      }
    }
  }
  return c;
}

ChristoffelSymbols Surface::christoffel_at(ChartPoint p) const {
  require_inside(p, "christoffel_at");
  const Metric g = metric_(p);
  if (!g.positive_definite()) {
    throw DomainError("christoffel_at: metric degenerate at " + describe(p));
  }
  return christoffel_from_metric(g, metric_derivatives(p));
}

ChristoffelSymbols Surface::christoffel_unchecked(ChartPoint p) const {
  return christoffel_from_metric(metric_(p), metric_derivatives(p));
}

Eigen::Vector3d Surface::embed(ChartPoint p) const {
  if (!embedding_) throw InvalidArgument(name_ + ": surface has no embedding");
  return (*embedding_)(p);
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> Surface::embedding_tangents(ChartPoint p) const {
  if (!embedding_) throw InvalidArgument(name_ + ": surface has no embedding");
  const double h = 1e-5 * std::max(1.0, domain_.extent());
  const auto& X = *embedding_;
  Eigen::Vector3d xu = (X({p.u + h, p.v}) - X({p.u - h, p.v})) / (2.0 * h);
  Eigen::Vector3d xv = (X({p.u, p.v + h}) - X({p.u, p.v - h})) / (2.0 * h);
  return {xu, xv};
}

Eigen::Vector3d Surface::unit_normal(ChartPoint p) const {
  const auto [xu, xv] = embedding_tangents(p);
  const Eigen::Vector3d n = xu.cross(xv);
  const double len = n.norm();
  if (!(len > 0.0)) throw DomainError("unit_normal: degenerate embedding at " + describe(p));
  return n / len;
}

Surface builtin_surface(std::string_view name, std::span<const double> params) {
  if (name == "plane") {
    require_param_count(name, params, 0, 0);
    return make_plane();
  }
  if (name == "sphere") {
    require_param_count(name, params, 1, 2);
    require_positive(name, params);
    return make_sphere(params[0], params.size() > 1 ? params[1] : kDefaultPoleMargin);
  }
  if (name == "cylinder") {
    require_param_count(name, params, 1, 1);
    require_positive(name, params);
    return make_cylinder(params[0]);
  }
  if (name == "torus") {
    require_param_count(name, params, 2, 2);
    require_positive(name, params);
    if (!(params[0] > params[1])) throw InvalidArgument("torus: requires R > r");
    return make_torus(params[0], params[1]);
  }
  if (name == "hill") {
    require_param_count(name, params, 2, 2);
    require_positive(name, params);
    return make_hill(params[0], params[1]);
  }
  if (name == "ellipsoid") {
    require_param_count(name, params, 3, 4);
    require_positive(name, params);
    return make_ellipsoid(params[0], params[1], params[2],
                          params.size() > 3 ? params[3] : kDefaultPoleMargin);
  }
  throw InvalidArgument("unknown surface '" + std::string(name) + "'");
}

Surface make_graph_surface(std::string name, ChartDomain domain,
                           std::function<HeightSample(ChartPoint)> height, double feature_scale) {
  return graph_surface(std::move(name), SurfaceKind::graph, domain, std::move(height), {},
                       feature_scale);
}

Surface make_custom_surface(std::string name, ChartDomain domain, Surface::MetricFn metric,
                            std::optional<Surface::EmbeddingFn> embedding, double feature_scale) {
  return Surface(std::move(name), SurfaceKind::custom, domain, std::move(metric), std::nullopt,
                 std::move(embedding), {}, feature_scale);
}

}  // namespace chariot
