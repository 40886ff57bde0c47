#include "chariot/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <toml.hpp>

#include "chariot/curvature.hpp"
#include "chariot/geodesics.hpp"
#include "chariot/paths.hpp"
#include "chariot/projection.hpp"
#include "chariot/surface.hpp"
#include "chariot/svg.hpp"
#include "chariot/transport.hpp"

namespace chariot {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x == 0.0 ? 0.0 : x);
  return buf;
}

const std::vector<std::string>& scenario_commands() {
  static const std::vector<std::string> names{"transport", "chariot",     "geodesic",
                                              "relax",     "curvature",   "gaussbonnet",
                                              "polygon",   "mapcheck",    "egregium"};
  return names;
}

namespace {

// ---- config access -------------------------------------------------------------------

[[noreturn]] void invalid(const std::string& field, const std::string& message) {
  throw ConfigError(field + ": " + message);
}

std::string field_name(const std::string& prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : prefix + "." + std::string(key);
}

std::optional<double> as_number(const toml::node& n) {
  if (const auto* f = n.as_floating_point()) return f->get();
  if (const auto* i = n.as_integer()) return static_cast<double>(i->get());
  return std::nullopt;
}

// Read-only view of one config table that knows its dotted name for error messages.
class Section {
 public:
  Section(const toml::table& t, std::string name) : t_(&t), name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  bool has(std::string_view key) const { return t_->contains(key); }
  std::string field(std::string_view key) const { return field_name(name_, key); }

  std::optional<double> opt_number(std::string_view key) const {
    const toml::node* n = t_->get(key);
    if (!n) return std::nullopt;
    if (auto v = as_number(*n)) return v;
    invalid(field(key), "expected a number");
  }
  double number(std::string_view key) const {
    if (auto v = opt_number(key)) return *v;
    invalid(field(key), "required number is missing");
  }
  double number(std::string_view key, double fallback) const {
    return opt_number(key).value_or(fallback);
  }
  double positive(std::string_view key, double fallback) const {
    const double v = number(key, fallback);
    if (!(v > 0.0)) invalid(field(key), "must be positive");
    return v;
  }

  std::optional<std::int64_t> opt_integer(std::string_view key) const {
    const toml::node* n = t_->get(key);
    if (!n) return std::nullopt;
    if (const auto* i = n->as_integer()) return i->get();
    invalid(field(key), "expected an integer");
  }
  std::int64_t integer(std::string_view key, std::int64_t fallback, std::int64_t min_value) const {
    const std::int64_t v = opt_integer(key).value_or(fallback);
    if (v < min_value) invalid(field(key), "must be at least " + std::to_string(min_value));
    return v;
  }

  std::optional<std::string> opt_string(std::string_view key) const {
    const toml::node* n = t_->get(key);
    if (!n) return std::nullopt;
    if (const auto* s = n->as_string()) return s->get();
    invalid(field(key), "expected a string");
  }
  std::string string(std::string_view key) const {
    if (auto v = opt_string(key)) return *v;
    invalid(field(key), "required string is missing");
  }

  std::optional<bool> opt_bool(std::string_view key) const {
    const toml::node* n = t_->get(key);
    if (!n) return std::nullopt;
    if (const auto* b = n->as_boolean()) return b->get();
    invalid(field(key), "expected true or false");
  }

  std::vector<double> numbers(std::string_view key) const {
    const toml::node* n = t_->get(key);
    if (!n) return {};
    const auto* arr = n->as_array();
    if (!arr) invalid(field(key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : *arr) {
      auto v = as_number(e);
      if (!v) invalid(field(key), "expected an array of numbers");
      out.push_back(*v);
    }
    return out;
  }
  std::optional<std::array<double, 2>> opt_pair(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    const auto v = numbers(key);
    if (v.size() != 2) invalid(field(key), "expected two numbers");
    return std::array<double, 2>{v[0], v[1]};
  }
  std::array<double, 2> pair(std::string_view key) const {
    if (auto v = opt_pair(key)) return *v;
    invalid(field(key), "required [a, b] pair is missing");
  }
  ChartPoint point(std::string_view key) const {
    const auto p = pair(key);
    return {p[0], p[1]};
  }
  std::vector<ChartPoint> points(std::string_view key) const {
    const toml::node* n = t_->get(key);
    if (!n) return {};
    const auto* arr = n->as_array();
    if (!arr) invalid(field(key), "expected an array of [u, v] points");
    std::vector<ChartPoint> out;
    for (const auto& e : *arr) {
      const auto* pt = e.as_array();
      if (!pt || pt->size() != 2) invalid(field(key), "expected an array of [u, v] points");
      const auto u = as_number(*pt->get(0)), v = as_number(*pt->get(1));
      if (!u || !v) invalid(field(key), "expected an array of [u, v] points");
      out.push_back({*u, *v});
    }
    return out;
  }
  std::optional<Section> opt_table(std::string_view key) const {
    const toml::node* n = t_->get(key);
    if (!n) return std::nullopt;
    const auto* t = n->as_table();
    if (!t) invalid(field(key), "expected a table");
    return Section(*t, field(key));
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    for (const auto& [k, v] : *t_) {
      if (std::find(keys.begin(), keys.end(), k.str()) == keys.end()) {
        invalid(field(k.str()), "unknown key");
      }
    }
  }

  const toml::table& raw() const { return *t_; }

 private:
  const toml::table* t_;
  std::string name_;
};

void merge_into(toml::table& base, const toml::table& over) {
  for (const auto& [k, v] : over) {
    auto* existing = base.get(k.str());
    if (existing && existing->is_table() && v.is_table()) {
      merge_into(*existing->as_table(), *v.as_table());
    } else {
      v.visit([&](const auto& node) { base.insert_or_assign(k.str(), node); });
    }
  }
}

toml::table parse_toml(std::string_view text, std::string_view source) {
  try {
    return toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source << ':' << e.source().begin.line << ':' << e.source().begin.column
       << ": parse error: " << e.description();
    throw ConfigError(os.str());
  }
}

// ---- output helpers -------------------------------------------------------------------

class Outputs {
 public:
  Outputs(std::filesystem::path dir, bool svg, bool degrees)
      : dir_(std::move(dir)), svg_(svg), degrees_(degrees) {
    std::filesystem::create_directories(dir_);
  }

  bool svg() const { return svg_; }
  std::string angle(double radians) const {
    return format_number(degrees_ ? radians * 180.0 / kPi : radians);
  }
  std::string number(double x) const { return format_number(x); }

  void csv(const std::string& file, const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream os;
    auto line = [&os](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    write(file, os.str());
  }

  void plot(const std::string& file, const std::vector<PlotSeries>& series, PlotKind kind,
            const PlotLabels& labels) {
    if (svg_) write(file, emit_svg_plot(series, kind, labels));
  }

  void add(const std::string& key, const std::string& value) { summary_.emplace_back(key, value); }

  ScenarioResult finish() {
    std::ostringstream os;
    for (const auto& [k, v] : summary_) os << k << " = " << v << '\n';
    write("summary.txt", os.str());
    return {summary_, files_};
  }

 private:
  void write(const std::string& file, const std::string& content) {
    const auto path = dir_ / file;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    files_.push_back(path);
  }

  std::filesystem::path dir_;
  bool svg_;
  bool degrees_;
  std::vector<std::pair<std::string, std::string>> summary_;
  std::vector<std::filesystem::path> files_;
};

// ---- paths ----------------------------------------------------------------------------

struct NamedPath {
  Path path;
  std::optional<Loop> loop;
};

std::size_t segments_for(double length, double step) {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(length / step)));
}

NamedPath build_path(const Surface& s, const Section& p) {
  const std::string gen = p.string("generator");
  const double default_step = 1e-2 * s.domain().extent();
  auto as_path = [](Path path) { return NamedPath{std::move(path), std::nullopt}; };
  auto as_loop = [](Loop loop) {
    Path path = loop.path();
    return NamedPath{std::move(path), std::move(loop)};
  };

  if (gen == "waypoints") {
    p.allow_only({"generator", "points", "closed", "max_step"});
    std::vector<ChartPoint> pts = p.points("points");
    if (pts.size() < 2) invalid(p.field("points"), "needs at least two points");
    Path path(pts);
    if (auto m = p.opt_number("max_step")) {
      if (!(*m > 0.0)) invalid(p.field("max_step"), "must be positive");
      path = path.refined(*m);
    }
    const bool closed = p.opt_bool("closed").value_or(pts.front() == pts.back());
    if (!closed) return as_path(std::move(path));
    std::vector<ChartPoint> ring = path.samples();
    if (!(ring.front() == ring.back())) ring.push_back(ring.front());
    return as_loop(Loop(Path(std::move(ring)), s.domain()));
  }
  if (gen == "line") {
    p.allow_only({"generator", "from", "to", "segments", "max_step"});
    const ChartPoint a = p.point("from"), b = p.point("to");
    if (auto n = p.opt_integer("segments")) {
      return as_path(generators::line(a, b, static_cast<std::size_t>(p.integer("segments", *n, 1))));
    }
    return as_path(generators::line_max_step(a, b, p.positive("max_step", default_step)));
  }
  if (gen == "chart_rectangle") {
    p.allow_only({"generator", "u", "v", "max_step"});
    const auto u = p.pair("u"), v = p.pair("v");
    return as_loop(generators::chart_rectangle(u[0], u[1], v[0], v[1],
                                               p.positive("max_step", default_step), s.domain()));
  }
  if (gen == "latitude_circle" || gen == "latitude_arc") {
    p.allow_only({"generator", "u", "v_start", "turns", "segments"});
    const double u = p.number("u"), v0 = p.number("v_start", 0.0), turns = p.number("turns", 1.0);
    const double sweep = std::abs(turns) * s.domain().v_period();
    const auto n = static_cast<std::size_t>(
        p.integer("segments", static_cast<std::int64_t>(segments_for(sweep, default_step)), 3));
    if (gen == "latitude_arc") return as_path(generators::latitude_arc(u, v0, turns, n));
    if (turns != std::round(turns)) invalid(p.field("turns"), "must be a whole number for a circle");
    return as_loop(generators::latitude_circle(u, v0, static_cast<int>(turns), n, s.domain()));
  }
  if (gen == "circular_arc") {
    p.allow_only({"generator", "centre", "radius", "start_angle", "sweep", "segments"});
    const double radius = p.positive("radius", 1.0), sweep = p.number("sweep");
    const auto n = static_cast<std::size_t>(p.integer(
        "segments", static_cast<std::int64_t>(segments_for(std::abs(sweep) * radius, default_step)), 2));
    return as_path(generators::circular_arc(p.point("centre"), radius, p.number("start_angle", 0.0),
                                            sweep, n));
  }
  if (gen == "geodesic_polygon") {
    p.allow_only({"generator", "vertices", "step"});
    GeodesicOptions go;
    go.step = p.positive("step", go.step);
    const auto v = p.points("vertices");
    if (v.size() < 3) invalid(p.field("vertices"), "needs at least three vertices");
    return as_loop(geodesic_polygon(s, v, go));
  }
  if (gen == "geodesic") {
    p.allow_only({"generator", "start", "heading", "length", "step"});
    GeodesicOptions go;
    go.step = p.positive("step", go.step);
    const ChartPoint a = p.point("start");
    const auto d = frame_vector(s.metric_at(a), p.number("heading", 0.0));
    return as_path(shoot_geodesic(s, a, TangentVector{a, d[0], d[1]}, p.positive("length", 1.0), go)
                       .result_path);
  }
  if (gen == "connect") {
    p.allow_only({"generator", "from", "to", "step"});
    GeodesicOptions go;
    go.step = p.positive("step", go.step);
    return as_path(connect_geodesic(s, p.point("from"), p.point("to"), go).result_path);
  }
  invalid(p.field("generator"), "unknown generator '" + gen +
                                    "' (waypoints, line, chart_rectangle, latitude_circle, "
                                    "latitude_arc, circular_arc, geodesic_polygon, geodesic, connect)");
}

class PathTable {
 public:
  PathTable(const Surface& s, std::optional<Section> table) : s_(s), table_(std::move(table)) {}

  const NamedPath& get(const std::string& name, const std::string& referenced_from) {
    if (auto it = cache_.find(name); it != cache_.end()) return it->second;
    std::optional<Section> entry;
    if (table_) entry = table_->opt_table(name);
    if (!entry) invalid(referenced_from, "no path named '" + name + "' in [paths]");
    return cache_.emplace(name, build_path(s_, *entry)).first->second;
  }
  const Loop& loop(const std::string& name, const std::string& referenced_from) {
    const NamedPath& p = get(name, referenced_from);
    if (!p.loop) invalid(referenced_from, "path '" + name + "' is not closed");
    return *p.loop;
  }

 private:
  const Surface& s_;
  std::optional<Section> table_;
  std::map<std::string, NamedPath> cache_;
};

PlotSeries chart_series(const std::string& label, const Path& p) {
  PlotSeries s{label, {}};
  for (const ChartPoint& q : p.samples()) s.points.push_back({q.u, q.v});
  return s;
}

// ---- commands -------------------------------------------------------------------------

struct Context {
  const Surface& surface;
  PathTable& paths;
  const Section& cmd;
  Outputs& out;
  std::uint64_t seed;
};

void run_transport(Context& c) {
  c.cmd.allow_only({"name", "path", "initial_angle", "step", "tolerance"});
  const std::string name = c.cmd.string("path");
  const NamedPath& np = c.paths.get(name, c.cmd.field("path"));
  TransportOptions opts;
  opts.step = c.cmd.positive("step", opts.step);
  opts.tolerance = c.cmd.positive("tolerance", opts.tolerance);
  const ChartPoint a = np.path.front();
  const double angle0 = c.cmd.number("initial_angle", 0.0);
  const auto v0 = frame_vector(c.surface.metric_at(a), angle0);
  const TransportResult r = parallel_transport(c.surface, np.path, TangentVector{a, v0[0], v0[1]}, opts);

  std::vector<std::vector<std::string>> rows;
  PlotSeries trace{"transported angle", {}};
  for (const auto& s : r.angle_trace) {
    rows.push_back({c.out.number(s.arclength), c.out.angle(s.angle)});
    trace.points.push_back({s.arclength, s.angle});
  }
  c.out.csv("transport.csv", {"arclength", "angle_unwrapped"}, rows);
  c.out.plot("transport.svg", {trace}, PlotKind::path_overlay,
             {"Parallel transport along " + name, "arclength", "angle (rad)"});
  c.out.add("path", name);
  c.out.add("total_rotation", c.out.angle(r.total_rotation));
  c.out.add("error_estimate", c.out.angle(r.error_estimate));
  if (np.loop) {
    const HolonomyResult h = loop_holonomy_detailed(c.surface, *np.loop, opts);
    c.out.add("holonomy", c.out.angle(h.holonomy));
    c.out.add("holonomy_mod_2pi", c.out.angle(h.wrapped));
    c.out.add("v_winding", std::to_string(np.loop->v_winding()));
  }
}

void run_chariot(Context& c) {
  c.cmd.allow_only({"name", "path", "width", "step", "widths"});
  const std::string name = c.cmd.string("path");
  const NamedPath& np = c.paths.get(name, c.cmd.field("path"));
  ChariotConfig cfg;
  cfg.width_w = c.cmd.positive("width", cfg.width_w);
  cfg.step = c.cmd.positive("step", cfg.step);
  const ChariotResult r = finite_chariot(c.surface, np.path, cfg);
  const std::vector<TangentVector> tangents = path_tangents(c.surface, np.path);
  const TransportResult continuum = parallel_transport(c.surface, np.path, tangents.front());

  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < np.path.size(); ++i) {
    rows.push_back({c.out.number(r.transport.angle_trace[i].arclength),
                    c.out.angle(r.transport.angle_trace[i].angle), c.out.number(r.d_left[i]),
                    c.out.number(r.d_right[i])});
  }
  c.out.csv("chariot.csv", {"arclength", "angle_unwrapped", "d_l", "d_r"}, rows);
  c.out.plot("chariot_tracks.svg",
             {chart_series("centre", np.path), chart_series("left wheel", r.left_track),
              chart_series("right wheel", r.right_track)},
             PlotKind::path_overlay, {"Chariot wheel tracks on " + c.surface.name(), "u", "v"});
  c.out.add("path", name);
  c.out.add("width", c.out.number(cfg.width_w));
  c.out.add("d_l_minus_d_r", c.out.number(r.d_left.back() - r.d_right.back()));
  c.out.add("total_rotation", c.out.angle(r.transport.total_rotation));
  c.out.add("continuum_rotation", c.out.angle(continuum.total_rotation));
  c.out.add("rotation_gap", c.out.angle(std::abs(r.transport.total_rotation - continuum.total_rotation)));

  const std::vector<double> widths = c.cmd.numbers("widths");
  if (!widths.empty()) {
    const auto conv = chariot_convergence(c.surface, np.path, widths);
    std::vector<std::vector<std::string>> crows;
    PlotSeries series{"|finite - continuum|", {}};
    bool positive = true;
    for (const auto& pt : conv) {
      crows.push_back({c.out.number(pt.width), c.out.angle(pt.error)});
      series.points.push_back({pt.width, pt.error});
      positive = positive && pt.error > 0.0;
    }
    c.out.csv("convergence.csv", {"width", "error"}, crows);
    if (positive) {
      c.out.plot("convergence.svg", {series}, PlotKind::convergence,
                 {"Chariot convergence", "width w", "rotation error (rad)"});
      c.out.add("empirical_order", c.out.number(empirical_order(conv)));
    }
  }
}

void write_path_csv(Context& c, const Surface& s, const Path& p) {
  const std::vector<double> arc = cumulative_length(s, p);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < p.size(); ++i) {
    rows.push_back({c.out.number(arc[i] / arc.back()), c.out.number(p[i].u), c.out.number(p[i].v),
                    c.out.number(arc[i])});
  }
  c.out.csv("geodesic.csv", {"t", "u", "v", "cumulative_length"}, rows);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void run_geodesic(Context& c) {
  c.cmd.allow_only({"name", "mode", "start", "heading", "length", "from", "to", "step",
                    "initial_angle", "probe_amplitude", "probe_mode"});
  const std::string mode = c.cmd.opt_string("mode").value_or(c.cmd.has("from") ? "connect" : "shoot");
  GeodesicOptions go;
  go.step = c.cmd.positive("step", go.step);
  std::optional<GeodesicShot> shot;
  if (mode == "shoot") {
    const ChartPoint a = c.cmd.point("start");
    const auto d = frame_vector(c.surface.metric_at(a), c.cmd.number("heading", 0.0));
    shot = shoot_geodesic(c.surface, a, TangentVector{a, d[0], d[1]}, c.cmd.positive("length", 1.0), go);
  } else if (mode == "connect") {
    std::optional<double> angle;
    if (auto a = c.cmd.opt_number("initial_angle")) angle = *a;
    shot = connect_geodesic(c.surface, c.cmd.point("from"), c.cmd.point("to"), go, angle);
  } else {
    invalid(c.cmd.field("mode"), "expected 'shoot' or 'connect'");
  }
  write_path_csv(c, c.surface, shot->result_path);
  c.out.plot("geodesic.svg", {chart_series("geodesic", shot->result_path)}, PlotKind::path_overlay,
             {"Geodesic on " + c.surface.name(), "u", "v"});
  c.out.add("mode", mode);
  c.out.add("length", c.out.number(shot->length));
  c.out.add("end_u", c.out.number(shot->result_path.back().u));
  c.out.add("end_v", c.out.number(shot->result_path.back().v));
  c.out.add("max_rotation_rate", c.out.number(max_abs(rotation_rates(c.surface, shot->result_path))));
  if (auto amp = c.cmd.opt_number("probe_amplitude")) {
    const int m = static_cast<int>(c.cmd.integer("probe_mode", 1, 1));
    const SecondVariation sv = second_variation_probe(c.surface, *shot, *amp, m);
    c.out.add("delta_length_left", c.out.number(sv.delta_length_left));
    c.out.add("delta_length_right", c.out.number(sv.delta_length_right));
  }
}

void run_relax(Context& c) {
  c.cmd.allow_only({"name", "path", "gain", "tol", "max_iterations"});
  const std::string name = c.cmd.string("path");
  const NamedPath& np = c.paths.get(name, c.cmd.field("path"));
  const RelaxationReport r =
      relax_to_geodesic(c.surface, np.path, c.cmd.number("gain", 0.0), c.cmd.positive("tol", 1e-6),
                        static_cast<int>(c.cmd.integer("max_iterations", 200000, 1)));
  write_path_csv(c, c.surface, r.final_path);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < r.length_history.size(); ++i) {
    rows.push_back({std::to_string(i), c.out.number(r.length_history[i]),
                    c.out.number(r.max_rate_history[i])});
  }
  c.out.csv("relaxation.csv", {"iteration", "length", "max_rotation_rate"}, rows);
  c.out.plot("relax.svg", {chart_series("initial", np.path), chart_series("relaxed", r.final_path)},
             PlotKind::path_overlay, {"Relaxation toward a geodesic", "u", "v"});
  c.out.add("path", name);
  c.out.add("iterations", std::to_string(r.iterations));
  c.out.add("converged", r.converged ? "true" : "false");
  c.out.add("initial_length", c.out.number(r.length_history.front()));
  c.out.add("final_length", c.out.number(r.length_history.back()));
  c.out.add("final_max_rotation_rate", c.out.number(r.final_max_rotation_rate));
}

std::vector<ChartPoint> point_set(const Context& c, const Surface& s) {
  if (c.cmd.has("points")) {
    auto pts = c.cmd.points("points");
    if (pts.empty()) invalid(c.cmd.field("points"), "needs at least one point");
    return pts;
  }
  if (auto g = c.cmd.opt_table("grid")) {
    g->allow_only({"u", "v", "n"});
    const auto u = g->pair("u"), v = g->pair("v"), n = g->pair("n");
    if (n[0] < 1 || n[1] < 1 || n[0] != std::round(n[0]) || n[1] != std::round(n[1])) {
      invalid(g->field("n"), "expected two positive integers");
    }
    std::vector<ChartPoint> pts;
    const int nu = static_cast<int>(n[0]), nv = static_cast<int>(n[1]);
    for (int i = 0; i < nu; ++i) {
      for (int j = 0; j < nv; ++j) {
        pts.push_back({nu == 1 ? u[0] : u[0] + (u[1] - u[0]) * i / (nu - 1),
                       nv == 1 ? v[0] : v[0] + (v[1] - v[0]) * j / (nv - 1)});
      }
    }
    return pts;
  }
  if (c.cmd.has("random")) {
    const auto n = c.cmd.integer("random", 10, 1);
    // Stay a tenth of the chart away from the u-edges so every stencil fits.
    const ChartDomain& d = s.domain();
    const double margin = d.periodic_u ? 0.0 : 0.1 * (d.u_max - d.u_min);
    const double vmargin = d.periodic_v ? 0.0 : 0.1 * (d.v_max - d.v_min);
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> uu(d.u_min + margin, d.u_max - margin);
    std::uniform_real_distribution<double> vv(d.v_min + vmargin, d.v_max - vmargin);
    std::vector<ChartPoint> pts;
    for (std::int64_t i = 0; i < n; ++i) {
      const double u = uu(rng);
      pts.push_back({u, vv(rng)});
    }
    return pts;
  }
  invalid(c.cmd.name(), "give one of points, grid or random");
}

void run_curvature(Context& c) {
  c.cmd.allow_only({"name", "points", "grid", "random", "scales", "aspect"});
  const auto pts = point_set(c, c.surface);
  std::vector<double> scales = c.cmd.numbers("scales");
  if (scales.empty()) scales = default_curvature_scales(c.surface);
  CurvatureOptions opts;
  if (auto a = c.cmd.opt_pair("aspect")) {
    opts.aspect_u = (*a)[0];
    opts.aspect_v = (*a)[1];
  }
  const auto est = curvature_field(c.surface, pts, scales, opts);
  std::vector<double> extrinsic(pts.size(), std::nan(""));
  if (c.surface.has_embedding()) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      extrinsic[i] = quadratic_fit_curvature(c.surface, pts[i]).curvature();
    }
  }
  std::vector<std::vector<std::string>> rows;
  double lo = est[0].extrapolated, hi = lo, sum = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    rows.push_back({c.out.number(pts[i].u), c.out.number(pts[i].v), c.out.number(est[i].extrapolated),
                    c.out.number(extrinsic[i]), c.out.number(est[i].error_estimate)});
    lo = std::min(lo, est[i].extrapolated);
    hi = std::max(hi, est[i].extrapolated);
    sum += est[i].extrapolated;
    worst = std::max(worst, est[i].error_estimate);
  }
  c.out.csv("curvature.csv", {"u", "v", "K_intrinsic", "K_extrinsic", "error_estimate"}, rows);
  c.out.add("points", std::to_string(pts.size()));
  c.out.add("K_mean", c.out.number(sum / static_cast<double>(pts.size())));
  c.out.add("K_min", c.out.number(lo));
  c.out.add("K_max", c.out.number(hi));
  c.out.add("max_error_estimate", c.out.number(worst));
}

void run_gaussbonnet(Context& c) {
  c.cmd.allow_only({"name", "region", "grid", "scales"});
  const std::string name = c.cmd.string("region");
  const RegionBoundary region(c.paths.loop(name, c.cmd.field("region")));
  const std::vector<double> scales = c.cmd.numbers("scales");
  const GaussBonnetResult r =
      gauss_bonnet_check(c.surface, region, static_cast<int>(c.cmd.integer("grid", 8, 4)), scales);
  c.out.csv("gaussbonnet.csv", {"holonomy", "integral", "residual"},
            {{c.out.angle(r.holonomy), c.out.angle(r.integral), c.out.angle(r.residual)}});
  c.out.add("region", name);
  c.out.add("holonomy", c.out.angle(r.holonomy));
  c.out.add("integral", c.out.angle(r.integral));
  c.out.add("residual", c.out.angle(r.residual));
  c.out.add("area", c.out.number(area_of_region(c.surface, region.loop().path().samples())));
  c.out.add("quadrature_nodes", std::to_string(r.nodes));
}

void run_polygon(Context& c) {
  c.cmd.allow_only({"name", "vertices", "step"});
  const auto v = c.cmd.points("vertices");
  if (v.size() < 3) invalid(c.cmd.field("vertices"), "needs at least three vertices");
  GeodesicOptions go;
  go.step = c.cmd.positive("step", go.step);
  const AngleExcess r = polygon_angle_excess(c.surface, v, go);
  std::vector<std::vector<std::string>> rows;
  double interior = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    rows.push_back({std::to_string(i), c.out.number(v[i].u), c.out.number(v[i].v),
                    c.out.angle(r.exterior_angles[i]), c.out.angle(r.interior_angles[i])});
    interior += r.interior_angles[i];
  }
  c.out.csv("polygon.csv", {"vertex", "u", "v", "exterior_angle", "interior_angle"}, rows);
  c.out.add("exterior_angle_sum", c.out.angle(r.exterior_angle_sum));
  c.out.add("interior_angle_sum", c.out.angle(interior));
  c.out.add("angle_excess", c.out.angle(interior - (static_cast<double>(v.size()) - 2.0) * kPi));
  c.out.add("holonomy", c.out.angle(r.holonomy));
  c.out.add("orientation", r.orientation > 0 ? "positive" : "negative");
}

void run_mapcheck(Context& c) {
  c.cmd.allow_only({"name", "projection", "pairs", "scale", "region"});
  const std::string proj = c.cmd.opt_string("projection").value_or("mercator");
  const FlatMap m = builtin_projection(proj, c.surface, c.cmd.positive("scale", 1.0));
  const DistortionReport r =
      distortion_report(m, c.surface, static_cast<int>(c.cmd.integer("pairs", 200, 10)), c.seed);
  std::vector<std::vector<std::string>> rows;
  PlotSeries ratios{proj, {}};
  for (const PairSample& p : r.samples) {
    rows.push_back({c.out.angle(0.5 * kPi - p.first.u), c.out.angle(p.first.v),
                    c.out.angle(0.5 * kPi - p.second.u), c.out.angle(p.second.v),
                    c.out.number(p.true_distance), c.out.number(p.map_distance), c.out.number(p.ratio)});
    ratios.points.push_back({p.ratio, 0.0});
  }
  c.out.csv("mapcheck.csv", {"lat1", "lon1", "lat2", "lon2", "true_dist", "map_dist", "ratio"}, rows);
  c.out.plot("ratio_histogram.svg", {ratios}, PlotKind::ratio_histogram,
             {"Distance ratio map/true (" + proj + ")", "ratio", "pairs"});
  c.out.add("projection", proj);
  c.out.add("pole_cutoff", c.out.angle(m.pole_cutoff));
  c.out.add("pairs", std::to_string(r.samples.size()));
  c.out.add("skipped_pairs", std::to_string(r.skipped.size()));
  c.out.add("min_ratio", c.out.number(r.min_ratio));
  c.out.add("max_ratio", c.out.number(r.max_ratio));
  c.out.add("ratio_spread", c.out.number(r.spread()));
  std::string line = proj + ": " + std::to_string(r.samples.size()) + " pairs, ratio in [" +
                     c.out.number(r.min_ratio) + ", " + c.out.number(r.max_ratio) + "], spread " +
                     c.out.number(r.spread()) + (r.spread() > 1.0 + 1e-9 ? ", not distance-true" : "");
  if (c.cmd.has("region")) {
    const std::string name = c.cmd.string("region");
    const RegionBoundary region(c.paths.loop(name, c.cmd.field("region")));
    const ObstructionVerdict v = holonomy_obstruction(c.surface, region);
    c.out.add("obstruction_region", name);
    c.out.add("obstruction_holonomy", c.out.angle(v.holonomy));
    c.out.add("obstruction_certified", v.certified ? "true" : "false");
    line += v.certified ? "; holonomy obstruction certified" : "; no holonomy obstruction";
  }
  c.out.add("summary_line", "\"" + line + "\"");
}

void run_egregium(Context& c) {
  c.cmd.allow_only({"name", "points", "grid", "random"});
  const auto pts = point_set(c, c.surface);
  const auto rowsdata = egregium_check(c.surface, pts);
  std::vector<std::vector<std::string>> rows;
  double worst = 0.0;
  for (const auto& r : rowsdata) {
    rows.push_back({c.out.number(r.point.u), c.out.number(r.point.v), c.out.number(r.intrinsic),
                    c.out.number(r.extrinsic), c.out.number(r.relative_gap)});
    worst = std::max(worst, r.relative_gap);
  }
  c.out.csv("egregium.csv", {"u", "v", "K_intrinsic", "K_extrinsic", "relative_gap"}, rows);
  c.out.add("points", std::to_string(pts.size()));
  c.out.add("max_relative_gap", c.out.number(worst));
}

Surface surface_from(const Section& root) {
  const auto st = root.opt_table("surface");
  if (!st) invalid("surface", "required table is missing");
  st->allow_only({"kind", "params"});
  const std::string kind = st->string("kind");
  const std::vector<double> params = st->numbers("params");
  try {
    return builtin_surface(kind, params);
  } catch (const InvalidArgument& e) {
    invalid(st->field("kind"), e.what());
  }
}

toml::table surface_shorthand(const std::string& shorthand) {
  const auto colon = shorthand.find(':');
  toml::table surface;
  surface.insert("kind", shorthand.substr(0, colon));
  toml::array params;
  if (colon != std::string::npos) {
    std::stringstream ss(shorthand.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        params.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        invalid("--surface", "bad parameter '" + item + "'");
      }
    }
  }
  surface.insert("params", params);
  toml::table root;
  root.insert("surface", surface);
  return root;
}

}  // namespace

ScenarioResult run_scenario(std::string_view config_text, const RunOptions& options,
                            std::string_view source_name) {
  toml::table root = parse_toml(config_text, source_name);
  if (options.surface) {
    root.erase("surface");
    merge_into(root, surface_shorthand(*options.surface));
  }
  for (std::size_t i = 0; i < options.overrides.size(); ++i) {
    merge_into(root, parse_toml(options.overrides[i], "--set #" + std::to_string(i + 1)));
  }
  if (options.command) {
    if (!root.contains("command")) root.insert("command", toml::table{});
    if (auto* t = root.get("command")->as_table()) t->insert_or_assign("name", *options.command);
  }

  const Section top(root, "");
  top.allow_only({"seed", "surface", "paths", "command", "output"});
  std::uint64_t seed = static_cast<std::uint64_t>(top.integer("seed", 0, 0));
  if (options.seed) seed = *options.seed;

  const Surface surface = surface_from(top);
  const auto cmd = top.opt_table("command");
  if (!cmd) invalid("command", "required table is missing");
  const std::string name = cmd->string("name");
  const auto& known = scenario_commands();
  if (std::find(known.begin(), known.end(), name) == known.end()) {
    invalid(cmd->field("name"), "unknown command '" + name + "'");
  }

  std::filesystem::path dir = "out";
  bool svg = options.svg, degrees = options.degrees;
  if (auto o = top.opt_table("output")) {
    o->allow_only({"dir", "formats", "degrees"});
    if (auto d = o->opt_string("dir")) dir = *d;
    if (auto deg = o->opt_bool("degrees")) degrees = degrees || *deg;
    if (const toml::node* f = o->raw().get("formats")) {
      const auto* arr = f->as_array();
      if (!arr) invalid(o->field("formats"), "expected an array of strings");
      for (const auto& e : *arr) {
        const auto* s = e.as_string();
        if (!s || (s->get() != "csv" && s->get() != "svg")) {
          invalid(o->field("formats"), "allowed formats are \"csv\" and \"svg\"");
        }
        svg = svg || s->get() == "svg";
      }
    }
  }
  if (options.out_dir) dir = *options.out_dir;

  PathTable paths(surface, top.opt_table("paths"));
  Outputs out(dir, svg, degrees);
  out.add("command", name);
  out.add("surface", surface.name());
  out.add("seed", std::to_string(seed));
  out.add("angle_unit", degrees ? "degrees" : "radians");
  Context ctx{surface, paths, *cmd, out, seed};
  if (name == "transport") run_transport(ctx);
  else if (name == "chariot") run_chariot(ctx);
  else if (name == "geodesic") run_geodesic(ctx);
  else if (name == "relax") run_relax(ctx);
  else if (name == "curvature") run_curvature(ctx);
  else if (name == "gaussbonnet") run_gaussbonnet(ctx);
  else if (name == "polygon") run_polygon(ctx);
  else if (name == "mapcheck") run_mapcheck(ctx);
  else run_egregium(ctx);
  return out.finish();
}

}  // namespace chariot
