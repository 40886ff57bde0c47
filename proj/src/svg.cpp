#include "chariot/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "chariot/errors.hpp"

namespace chariot {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo, hi;
  bool log;
  double map(double x, double a, double b) const {
    const double t = log ? (std::log10(x) - std::log10(lo)) / (std::log10(hi) - std::log10(lo))
                         : (x - lo) / (hi - lo);
    return a + t * (b - a);
  }
  std::vector<double> ticks() const {
    std::vector<double> t;
    if (log) {
      for (double e = std::floor(std::log10(lo)); e <= std::ceil(std::log10(hi)); e += 1.0) {
        const double v = std::pow(10.0, e);
        if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) t.push_back(v);
      }
      if (t.size() < 2) t = {lo, hi};
      return t;
    }
    for (int i = 0; i <= 4; ++i) t.push_back(lo + (hi - lo) * i / 4.0);
    return t;
  }
};

Axis make_axis(double lo, double hi, bool log) {
  if (log) {
    if (!(lo > 0.0)) throw InvalidArgument("emit_svg_plot: log axis needs positive data");
    if (lo == hi) return {lo / 2, hi * 2, true};
    const double pad = std::pow(hi / lo, 0.05);
    return {lo / pad, hi * pad, true};
  }
  if (lo == hi) return {lo - 1.0, hi + 1.0, false};
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad, false};
}

}  // namespace

std::string emit_svg_plot(const std::vector<PlotSeries>& series, PlotKind kind,
                          const PlotLabels& labels) {
  if (series.empty()) throw InvalidArgument("emit_svg_plot: no series");
  for (const auto& s : series) {
    if (s.points.empty()) throw InvalidArgument("emit_svg_plot: series '" + s.label + "' is empty");
  }

  // Histograms are drawn as step outlines, so every kind reduces to polylines.
  std::vector<PlotSeries> drawn = series;
  if (kind == PlotKind::ratio_histogram) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& s : series) {
      for (const auto& p : s.points) {
        lo = std::min(lo, p[0]);
        hi = std::max(hi, p[0]);
      }
    }
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
    constexpr int kBins = 30;
    const double w = (hi - lo) / kBins;
    for (std::size_t k = 0; k < series.size(); ++k) {
      std::vector<int> counts(kBins, 0);
      for (const auto& p : series[k].points) {
        counts[static_cast<std::size_t>(std::clamp(static_cast<int>((p[0] - lo) / w), 0, kBins - 1))]++;
      }
      auto& pts = drawn[k].points;
      pts.clear();
      pts.push_back({lo, 0.0});
      for (int b = 0; b < kBins; ++b) {
        pts.push_back({lo + b * w, static_cast<double>(counts[static_cast<std::size_t>(b)])});
        pts.push_back({lo + (b + 1) * w, static_cast<double>(counts[static_cast<std::size_t>(b)])});
      }
      pts.push_back({hi, 0.0});
    }
  }

  const bool log = kind == PlotKind::convergence;
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const auto& s : drawn) {
    for (const auto& p : s.points) {
      xlo = std::min(xlo, p[0]);
      xhi = std::max(xhi, p[0]);
      ylo = std::min(ylo, p[1]);
      yhi = std::max(yhi, p[1]);
    }
  }
  const Axis ax = make_axis(xlo, xhi, log), ay = make_axis(ylo, yhi, log);
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!labels.title.empty()) {
    svg << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(labels.title) << "</text>\n";
  }
  svg << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\"" << y0 - y1
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ax.ticks()) {
    const double x = ax.map(t, x0, x1);
    svg << "<line x1=\"" << num(x) << "\" y1=\"" << y0 << "\" x2=\"" << num(x) << "\" y2=\"" << y0 + 5
        << "\" stroke=\"black\"/><text x=\"" << num(x) << "\" y=\"" << y0 + 18
        << "\" text-anchor=\"middle\">" << num(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = ay.map(t, y0, y1);
    svg << "<line x1=\"" << x0 - 5 << "\" y1=\"" << num(y) << "\" x2=\"" << x0 << "\" y2=\"" << num(y)
        << "\" stroke=\"black\"/><text x=\"" << x0 - 8 << "\" y=\"" << num(y + 4)
        << "\" text-anchor=\"end\">" << num(t) << "</text>\n";
  }
  svg << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
      << escape(labels.x_axis) << "</text>\n"
      << "<text x=\"18\" y=\"" << num((y0 + y1) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << num((y0 + y1) / 2) << ")\">" << escape(labels.y_axis) << "</text>\n";

  for (std::size_t k = 0; k < drawn.size(); ++k) {
    const char* colour = kPalette[k % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < drawn[k].points.size(); ++i) {
      const auto& p = drawn[k].points[i];
      svg << (i ? " " : "") << num(ax.map(p[0], x0, x1)) << ',' << num(ay.map(p[1], y0, y1));
    }
    svg << "\"/>\n";
    if (kind == PlotKind::convergence) {
      for (const auto& p : drawn[k].points) {
        svg << "<circle cx=\"" << num(ax.map(p[0], x0, x1)) << "\" cy=\"" << num(ay.map(p[1], y0, y1))
            << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
      }
    }
    const double ly = y1 + 10 + 20.0 * static_cast<double>(k);
    svg << "<line x1=\"" << x1 + 15 << "\" y1=\"" << num(ly) << "\" x2=\"" << x1 + 40 << "\" y2=\""
        << num(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/><text x=\"" << x1 + 46
        << "\" y=\"" << num(ly + 4) << "\">" << escape(drawn[k].label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace chariot
