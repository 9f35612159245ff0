#include "svg.hh"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "errors.hh"

namespace sh {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 48;

const char* kPalette[] = {"#1f6fb2", "#c24d2c", "#2c8a4b", "#7a4dbf", "#b28a1f", "#4d7a8a"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round the span outward to about eight tidy ticks.
std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double s : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (mag * s >= raw) {
      step = mag * s;
      break;
    }
  }
  std::vector<double> out;
  double t = std::ceil(lo / step) * step;
  for (; t <= hi + 1e-12 * span; t += step) out.push_back(t);
  return out;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  require(!spec.series.empty(), ErrorCode::invalid_argument, "svg: no series");
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  std::size_t points = 0;
  for (const auto& s : spec.series) {
    require(s.xs.size() == s.ys.size(), ErrorCode::invalid_argument, "svg: size mismatch");
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      require(std::isfinite(s.xs[i]) && std::isfinite(s.ys[i]),
              ErrorCode::invalid_argument, "svg: non-finite point");
      xlo = std::min(xlo, s.xs[i]);
      xhi = std::max(xhi, s.xs[i]);
      ylo = std::min(ylo, s.ys[i]);
      yhi = std::max(yhi, s.ys[i]);
      ++points;
    }
  }
  require(points > 0, ErrorCode::invalid_argument, "svg: no points");
  if (xhi - xlo < 1e-12) { xlo -= 0.5; xhi += 0.5; }
  if (yhi - ylo < 1e-12) { ylo -= 0.5; yhi += 0.5; }
  const double xpad = 0.04 * (xhi - xlo), ypad = 0.06 * (yhi - ylo);
  xlo -= xpad; xhi += xpad; ylo -= ypad; yhi += ypad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto px = [&](double x) { return kMarginLeft + plot_w * (x - xlo) / (xhi - xlo); };
  const auto py = [&](double y) { return kMarginTop + plot_h * (yhi - y) / (yhi - ylo); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
         "\" height=\"" + std::to_string(kHeight) + "\" viewBox=\"0 0 " +
         std::to_string(kWidth) + " " + std::to_string(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + std::to_string(kWidth / 2) +
         "\" y=\"22\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"14\">" +
         escape(spec.title) + "</text>\n";

  for (double t : ticks(xlo, xhi)) {
    const double x = px(t);
    svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(double(kMarginTop)) + "\" x2=\"" +
           num(x) + "\" y2=\"" + num(double(kHeight - kMarginBottom)) +
           "\" stroke=\"#dddddd\"/>\n";
    svg += "<text x=\"" + num(x) + "\" y=\"" + num(double(kHeight - kMarginBottom + 16)) +
           "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"10\">" + num(t) +
           "</text>\n";
  }
  for (double t : ticks(ylo, yhi)) {
    const double y = py(t);
    svg += "<line x1=\"" + num(double(kMarginLeft)) + "\" y1=\"" + num(y) + "\" x2=\"" +
           num(double(kWidth - kMarginRight)) + "\" y2=\"" + num(y) +
           "\" stroke=\"#dddddd\"/>\n";
    svg += "<text x=\"" + num(double(kMarginLeft - 6)) + "\" y=\"" + num(y + 3) +
           "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">" + num(t) +
           "</text>\n";
  }
  svg += "<rect x=\"" + num(double(kMarginLeft)) + "\" y=\"" + num(double(kMarginTop)) +
         "\" width=\"" + num(plot_w) + "\" height=\"" + num(plot_h) +
         "\" fill=\"none\" stroke=\"#333333\"/>\n";
  svg += "<text x=\"" + std::to_string(kMarginLeft + int(plot_w) / 2) + "\" y=\"" +
         std::to_string(kHeight - 10) +
         "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">" +
         escape(spec.x_label) + "</text>\n";
  svg += "<text x=\"14\" y=\"" + std::to_string(kMarginTop + int(plot_h) / 2) +
         "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\" transform=\"rotate(-90 14 " +
         std::to_string(kMarginTop + int(plot_h) / 2) + ")\">" + escape(spec.y_label) +
         "</text>\n";

  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const auto& s = spec.series[k];
    const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
    if (s.line && s.xs.size() >= 2) {
      std::string pts;
      for (std::size_t i = 0; i < s.xs.size(); ++i) {
        if (i) pts += " ";
        pts += num(px(s.xs[i])) + "," + num(py(s.ys[i]));
      }
      svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"1.5\"/>\n";
    } else {
      for (std::size_t i = 0; i < s.xs.size(); ++i)
        svg += "<circle cx=\"" + num(px(s.xs[i])) + "\" cy=\"" + num(py(s.ys[i])) +
               "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
    }
    const int ly = kMarginTop + 14 + 16 * int(k);
    svg += "<rect x=\"" + std::to_string(kWidth - kMarginRight - 150) + "\" y=\"" +
           std::to_string(ly - 9) + "\" width=\"10\" height=\"10\" fill=\"" + color +
           "\"/>\n";
    svg += "<text x=\"" + std::to_string(kWidth - kMarginRight - 136) + "\" y=\"" +
           std::to_string(ly) + "\" font-family=\"monospace\" font-size=\"10\">" +
           escape(s.label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_svg(const PlotSpec& spec, const std::string& path) {
  const std::string body = render_svg(spec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorCode::io_error, "svg: cannot open " + path);
  out.write(body.data(), std::streamsize(body.size()));
  out.flush();
  require(out.good(), ErrorCode::io_error, "svg: write failed for " + path);
}

}  // namespace sh
