#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "slucb/experiment.hpp"

namespace slucb {

namespace {

constexpr double kWidth = 880.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 660.0;   // plot-area right edge; legend sits beyond
constexpr double kTop = 30.0;
constexpr double kBottom = 460.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

std::string render_chart(std::span<const Curve> curves) {
  if (curves.empty()) throw std::invalid_argument("render_chart: no curves");
  double x_max = 0.0;
  double y_max = 0.0;
  for (const Curve& c : curves) {
    if (c.points.empty())
      throw std::invalid_argument("render_chart: curve without points: " +
                                  c.label);
    x_max = std::max(x_max, static_cast<double>(c.points.back().t));
    // Axis rule: the largest final mean regret across curves.
    y_max = std::max(y_max, c.points.back().mean);
  }
  if (x_max <= 0.0) x_max = 1.0;
  if (y_max <= 0.0) y_max = 1.0;

  const auto px = [&](double t) {
    return kLeft + t / x_max * (kRight - kLeft);
  };
  const auto py = [&](double v) {
    return kBottom - v / y_max * (kBottom - kTop);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth, "%.0f") +
         "\" height=\"" + fmt(kHeight, "%.0f") + "\" viewBox=\"0 0 " +
         fmt(kWidth, "%.0f") + " " + fmt(kHeight, "%.0f") + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<clipPath id=\"plot\"><rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) +
         "\" width=\"" + fmt(kRight - kLeft) + "\" height=\"" +
         fmt(kBottom - kTop) + "\"/></clipPath>\n";

  // axes
  svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kBottom) + "\" x2=\"" +
         fmt(kRight) + "\" y2=\"" + fmt(kBottom) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" +
         fmt(kLeft) + "\" y2=\"" + fmt(kBottom) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x_max * i / 5.0;
    const double yv = y_max * i / 5.0;
    svg += "<line x1=\"" + fmt(px(xv)) + "\" y1=\"" + fmt(kBottom) + "\" x2=\"" +
           fmt(px(xv)) + "\" y2=\"" + fmt(kBottom + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(px(xv)) + "\" y=\"" + fmt(kBottom + 20) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + fmt(xv, "%.6g") +
           "</text>\n";
    svg += "<line x1=\"" + fmt(kLeft - 5) + "\" y1=\"" + fmt(py(yv)) + "\" x2=\"" +
           fmt(kLeft) + "\" y2=\"" + fmt(py(yv)) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(kLeft - 10) + "\" y=\"" + fmt(py(yv) + 4) +
           "\" font-size=\"12\" text-anchor=\"end\">" + fmt(yv, "%.6g") +
           "</text>\n";
  }
  svg += "<text x=\"" + fmt((kLeft + kRight) / 2) + "\" y=\"" +
         fmt(kHeight - 15) +
         "\" font-size=\"14\" text-anchor=\"middle\">round t</text>\n";
  svg += "<text x=\"20\" y=\"" + fmt((kTop + kBottom) / 2) +
         "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
         fmt((kTop + kBottom) / 2) + ")\">cumulative regret</text>\n";

  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const Curve& curve = curves[ci];
    const char* color = kPalette[ci % (sizeof(kPalette) / sizeof(kPalette[0]))];

    // standard-error band
    std::string band = "<path clip-path=\"url(#plot)\" d=\"M";
    for (const CurvePoint& p : curve.points) {
      band += fmt(px(static_cast<double>(p.t))) + "," + fmt(py(p.mean + p.se)) + " L";
    }
    band.pop_back();  // trailing 'L'
    for (auto it = curve.points.rbegin(); it != curve.points.rend(); ++it) {
      band += "L" + fmt(px(static_cast<double>(it->t))) + "," +
              fmt(py(it->mean - it->se)) + " ";
    }
    band += "Z\" fill=\"" + std::string(color) +
            "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    svg += band;

    std::string line = "<polyline clip-path=\"url(#plot)\" points=\"";
    for (const CurvePoint& p : curve.points) {
      line += fmt(px(static_cast<double>(p.t))) + "," + fmt(py(p.mean)) + " ";
    }
    line += "\" fill=\"none\" stroke=\"" + std::string(color) +
            "\" stroke-width=\"1.5\"/>\n";
    svg += line;

    const double ly = kTop + 20.0 * static_cast<double>(ci);
    svg += "<line x1=\"" + fmt(kRight + 15) + "\" y1=\"" + fmt(ly) + "\" x2=\"" +
           fmt(kRight + 45) + "\" y2=\"" + fmt(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt(kRight + 50) + "\" y=\"" + fmt(ly + 4) +
           "\" font-size=\"12\">" + curve.label + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void emit_chart(std::span<const Curve> curves, const std::string& path) {
  const std::string svg = render_chart(curves);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << svg;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace slucb
