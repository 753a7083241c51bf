#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kleinflow {

/// Minimal static line plot (SVG 1.1): axes with ticks, polylines, labels.
/// Data coordinates are (x, y); y grows upward.
class SvgPlot {
public:
  SvgPlot(double x_min, double x_max, double y_min, double y_max, std::string title = {},
          std::string x_label = {}, std::string y_label = {})
      : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max),
        title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                double width = 1.0, const std::string& dash = {}) {
    if (pts.size() < 2) return;
    std::ostringstream s;
    s << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
      << "\"";
    if (!dash.empty()) s << " stroke-dasharray=\"" << dash << "\"";
    s << " points=\"";
    for (const auto& [x, y] : pts) s << px(x) << "," << py(y) << " ";
    s << "\"/>\n";
    shapes_ += s.str();
  }

  void vline(double x, const std::string& color, double width = 1.0,
             const std::string& dash = "4,4") {
    polyline({{x, y_min_}, {x, y_max_}}, color, width, dash);
  }

  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
        << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
        << "  <rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    out << frame();
    out << shapes_;
    out << "</svg>\n";
  }

private:
  static constexpr int W = 820, H = 620;
  static constexpr int ML = 70, MR = 20, MT = 40, MB = 50;

  double px(double x) const {
    return ML + (x - x_min_) / (x_max_ - x_min_) * (W - ML - MR);
  }
  double py(double y) const {
    return H - MB - (y - y_min_) / (y_max_ - y_min_) * (H - MT - MB);
  }

  static std::vector<double> ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 8.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
      if (raw <= m * mag) { step = m * mag; break; }
    }
    std::vector<double> out;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) {
      out.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
    }
    return out;
  }

  static std::string num(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
  }

  std::string frame() const {
    std::ostringstream s;
    s << "  <rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << (W - ML - MR)
      << "\" height=\"" << (H - MT - MB)
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (double t : ticks(x_min_, x_max_)) {
      const double x = px(t);
      s << "  <line x1=\"" << x << "\" y1=\"" << (H - MB) << "\" x2=\"" << x << "\" y2=\""
        << (H - MB + 5) << "\" stroke=\"black\"/>\n";
      s << "  <text x=\"" << x << "\" y=\"" << (H - MB + 18)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << num(t) << "</text>\n";
    }
    for (double t : ticks(y_min_, y_max_)) {
      const double y = py(t);
      s << "  <line x1=\"" << (ML - 5) << "\" y1=\"" << y << "\" x2=\"" << ML << "\" y2=\""
        << y << "\" stroke=\"black\"/>\n";
      s << "  <text x=\"" << (ML - 8) << "\" y=\"" << (y + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << num(t) << "</text>\n";
    }
    if (!title_.empty()) {
      s << "  <text x=\"" << (W / 2) << "\" y=\"" << (MT - 14)
        << "\" font-size=\"14\" text-anchor=\"middle\">" << title_ << "</text>\n";
    }
    if (!x_label_.empty()) {
      s << "  <text x=\"" << (W / 2) << "\" y=\"" << (H - 10)
        << "\" font-size=\"12\" text-anchor=\"middle\">" << x_label_ << "</text>\n";
    }
    if (!y_label_.empty()) {
      s << "  <text x=\"16\" y=\"" << (H / 2)
        << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (H / 2) << ")\">" << y_label_ << "</text>\n";
    }
    return s.str();
  }

  double x_min_, x_max_, y_min_, y_max_;
  std::string title_, x_label_, y_label_;
  std::string shapes_;
};

}  // namespace kleinflow
