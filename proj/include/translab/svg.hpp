#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

// Minimal SVG emitters for run artifacts: a heatmap, a scatter of classified points, and a
// line plot. Output is deterministic (fixed 6-digit coordinates).

namespace translab::svg {

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double x) {
    if (!std::isfinite(x)) return;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  bool empty() const { return !(lo <= hi); }
  double span() const { return hi > lo ? hi - lo : 1.0; }
  double unit(double x) const { return (x - lo) / span(); }
};

/// Viridis-like ramp from dark blue through teal to yellow.
inline std::string ramp(double t) {
  t = std::clamp(t, 0.0, 1.0);
  static const double stops[5][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  const double x = t * 4.0;
  const int k = std::min(3, static_cast<int>(x));
  const double f = x - k;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(stops[k][0] + f * (stops[k + 1][0] - stops[k][0]))),
                static_cast<int>(std::lround(stops[k][1] + f * (stops[k + 1][1] - stops[k][1]))),
                static_cast<int>(std::lround(stops[k][2] + f * (stops[k + 1][2] - stops[k][2]))));
  return buf;
}

class Canvas {
 public:
  Canvas(double width, double height, std::string title) : w_(width), h_(height) {
    out_ << std::fixed << std::setprecision(6);
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_ << "\" viewBox=\"0 0 " << w_
         << ' ' << h_ << "\">\n";
    out_ << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    text(w_ / 2, 20, title, 14, "middle");
  }

  void rect(double x, double y, double w, double h, const std::string& fill) {
    out_ << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w << "\" height=\"" << h << "\" fill=\"" << fill
         << "\"/>\n";
  }
  void circle(double x, double y, double r, const std::string& fill) {
    out_ << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"" << r << "\" fill=\"" << fill << "\"/>\n";
  }
  void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1.0) {
    out_ << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2 << "\" stroke=\"" << stroke
         << "\" stroke-width=\"" << width << "\"/>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke) {
    out_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts) out_ << x << ',' << y << ' ';
    out_ << "\"/>\n";
  }
  void text(double x, double y, const std::string& s, int size = 11, const char* anchor = "start") {
    out_ << "<text x=\"" << x << "\" y=\"" << y << "\" font-family=\"sans-serif\" font-size=\"" << size
         << "\" text-anchor=\"" << anchor << "\">" << escape(s) << "</text>\n";
  }
  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  static std::string escape(const std::string& s) {
    std::string r;
    for (char c : s) {
      if (c == '<') r += "&lt;";
      else if (c == '>') r += "&gt;";
      else if (c == '&') r += "&amp;";
      else r += c;
    }
    return r;
  }
  double w_, h_;
  std::ostringstream out_;
};

inline std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(4) << x;
  return s.str();
}

/// Plot area with a margin for axis labels; maps data ranges into pixels (y up).
struct Frame {
  double left = 60, top = 35, width = 420, height = 320;
  Range xr, yr;

  double px(double x) const { return left + xr.unit(x) * width; }
  double py(double y) const { return top + height - yr.unit(y) * height; }

  void axes(Canvas& c, const std::string& xlabel, const std::string& ylabel) const {
    c.line(left, top + height, left + width, top + height, "black");
    c.line(left, top, left, top + height, "black");
    c.text(left, top + height + 15, fmt(xr.lo), 10, "middle");
    c.text(left + width, top + height + 15, fmt(xr.hi), 10, "middle");
    c.text(left - 5, top + height, fmt(yr.lo), 10, "end");
    c.text(left - 5, top + 10, fmt(yr.hi), 10, "end");
    c.text(left + width / 2, top + height + 30, xlabel, 11, "middle");
    c.text(12, top + height / 2, ylabel, 11, "start");
  }
};

/// values[row][col], row 0 at the bottom; NaN cells are left blank.
inline std::string heatmap(const std::vector<std::vector<double>>& values, Range xr, Range yr, const std::string& title,
                           const std::string& xlabel, const std::string& ylabel) {
  Canvas c(560, 400, title);
  Frame f;
  f.xr = xr;
  f.yr = yr;
  Range vr;
  for (const auto& row : values)
    for (double v : row) vr.include(v);
  const std::size_t rows = values.size(), cols = rows ? values[0].size() : 0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < cols; ++k) {
      const double v = values[r][k];
      if (!std::isfinite(v)) continue;
      const double cw = f.width / static_cast<double>(cols), ch = f.height / static_cast<double>(rows);
      c.rect(f.left + static_cast<double>(k) * cw, f.top + f.height - static_cast<double>(r + 1) * ch, cw + 0.05, ch + 0.05,
             ramp(vr.empty() ? 0.0 : vr.unit(v)));
    }
  }
  f.axes(c, xlabel, ylabel);
  // Color bar.
  for (int k = 0; k < 50; ++k) c.rect(f.left + f.width + 20, f.top + f.height - (k + 1) * f.height / 50, 14, f.height / 50 + 0.05, ramp(k / 49.0));
  if (!vr.empty()) {
    c.text(f.left + f.width + 38, f.top + f.height, fmt(vr.lo), 10);
    c.text(f.left + f.width + 38, f.top + 10, fmt(vr.hi), 10);
  }
  return c.finish();
}

struct Point {
  double x, y;
  int cls;  // index into the palette
};

inline std::string scatter(const std::vector<Point>& pts, const std::vector<std::pair<std::string, std::string>>& legend,
                           const std::string& title, const std::string& xlabel, const std::string& ylabel) {
  Canvas c(560, 400, title);
  Frame f;
  for (const auto& p : pts) {
    f.xr.include(p.x);
    f.yr.include(p.y);
  }
  // Equal aspect: widen the smaller range.
  const double half = 0.5 * std::max(f.xr.span(), f.yr.span());
  const double cx = 0.5 * (f.xr.lo + f.xr.hi), cy = 0.5 * (f.yr.lo + f.yr.hi);
  f.xr = {cx - half, cx + half};
  f.yr = {cy - half, cy + half};
  f.width = f.height;
  for (const auto& p : pts) c.circle(f.px(p.x), f.py(p.y), 1.6, legend[static_cast<std::size_t>(p.cls)].second);
  f.axes(c, xlabel, ylabel);
  for (std::size_t k = 0; k < legend.size(); ++k) {
    c.circle(f.left + f.width + 25, f.top + 10 + 18 * static_cast<double>(k), 4, legend[k].second);
    c.text(f.left + f.width + 35, f.top + 14 + 18 * static_cast<double>(k), legend[k].first, 10);
  }
  return c.finish();
}

struct Series {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;
};

/// Line plot; each of `markers_x` draws a labelled vertical rule (e.g. at a critical parameter).
inline std::string line_plot(const std::vector<Series>& series, const std::vector<std::pair<double, std::string>>& markers_x,
                             const std::string& title, const std::string& xlabel, const std::string& ylabel) {
  Canvas c(560, 400, title);
  Frame f;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      f.xr.include(x);
      f.yr.include(y);
    }
  f.yr.include(0.0);
  if (f.xr.empty()) f.xr = {0, 1};
  for (const auto& s : series) {
    std::vector<std::pair<double, double>> px;
    for (const auto& [x, y] : s.points)
      if (std::isfinite(y)) px.emplace_back(f.px(x), f.py(y));
    c.polyline(px, s.color);
  }
  c.line(f.left, f.py(0.0), f.left + f.width, f.py(0.0), "#999999", 0.8);
  for (const auto& [x, label] : markers_x) {
    c.line(f.px(x), f.top, f.px(x), f.top + f.height, "#d62728", 1.0);
    c.text(f.px(x) + 3, f.top + 12, label, 10);
  }
  f.axes(c, xlabel, ylabel);
  for (std::size_t k = 0; k < series.size(); ++k) {
    c.line(f.left + f.width + 15, f.top + 10 + 18 * static_cast<double>(k), f.left + f.width + 30, f.top + 10 + 18 * static_cast<double>(k), series[k].color, 2);
    c.text(f.left + f.width + 35, f.top + 14 + 18 * static_cast<double>(k), series[k].label, 10);
  }
  return c.finish();
}

}  // namespace translab::svg
