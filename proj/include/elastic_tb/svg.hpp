#pragma once

// Plain SVG renderings: band surfaces, two-panel bands and score histograms.
// Numbers are printed with %.6g so output is byte-stable.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdio>
#include <string>
#include <vector>

#include "elastic_tb/bootstrap.hpp"
#include "elastic_tb/tolerance_region.hpp"

namespace elastic_tb {

namespace svg_detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Box {
  double x0, y0, w, h;
};

struct Range {
  double lo = 0.0, hi = 1.0;
  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  [[nodiscard]] double span() const { return hi > lo ? hi - lo : 1.0; }
};

inline Range range_of(const std::vector<const Vec*>& ys) {
  Range r{ys.front()->front(), ys.front()->front()};
  for (const Vec* y : ys)
    for (double v : *y) r.include(v);
  if (!(r.hi > r.lo)) {
    r.lo -= 0.5;
    r.hi += 0.5;
  }
  return r;
}

inline std::string open(double width, double height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
         "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

inline std::string text(double x, double y, const std::string& s, const char* anchor = "middle") {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"" +
         anchor + "\">" + s + "</text>\n";
}

inline std::string axes(const Box& b) {
  return "<path d=\"M" + num(b.x0) + " " + num(b.y0) + " V" + num(b.y0 + b.h) + " H" + num(b.x0 + b.w) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
}

inline std::string polyline(const Box& b, const Vec& x, const Vec& y, const Range& xr, const Range& yr,
                            const char* colour, const char* dash = nullptr) {
  std::string pts;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) pts += ' ';
    pts += num(b.x0 + (x[i] - xr.lo) / xr.span() * b.w) + "," + num(b.y0 + b.h - (y[i] - yr.lo) / yr.span() * b.h);
  }
  std::string out = "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\"";
  if (dash) out += " stroke-dasharray=\"" + std::string(dash) + "\"";
  return out + " points=\"" + pts + "\"/>\n";
}

inline constexpr std::array<const char*, 3> kColours{"#1f77b4", "#000000", "#d62728"};
inline constexpr std::array<const char*, 3> kNames{"lower", "median", "upper"};

}  // namespace svg_detail

/// Lower, median and upper curves drawn side by side, each shifted along the
/// horizontal axis by its distance position.
inline std::string surface_svg(const SurfacePlotData& s) {
  using namespace svg_detail;
  const double width = 720, height = 360;
  const Box box{60, 30, 620, 280};
  const double extent = s.positions[2] + 1.0;
  const Range xr{0.0, extent};
  const Range yr = range_of({&s.curves[0], &s.curves[1], &s.curves[2]});
  std::string out = open(width, height);
  out += text(width / 2, 18, std::string(to_string(s.mode)) + " band surface");
  out += axes(box);
  for (std::size_t c = 0; c < 3; ++c) {
    Vec x(s.grid.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = s.positions[c] + s.grid[i];
    out += polyline(box, x, s.curves[c], xr, yr, kColours[c]);
    out += text(box.x0 + (s.positions[c] + 0.5) / extent * box.w, box.y0 + box.h + 18,
                std::string(kNames[c]) + " (" + num(s.positions[c]) + ")");
  }
  out += text(box.x0 - 8, box.y0 + 4, num(yr.hi), "end");
  out += text(box.x0 - 8, box.y0 + box.h, num(yr.lo), "end");
  return out + "</svg>\n";
}

/// Two panels: amplitude bounds with median, and warp bounds with median.
inline std::string band_svg(const ToleranceBand& b) {
  using namespace svg_detail;
  const double width = 900, height = 360;
  const std::array<Box, 2> boxes{Box{60, 30, 370, 280}, Box{500, 30, 370, 280}};
  const Range xr{0.0, 1.0};
  std::string out = open(width, height);
  const std::array<const Vec*, 3> amp{&b.amplitude_lower.values, &b.amplitude_median.values, &b.amplitude_upper.values};
  const std::array<const Vec*, 3> ph{&b.phase_lower.gamma, &b.phase_median.gamma, &b.phase_upper.gamma};
  const std::array<std::array<const Vec*, 3>, 2> panels{amp, ph};
  const std::array<const char*, 2> titles{"amplitude", "phase"};
  for (std::size_t p = 0; p < 2; ++p) {
    const Box& box = boxes[p];
    const Range yr = range_of({panels[p][0], panels[p][1], panels[p][2]});
    out += text(box.x0 + box.w / 2, 18, titles[p]);
    out += axes(box);
    for (std::size_t c = 0; c < 3; ++c)
      out += polyline(box, b.grid, *panels[p][c], xr, yr, kColours[c], c == 1 ? nullptr : "6 3");
    out += text(box.x0 - 8, box.y0 + 4, num(yr.hi), "end");
    out += text(box.x0 - 8, box.y0 + box.h, num(yr.lo), "end");
  }
  return out + "</svg>\n";
}

/// Histogram bars with an optional vertical line at the tolerance factor.
/// An empty histogram renders the axes only.
inline std::string histogram_svg(const Histogram& h, double factor_b = -1.0) {
  using namespace svg_detail;
  const double width = 640, height = 360;
  const Box box{60, 30, 560, 280};
  std::string out = open(width, height);
  out += text(width / 2, 18, "scores");
  out += axes(box);
  if (h.counts.empty()) return out + "</svg>\n";
  Range xr{h.edges.front(), h.edges.back()};
  if (factor_b >= 0.0) xr.include(factor_b);
  if (!(xr.hi > xr.lo)) xr.hi = xr.lo + 1.0;
  const std::size_t top = *std::max_element(h.counts.begin(), h.counts.end());
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    double x0 = box.x0 + (h.edges[i] - xr.lo) / xr.span() * box.w;
    double x1 = box.x0 + (h.edges[i + 1] - xr.lo) / xr.span() * box.w;
    if (!(x1 > x0)) x1 = x0 + box.w / 20;
    const double bh = static_cast<double>(h.counts[i]) / static_cast<double>(top) * box.h;
    out += "<rect x=\"" + num(x0) + "\" y=\"" + num(box.y0 + box.h - bh) + "\" width=\"" + num(x1 - x0) +
           "\" height=\"" + num(bh) + "\" fill=\"#9ecae1\" stroke=\"#3182bd\"/>\n";
  }
  if (factor_b >= 0.0) {
    const double x = box.x0 + (factor_b - xr.lo) / xr.span() * box.w;
    out += "<line x1=\"" + num(x) + "\" y1=\"" + num(box.y0) + "\" x2=\"" + num(x) + "\" y2=\"" +
           num(box.y0 + box.h) + "\" stroke=\"#d62728\" stroke-dasharray=\"6 3\"/>\n";
    out += text(x, box.y0 - 4, "b = " + num(factor_b));
  }
  out += text(box.x0, box.y0 + box.h + 18, num(xr.lo));
  out += text(box.x0 + box.w, box.y0 + box.h + 18, num(xr.hi));
  return out + "</svg>\n";
}

}  // namespace elastic_tb
