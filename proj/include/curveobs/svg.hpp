#pragma once

// Figure rendering.
//
// Draws a family of curves, optionally decorated with a crossing pattern
// and the snake neighborhoods of an obstruction report, as standalone SVG
// text. The annulus appears as its fundamental rectangle with the glued
// seam dashed; segments are drawn mod 1, split where they cross the seam.
// Output is deterministic: fixed palette, fixed coordinate formatting, no
// timestamps.

#include <cstdio>
#include <string>
#include <vector>

#include "curveobs/intersect.hpp"
#include "curveobs/obstruction.hpp"

namespace curveobs {

namespace detail {

inline constexpr double kSvgSize = 640.0;
inline constexpr double kSvgMargin = 40.0;

inline constexpr const char* kCurvePalette[4] = {"#1a6fb5", "#c2452d",
                                                "#3c8a4e", "#8155a8"};

struct SvgMapper {
  SurfaceKind surface;

  double x(double a) const {
    double span = kSvgSize - 2 * kSvgMargin;
    if (surface == SurfaceKind::Annulus) return kSvgMargin + a * span;
    return kSvgMargin + (a + 1.0) * 0.5 * span;
  }
  // svg y grows downward; flip so s (or y) grows upward on the page
  double y(double b) const {
    double span = kSvgSize - 2 * kSvgMargin;
    if (surface == SurfaceKind::Annulus) return kSvgSize - kSvgMargin - b * span;
    return kSvgSize - kSvgMargin - (b + 1.0) * 0.5 * span;
  }
};

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline void svg_polyline(const SvgMapper& map, const std::vector<Point>& pts,
                         const char* color, std::string& out) {
  if (pts.size() < 2) return;
  out += "<polyline fill=\"none\" stroke=\"";
  out += color;
  out += "\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += svg_num(map.x(pts[i].a)) + "," + svg_num(map.y(pts[i].b));
  }
  out += "\"/>\n";
}

// Chart pieces of the curve translated into the fundamental domain, cut
// where they cross an integer theta line. Disk curves come back whole.
inline std::vector<std::vector<Point>> drawable_pieces(const Curve& c) {
  std::vector<std::vector<Point>> pieces;
  if (c.surface == SurfaceKind::Disk) {
    std::vector<Point> pts = c.chart;
    if (c.closed) pts.push_back(c.chart.front());
    pieces.push_back(std::move(pts));
    return pieces;
  }
  // split each segment where it crosses an integer theta line, then slide
  // each piece by the floor of its midpoint so everything lands in [0,1]
  std::vector<Point> run;
  double run_shift = 0;
  bool open_run = false;
  auto add = [&](Point p, Point q) {
    double shift = std::floor(0.5 * (p.a + q.a));
    if (!open_run || shift != run_shift) {
      if (run.size() >= 2) pieces.push_back(run);
      run.clear();
      run.push_back({p.a - shift, p.b});
      run_shift = shift;
      open_run = true;
    }
    run.push_back({q.a - shift, q.b});
  };
  for (std::size_t i = 0; i < c.segment_count(); ++i) {
    auto [p, q] = c.segment(i);
    // vertex steps stay below half a turn, so one seam cut at most
    double lo = std::min(p.a, q.a), hi = std::max(p.a, q.a);
    double n = std::floor(hi);
    if (n > lo && n < hi) {
      double t = (n - p.a) / (q.a - p.a);
      Point cut{n, p.b + t * (q.b - p.b)};
      add(p, cut);
      add(cut, q);
    } else {
      add(p, q);
    }
  }
  if (run.size() >= 2) pieces.push_back(run);
  return pieces;
}

inline void svg_marker(const SvgMapper& map, Point at, int sign,
                       std::string& out) {
  std::string cx = svg_num(map.x(at.a));
  std::string cy = svg_num(map.y(at.b));
  out += "<circle class=\"crossing\" cx=\"" + cx + "\" cy=\"" + cy +
         "\" r=\"4\" fill=\"#1b1b1b\"/>\n";
  out += "<text x=\"" + svg_num(map.x(at.a) + 7.0) + "\" y=\"" +
         svg_num(map.y(at.b) - 7.0) +
         "\" font-family=\"monospace\" font-size=\"14\" fill=\"#1b1b1b\">";
  out += sign > 0 ? '+' : '-';
  out += "</text>\n";
}

}  // namespace detail

inline std::string render_svg(const std::vector<Curve>& curves,
                              const IntersectionPattern* pattern = nullptr,
                              const ObstructionReport* report = nullptr) {
  if (curves.empty())
    throw ValidationError("BadParams", "render wants at least one curve");
  SurfaceKind surf = curves.front().surface;
  for (const Curve& c : curves)
    if (c.surface != surf)
      throw ValidationError("BadParams", "render wants a single surface");
  if (report && !report->triples.empty() && !pattern)
    throw ValidationError("BadParams",
                          "snake neighborhoods need the pattern they index");

  detail::SvgMapper map{surf};
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 640\">\n";
  out += "<rect width=\"640\" height=\"640\" fill=\"#fdfcf8\"/>\n";
  if (surf == SurfaceKind::Annulus) {
    // boundary circles solid, the glued seam dashed
    std::string l = detail::svg_num(detail::kSvgMargin);
    std::string r = detail::svg_num(detail::kSvgSize - detail::kSvgMargin);
    out += "<line x1=\"" + l + "\" y1=\"" + r + "\" x2=\"" + r + "\" y2=\"" +
           r + "\" stroke=\"#444444\" stroke-width=\"1.5\"/>\n";
    out += "<line x1=\"" + l + "\" y1=\"" + l + "\" x2=\"" + r + "\" y2=\"" +
           l + "\" stroke=\"#444444\" stroke-width=\"1.5\"/>\n";
    out += "<line class=\"seam\" x1=\"" + l + "\" y1=\"" + l + "\" x2=\"" + l +
           "\" y2=\"" + r +
           "\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n";
    out += "<line class=\"seam\" x1=\"" + r + "\" y1=\"" + l + "\" x2=\"" + r +
           "\" y2=\"" + r +
           "\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n";
  } else {
    out += "<circle cx=\"320.000\" cy=\"320.000\" r=\"" +
           detail::svg_num(0.5 * (detail::kSvgSize - 2 * detail::kSvgMargin)) +
           "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1.5\"/>\n";
  }

  // shaded neighborhoods first, so curves and markers stay legible on top
  if (report && pattern) {
    for (const SnakeTriple& t : report->triples) {
      std::size_t mid = t.k_idx[1];
      if (mid >= pattern->points.size())
        throw ValidationError("BadParams",
                              "triple indexes a point the pattern lacks");
      Point at = pattern->points[mid].at;
      out += "<circle class=\"triple\" cx=\"" + detail::svg_num(map.x(at.a)) +
             "\" cy=\"" + detail::svg_num(map.y(at.b)) +
             "\" r=\"22\" fill=\"#f0b429\" fill-opacity=\"0.35\"/>\n";
    }
  }

  for (std::size_t i = 0; i < curves.size(); ++i) {
    const char* color = detail::kCurvePalette[i % 4];
    for (const auto& piece : detail::drawable_pieces(curves[i]))
      detail::svg_polyline(map, piece, color, out);
  }

  if (pattern)
    for (const IntersectionPoint& p : pattern->points)
      detail::svg_marker(map, p.at, p.sign, out);

  out += "</svg>\n";
  return out;
}

}  // namespace curveobs
