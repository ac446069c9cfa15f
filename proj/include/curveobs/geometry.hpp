#pragma once

// Flat charts for the two surfaces everything else works on:
//
//   annulus  A = S^1 x [0,1], coordinates (theta mod 1, s), area form dtheta^ds
//   disk     D = {x^2+y^2 <= 1}, coordinates (x, y), area form (1/pi) dx^dy
//
// Both are normalized to total area 1. Annulus segment geometry is always done
// in the universal cover (theta_tilde in R); quotient points carry theta in
// [0,1). Points never know their surface; the surface tag travels with curves
// and operations.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace curveobs {

enum class SurfaceKind { Annulus, Disk };

inline const char* surface_name(SurfaceKind k) {
  return k == SurfaceKind::Annulus ? "annulus" : "disk";
}

// Input/contract violations; CLI exit code 2.
struct ValidationError : std::runtime_error {
  std::string code;
  ValidationError(std::string c, const std::string& what)
      : std::runtime_error(c + ": " + what), code(std::move(c)) {}
};

// Tolerance not met / iteration failed; CLI exit code 3.
struct NumericalError : std::runtime_error {
  std::string code;
  NumericalError(std::string c, const std::string& what)
      : std::runtime_error(c + ": " + what), code(std::move(c)) {}
};

struct Point {
  double a = 0;  // theta (annulus) or x (disk)
  double b = 0;  // s (annulus) or y (disk)
};

struct CoverPoint {
  double t = 0;  // theta_tilde, unbounded
  double s = 0;
};

inline Point operator+(Point p, Point q) { return {p.a + q.a, p.b + q.b}; }
inline Point operator-(Point p, Point q) { return {p.a - q.a, p.b - q.b}; }
inline Point operator*(double c, Point p) { return {c * p.a, c * p.b}; }

inline double dot(Point p, Point q) { return p.a * q.a + p.b * q.b; }
inline double cross(Point p, Point q) { return p.a * q.b - p.b * q.a; }
inline double norm(Point p) { return std::hypot(p.a, p.b); }

// Rotate a quarter turn counterclockwise in the chart.
inline Point rot90(Point p) { return {-p.b, p.a}; }

inline Point unit(Point p) {
  double n = norm(p);
  if (n == 0) throw ValidationError("DegenerateInput", "zero-length direction");
  return {p.a / n, p.b / n};
}

// x mod 1 reduced to [0,1). Exact integers map to 0.
inline double wrap_unit(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;  // guards against floor rounding at tiny negatives
  return r;
}

// Representative of (to - from) mod 1 in [-0.5, 0.5].
inline double wrap_delta(double from, double to) {
  double d = wrap_unit(to - from);
  if (d > 0.5) d -= 1.0;
  return d;
}

inline constexpr double kDomainTol = 1e-9;

// Clamp-and-validate a raw chart point onto the surface.
inline Point normalize_point(SurfaceKind surf, Point raw) {
  if (!std::isfinite(raw.a) || !std::isfinite(raw.b))
    throw ValidationError("OutOfDomain", "non-finite coordinate");
  if (surf == SurfaceKind::Annulus) {
    if (raw.b < -kDomainTol || raw.b > 1.0 + kDomainTol)
      throw ValidationError("OutOfDomain",
                            "annulus s = " + std::to_string(raw.b));
    double s = raw.b < 0 ? 0.0 : (raw.b > 1 ? 1.0 : raw.b);
    return {wrap_unit(raw.a), s};
  }
  double r = norm(raw);
  if (r > 1.0 + kDomainTol)
    throw ValidationError("OutOfDomain", "disk |p| = " + std::to_string(r));
  if (r > 1.0) return {raw.a / r, raw.b / r};
  return raw;
}

// Distance from a surface point to the boundary of the surface.
inline double boundary_distance(SurfaceKind surf, Point p) {
  if (surf == SurfaceKind::Annulus) return std::min(p.b, 1.0 - p.b);
  return 1.0 - norm(p);
}

inline bool on_boundary(SurfaceKind surf, Point p, double tol = kDomainTol) {
  return boundary_distance(surf, p) <= tol;
}

// Quotient-metric distance between surface points (annulus wraps theta).
inline double chart_dist(SurfaceKind surf, Point p, Point q) {
  if (surf == SurfaceKind::Annulus)
    return std::hypot(wrap_delta(p.a, q.a), q.b - p.b);
  return norm(q - p);
}

inline constexpr double kLiftTol = 1e-9;

// Continuous lift of an ordered annulus polyline to the cover. The first
// vertex keeps its theta in [0,1); every later gap takes the representative
// nearest the previous lift. A gap at exactly half a turn has no nearest
// representative.
inline std::vector<CoverPoint> lift_path(const std::vector<Point>& pts,
                                         double tol = kLiftTol) {
  if (pts.empty()) throw ValidationError("DegenerateInput", "empty path");
  std::vector<CoverPoint> out;
  out.reserve(pts.size());
  out.push_back({wrap_unit(pts[0].a), pts[0].b});
  for (std::size_t i = 1; i < pts.size(); ++i) {
    double d = wrap_delta(pts[i - 1].a, pts[i].a);
    if (std::fabs(std::fabs(d) - 0.5) < tol)
      throw ValidationError("AmbiguousLift",
                            "half-turn theta gap at vertex " + std::to_string(i));
    out.push_back({out.back().t + d, pts[i].b});
  }
  return out;
}

// Shoelace area of a closed planar polyline, in surface-area units
// (the disk chart carries density 1/pi). Vertices are chart coordinates;
// the closing edge last->first is implied.
inline double signed_polygon_area(SurfaceKind surf,
                                  const std::vector<Point>& poly) {
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    if (norm(poly[i] - poly[(i + 1) % poly.size()]) > 0) ++distinct;
  if (poly.size() < 3 || distinct < 3)
    throw ValidationError("DegenerateInput",
                          "polygon needs at least 3 distinct vertices");
  double twice = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % poly.size()];
    twice += p.a * q.b - q.a * p.b;
  }
  double area = 0.5 * twice;
  if (surf == SurfaceKind::Disk) area /= std::acos(-1.0);
  return area;
}

// ---- segment predicates -------------------------------------------------
//
// All segment work happens in a single flat chart (cover coordinates for the
// annulus). Orientation tests are doubles with an absolute guard; a result
// inside the guard is "degenerate" and the caller decides how to fail.

inline constexpr double kOrientGuard = 1e-12;

// Twice the signed area of triangle (p,q,r). >0 means r lies left of p->q.
inline double orient(Point p, Point q, Point r) {
  return (q.a - p.a) * (r.b - p.b) - (q.b - p.b) * (r.a - p.a);
}

inline int orient_sign(Point p, Point q, Point r, double guard = kOrientGuard) {
  double v = orient(p, q, r);
  if (v > guard) return 1;
  if (v < -guard) return -1;
  return 0;
}

struct SegmentHit {
  Point at;        // intersection point
  double u = 0;    // parameter along [p0,p1], in [0,1]
  double v = 0;    // parameter along [q0,q1], in [0,1]
};

enum class SegmentRelation {
  None,        // disjoint
  Proper,      // interiors cross transversally
  Degenerate,  // endpoint touch, vertex-on-segment, or collinear overlap
};

// Classify two closed segments. Proper fills `hit`.
inline SegmentRelation intersect_segments(Point p0, Point p1, Point q0,
                                          Point q1, SegmentHit& hit,
                                          double guard = kOrientGuard) {
  int o1 = orient_sign(p0, p1, q0, guard);
  int o2 = orient_sign(p0, p1, q1, guard);
  int o3 = orient_sign(q0, q1, p0, guard);
  int o4 = orient_sign(q0, q1, p1, guard);
  if (o1 * o2 < 0 && o3 * o4 < 0) {
    double d1 = orient(p0, p1, q0);
    double d2 = orient(p0, p1, q1);
    double v = d1 / (d1 - d2);
    double d3 = orient(q0, q1, p0);
    double d4 = orient(q0, q1, p1);
    double u = d3 / (d3 - d4);
    hit.u = u;
    hit.v = v;
    hit.at = p0 + u * (p1 - p0);
    return SegmentRelation::Proper;
  }
  if (o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return SegmentRelation::None;
  // Some orientation is inside the guard: only degenerate if the
  // bounding boxes actually meet, otherwise the segments are far apart
  // on nearly-parallel lines.
  auto overlap1 = [](double a0, double a1, double b0, double b1) {
    if (a0 > a1) std::swap(a0, a1);
    if (b0 > b1) std::swap(b0, b1);
    return a0 <= b1 + 1e-12 && b0 <= a1 + 1e-12;
  };
  bool boxes = overlap1(p0.a, p1.a, q0.a, q1.a) && overlap1(p0.b, p1.b, q0.b, q1.b);
  if (!boxes) return SegmentRelation::None;
  // Degenerate contact needs the zero-orientation point to really sit on the
  // other segment, not merely on its supporting line.
  auto on_segment = [&](Point a, Point b, Point x) {
    if (std::fabs(orient(a, b, x)) > guard * (1.0 + norm(b - a))) return false;
    double t = dot(x - a, b - a);
    return t >= -1e-12 && t <= dot(b - a, b - a) + 1e-12;
  };
  auto touch = [&](Point x) {
    hit.at = x;
    return SegmentRelation::Degenerate;
  };
  if (o1 == 0 && on_segment(p0, p1, q0)) return touch(q0);
  if (o2 == 0 && on_segment(p0, p1, q1)) return touch(q1);
  if (o3 == 0 && on_segment(q0, q1, p0)) return touch(p0);
  if (o4 == 0 && on_segment(q0, q1, p1)) return touch(p1);
  return SegmentRelation::None;
}

inline double point_segment_dist(Point x, Point a, Point b) {
  Point d = b - a;
  double len2 = dot(d, d);
  if (len2 == 0) return norm(x - a);
  double t = dot(x - a, d) / len2;
  t = t < 0 ? 0 : (t > 1 ? 1 : t);
  return norm(x - (a + t * d));
}

inline double segment_segment_dist(Point a0, Point a1, Point b0, Point b1) {
  SegmentHit h;
  if (intersect_segments(a0, a1, b0, b1, h) != SegmentRelation::None) return 0;
  double d = point_segment_dist(a0, b0, b1);
  d = std::min(d, point_segment_dist(a1, b0, b1));
  d = std::min(d, point_segment_dist(b0, a0, a1));
  d = std::min(d, point_segment_dist(b1, a0, a1));
  return d;
}

}  // namespace curveobs
