#pragma once

// Embedded PL curves on a surface.
//
// A Curve is an immutable value: an ordered vertex list on the annulus or the
// disk, open (an arc) or closed (a loop). The working representation is the
// `chart` polyline: cover coordinates (theta_tilde, s) for annulus curves,
// plain (x, y) for disk curves. Quotient vertices are kept alongside for
// serialization. Closed annulus curves carry an integer winding; their closing
// chart edge runs from chart.back() to chart.front() + (winding, 0).
//
// build_curve validates embeddedness exhaustively: exact-ish segment pair
// tests in the chart, with theta-shifted copies on the annulus. Curves made by
// resample/arc_between inherit validity and skip the quadratic pass.

#include <algorithm>
#include <cstdint>
#include <optional>

#include "curveobs/geometry.hpp"

namespace curveobs {

struct Curve {
  SurfaceKind surface = SurfaceKind::Annulus;
  bool closed = false;
  std::vector<Point> vertices;  // quotient coordinates
  std::vector<Point> chart;     // cover (annulus) or same as vertices (disk)
  int winding = 0;              // closed annulus curves only
  std::vector<double> cum;      // cumulative chart arclength per vertex
  double length = 0;

  std::size_t segment_count() const {
    return closed ? chart.size() : chart.size() - 1;
  }
  // Chart endpoints of segment i; the closed curve's last segment is the
  // closing edge.
  std::pair<Point, Point> segment(std::size_t i) const {
    if (i + 1 < chart.size()) return {chart[i], chart[i + 1]};
    return {chart.back(), chart.front() + Point{double(winding), 0.0}};
  }
  double vertex_param(std::size_t i) const { return cum[i] / length; }
};

namespace detail {

inline void fill_lengths(Curve& c) {
  c.cum.assign(c.chart.size() + (c.closed ? 1 : 0), 0.0);
  double acc = 0;
  for (std::size_t i = 0; i + 1 < c.chart.size(); ++i) {
    acc += norm(c.chart[i + 1] - c.chart[i]);
    c.cum[i + 1] = acc;
  }
  if (c.closed) {
    auto [p, q] = c.segment(c.chart.size() - 1);
    acc += norm(q - p);
    c.cum[c.chart.size()] = acc;
  }
  c.length = acc;
  if (!(c.length > 0))
    throw ValidationError("DegenerateInput", "curve has zero length");
}

// Fold-back test for two segments joined at a shared endpoint: the joint is
// embedded unless the outgoing direction turns straight back along the
// incoming one.
inline bool folds_back(Point in_dir, Point out_dir) {
  Point a = unit(in_dir), b = unit(out_dir);
  return std::fabs(cross(a, b)) <= 1e-9 && dot(a, b) < 0;
}

inline void check_simple(const Curve& c) {
  const std::size_t n = c.segment_count();
  int mlo = 0, mhi = 0;
  if (c.surface == SurfaceKind::Annulus) {
    double tmin = c.chart[0].a, tmax = c.chart[0].a;
    for (const Point& p : c.chart) {
      tmin = std::min(tmin, p.a);
      tmax = std::max(tmax, p.a);
    }
    int ext = int(std::ceil(tmax - tmin)) + 1;
    mlo = -ext;
    mhi = ext;
  }
  auto fail = [](std::size_t i, std::size_t j) {
    throw ValidationError("NotSimple", "segments " + std::to_string(i) +
                                           " and " + std::to_string(j) +
                                           " intersect");
  };
  for (int m = 0; m <= mhi; ++m) {
    if (m < mlo) continue;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = (m == 0 ? i + 1 : 0); j < n; ++j) {
        auto [p0, p1] = c.segment(i);
        auto [q0, q1] = c.segment(j);
        q0.a += m;
        q1.a += m;
        bool adjacent = false;
        Point in_dir, out_dir;
        if (m == 0 && j == i + 1) {
          adjacent = true;
          in_dir = p1 - p0;
          out_dir = q1 - q0;
        } else if (m == 0 && c.closed && c.winding == 0 && i == 0 && j == n - 1) {
          adjacent = true;  // closing edge rejoins vertex 0 in the chart
          in_dir = q1 - q0;
          out_dir = p1 - p0;
        } else if (m != 0 && c.closed && m == c.winding && i == n - 1 && j == 0) {
          adjacent = true;  // next period continues the closing edge
          in_dir = p1 - p0;
          out_dir = q1 - q0;
        } else if (m != 0 && c.closed && m == -c.winding && i == 0 && j == n - 1) {
          adjacent = true;  // previous period ends at vertex 0
          in_dir = q1 - q0;
          out_dir = p1 - p0;
        }
        if (adjacent) {
          if (folds_back(in_dir, out_dir)) fail(i, j);
          continue;
        }
        // Cheap reject before the exact test.
        double lo_a = std::min(q0.a, q1.a) - 1e-12,
               hi_a = std::max(q0.a, q1.a) + 1e-12;
        if (std::max(p0.a, p1.a) < lo_a || std::min(p0.a, p1.a) > hi_a) continue;
        SegmentHit h;
        if (intersect_segments(p0, p1, q0, q1, h) != SegmentRelation::None)
          fail(i, j);
      }
    }
  }
}

inline void check_boundary(const Curve& c, bool spanning_endpoints) {
  const std::size_t n = c.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    bool endpoint = !c.closed && (i == 0 || i + 1 == n);
    bool on = on_boundary(c.surface, c.vertices[i]);
    if (endpoint && spanning_endpoints && !on)
      throw ValidationError("BoundaryViolation",
                            "open curve endpoint off the boundary");
    if (!endpoint && on)
      throw ValidationError("BoundaryViolation",
                            "interior vertex " + std::to_string(i) +
                                " touches the boundary");
  }
}

inline Curve assemble(SurfaceKind surf, std::vector<Point> verts, bool closed) {
  if (verts.size() < (closed ? 3u : 2u))
    throw ValidationError("DegenerateInput", "too few vertices");
  if (verts.size() > 200000)
    throw ValidationError("BadParams", "vertex budget exceeded");
  Curve c;
  c.surface = surf;
  c.closed = closed;
  c.vertices.reserve(verts.size());
  for (Point& p : verts) c.vertices.push_back(normalize_point(surf, p));
  if (surf == SurfaceKind::Annulus) {
    auto lift = lift_path(c.vertices);
    c.chart.reserve(lift.size());
    for (const CoverPoint& q : lift) c.chart.push_back({q.t, q.s});
    if (closed) {
      double d = wrap_delta(c.vertices.back().a, c.vertices.front().a);
      if (std::fabs(std::fabs(d) - 0.5) < kLiftTol)
        throw ValidationError("AmbiguousLift", "half-turn closing gap");
      double w = c.chart.back().a + d - c.chart.front().a;
      c.winding = int(std::lround(w));
    }
  } else {
    c.chart = c.vertices;
  }
  for (std::size_t i = 0; i + 1 < c.chart.size(); ++i)
    if (norm(c.chart[i + 1] - c.chart[i]) == 0)
      throw ValidationError("DegenerateInput",
                            "repeated vertex " + std::to_string(i));
  if (closed) {
    auto [p, q] = c.segment(c.chart.size() - 1);
    if (norm(q - p) == 0 && verts.size() > 1) {
      // a duplicated closing vertex is a modelling error, not a closure
      throw ValidationError("DegenerateInput", "closing edge has zero length");
    }
  }
  fill_lengths(c);
  return c;
}

}  // namespace detail

// Validating constructor. `spanning_endpoints` demands that an open curve run
// boundary to boundary; sub-arcs produced by arc_between relax it.
inline Curve build_curve(SurfaceKind surf, std::vector<Point> verts,
                         bool closed, bool spanning_endpoints = true) {
  Curve c = detail::assemble(surf, std::move(verts), closed);
  detail::check_boundary(c, spanning_endpoints);
  detail::check_simple(c);
  return c;
}

namespace detail {
// For curves whose geometry is inherited from an already validated curve.
inline Curve rebuild_trusted(SurfaceKind surf, std::vector<Point> verts,
                             bool closed) {
  return assemble(surf, std::move(verts), closed);
}
}  // namespace detail

// Chart-coordinate point at normalized arclength t in [0,1] (wraps on closed
// curves).
inline Point chart_point_at(const Curve& c, double t) {
  if (c.closed) {
    t -= std::floor(t);
  } else if (t < -1e-12 || t > 1 + 1e-12) {
    throw ValidationError("BadParams", "parameter outside [0,1]");
  }
  t = std::clamp(t, 0.0, 1.0);
  double target = t * c.length;
  const auto& cum = c.cum;
  std::size_t lo = 0, hi = cum.size() - 1;
  while (lo + 1 < hi) {
    std::size_t mid = (lo + hi) / 2;
    (cum[mid] <= target ? lo : hi) = mid;
  }
  auto [p, q] = c.segment(lo);
  double seg = cum[lo + 1] - cum[lo];
  double u = seg > 0 ? (target - cum[lo]) / seg : 0.0;
  if (u <= 0) return p;
  if (u >= 1) return q;
  return p + u * (q - p);
}

inline Point point_at(const Curve& c, double t) {
  Point p = chart_point_at(c, t);
  if (c.surface == SurfaceKind::Annulus) p.a = wrap_unit(p.a);
  return normalize_point(c.surface, p);
}

// Unit chart direction of the segment containing parameter t.
inline Point tangent_at(const Curve& c, double t) {
  if (c.closed) {
    t -= std::floor(t);
  } else if (t < -1e-12 || t > 1 + 1e-12) {
    throw ValidationError("BadParams", "parameter outside [0,1]");
  }
  t = std::clamp(t, 0.0, 1.0);
  double target = t * c.length;
  const auto& cum = c.cum;
  std::size_t lo = 0, hi = cum.size() - 1;
  while (lo + 1 < hi) {
    std::size_t mid = (lo + hi) / 2;
    (cum[mid] <= target ? lo : hi) = mid;
  }
  auto [p, q] = c.segment(lo);
  return unit(q - p);
}

// Split every chart segment into equal pieces no longer than eps. The PL
// image and orientation are unchanged; original vertices are retained, so the
// map is idempotent once all segments fit.
inline Curve resample(const Curve& c, double eps) {
  if (!(eps > 0)) throw ValidationError("BadParams", "resample eps <= 0");
  std::vector<Point> verts;
  const std::size_t n = c.segment_count();
  for (std::size_t i = 0; i < n; ++i) {
    auto [p, q] = c.segment(i);
    double len = norm(q - p);
    int parts = std::max(1, int(std::ceil(len / eps - 1e-12)));
    for (int k = 0; k < parts; ++k) {
      Point x = p + (double(k) / parts) * (q - p);
      if (c.surface == SurfaceKind::Annulus) x.a = wrap_unit(x.a);
      verts.push_back(x);
    }
  }
  if (!c.closed) {
    Point x = c.chart.back();
    if (c.surface == SurfaceKind::Annulus) x.a = wrap_unit(x.a);
    verts.push_back(x);
  }
  return detail::rebuild_trusted(c.surface, std::move(verts), c.closed);
}

// Open sub-arc from parameter a to parameter b, walking forward (and through
// the closure on closed curves). Original vertices strictly between the cut
// points are retained.
inline Curve arc_between(const Curve& c, double a, double b) {
  if (!c.closed && !(a < b))
    throw ValidationError("BadParams", "arc_between needs a < b on open curves");
  double span = c.closed ? wrap_unit(b - a) : b - a;
  if (span <= 1e-15 || (c.closed && span >= 1 - 1e-15))
    throw ValidationError("DegenerateInput", "empty or full arc");
  std::vector<Point> verts;
  auto push = [&](Point chart_pt) {
    if (c.surface == SurfaceKind::Annulus) chart_pt.a = wrap_unit(chart_pt.a);
    if (verts.empty() || chart_dist(c.surface, verts.back(), chart_pt) > 1e-14)
      verts.push_back(chart_pt);
  };
  const double tol = 1e-12 * c.length;
  double la = (c.closed ? wrap_unit(a) : a) * c.length;
  double lb = la + span * c.length;
  push(chart_point_at(c, a));
  // Original vertices land at cumulative positions cum[i] (+ length once more
  // when the arc wraps through the seam).
  int laps = c.closed ? 2 : 1;
  for (int lap = 0; lap < laps; ++lap) {
    for (std::size_t i = 0; i < c.chart.size(); ++i) {
      double pos = c.cum[i] + lap * c.length;
      if (pos > la + tol && pos < lb - tol) push(c.vertices[i]);
    }
  }
  push(chart_point_at(c, b));
  if (verts.size() < 2) throw ValidationError("DegenerateInput", "empty arc");
  Curve out = detail::rebuild_trusted(c.surface, std::move(verts), false);
  detail::check_boundary(out, false);
  return out;
}

inline Curve reversed(const Curve& c) {
  std::vector<Point> verts(c.vertices.rbegin(), c.vertices.rend());
  return detail::rebuild_trusted(c.surface, std::move(verts), c.closed);
}

}  // namespace curveobs
