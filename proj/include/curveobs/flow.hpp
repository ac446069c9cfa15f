#pragma once

// Hamiltonian systems and their flows.
//
// The annulus carries omega = dtheta ^ ds and the convention
// X = (dH/ds, -dH/dtheta); the disk carries omega = (1/pi) dx ^ dy and
// X = pi (dH/dy, -dH/dx). Time stepping is the implicit midpoint rule, which
// is symplectic and, for the shear family (s is invariant), lands on the
// exact map after two fixed point sweeps.
//
// Chart states are unwrapped: annulus points carry a real theta-tilde so
// displacement and winding are plain differences. The field itself only ever
// sees theta mod 1.

#include <cstdint>

#include "curveobs/curve.hpp"

namespace curveobs {

enum class FieldKind {
  LinearShear,  // F(s) = c s
  PolyShear,    // F(s) = sum coeffs[k] s^k
  BumpShear,    // F(s) = 6 a s (1 - s)
  RadialDisk,   // H = c (x^2 + y^2)
  GridField,    // bicubic samples of H on the annulus
};

inline const char* field_kind_name(FieldKind k) {
  switch (k) {
    case FieldKind::LinearShear: return "linear_shear";
    case FieldKind::PolyShear: return "poly_shear";
    case FieldKind::BumpShear: return "bump_shear";
    case FieldKind::RadialDisk: return "radial_disk";
    case FieldKind::GridField: return "grid_field";
  }
  return "grid_field";
}

struct GridData {
  std::size_t nx = 0, ny = 0;
  std::vector<double> v;  // row-major, v[j*nx + i], j indexes s

  double at(long i, long j) const {
    i %= long(nx);
    if (i < 0) i += long(nx);
    j = std::clamp<long>(j, 0, long(ny) - 1);
    return v[std::size_t(j) * nx + std::size_t(i)];
  }
};

struct HamiltonianSystem {
  SurfaceKind surface = SurfaceKind::Annulus;
  FieldKind kind = FieldKind::LinearShear;
  std::vector<double> coeffs;
  GridData grid;
};

inline HamiltonianSystem make_linear_shear(double c) {
  return {SurfaceKind::Annulus, FieldKind::LinearShear, {c}, {}};
}

inline HamiltonianSystem make_poly_shear(std::vector<double> coeffs) {
  if (coeffs.empty()) throw ValidationError("BadParams", "empty coefficients");
  for (double c : coeffs)
    if (!std::isfinite(c))
      throw ValidationError("BadParams", "non-finite coefficient");
  return {SurfaceKind::Annulus, FieldKind::PolyShear, std::move(coeffs), {}};
}

inline HamiltonianSystem make_bump_shear(double amp) {
  return {SurfaceKind::Annulus, FieldKind::BumpShear, {amp}, {}};
}

inline HamiltonianSystem make_radial_disk(double c) {
  return {SurfaceKind::Disk, FieldKind::RadialDisk, {c}, {}};
}

// Samples of H on a regular grid: theta_i = i/nx (periodic), s_j = j/(ny-1).
// The two sample rows against each boundary must be theta-constant so the
// interpolant has dH/dtheta = 0 on the boundary and the flow preserves it.
inline HamiltonianSystem make_grid_field(std::size_t nx, std::size_t ny,
                                         std::vector<double> values) {
  if (nx < 4 || ny < 4 || values.size() != nx * ny)
    throw ValidationError("BadParams", "grid needs nx,ny >= 4 and nx*ny values");
  for (double x : values)
    if (!std::isfinite(x))
      throw ValidationError("BadParams", "non-finite grid value");
  for (std::size_t j : {std::size_t(0), std::size_t(1), ny - 2, ny - 1}) {
    double ref = values[j * nx];
    for (std::size_t i = 1; i < nx; ++i)
      if (std::fabs(values[j * nx + i] - ref) >
          1e-12 * std::max(1.0, std::fabs(ref)))
        throw ValidationError("BadParams",
                              "boundary row " + std::to_string(j) +
                                  " is not theta-constant");
  }
  HamiltonianSystem sys;
  sys.surface = SurfaceKind::Annulus;
  sys.kind = FieldKind::GridField;
  sys.grid = {nx, ny, std::move(values)};
  return sys;
}

namespace detail {

// Catmull-Rom through p0..p3 at t in [0,1], between p1 and p2.
inline double cr(double p0, double p1, double p2, double p3, double t) {
  return p1 + 0.5 * t *
                  (p2 - p0 +
                   t * (2 * p0 - 5 * p1 + 4 * p2 - p3 +
                        t * (3 * (p1 - p2) + p3 - p0)));
}

inline double cr_dt(double p0, double p1, double p2, double p3, double t) {
  return 0.5 * (p2 - p0) + t * (2 * p0 - 5 * p1 + 4 * p2 - p3) +
         1.5 * t * t * (3 * (p1 - p2) + p3 - p0);
}

struct GridEval {
  double h, dh_dtheta, dh_ds;
};

inline GridEval grid_eval(const GridData& g, double theta, double s) {
  double u = wrap_unit(theta) * double(g.nx);
  long i = long(std::floor(u));
  double fu = u - double(i);
  double w = std::clamp(s, 0.0, 1.0) * double(g.ny - 1);
  long j = long(std::floor(w));
  if (j >= long(g.ny) - 1) j = long(g.ny) - 2;
  double fw = w - double(j);
  double val[4], dth[4];
  for (long r = 0; r < 4; ++r) {
    double a = g.at(i - 1, j - 1 + r), b = g.at(i, j - 1 + r),
           c = g.at(i + 1, j - 1 + r), d = g.at(i + 2, j - 1 + r);
    val[r] = cr(a, b, c, d, fu);
    dth[r] = cr_dt(a, b, c, d, fu) * double(g.nx);
  }
  GridEval e;
  e.h = cr(val[0], val[1], val[2], val[3], fw);
  e.dh_dtheta = cr(dth[0], dth[1], dth[2], dth[3], fw);
  e.dh_ds = cr_dt(val[0], val[1], val[2], val[3], fw) * double(g.ny - 1);
  return e;
}

inline double shear_speed(const HamiltonianSystem& sys, double s) {
  switch (sys.kind) {
    case FieldKind::LinearShear: return sys.coeffs[0] * s;
    case FieldKind::BumpShear: return 6 * sys.coeffs[0] * s * (1 - s);
    case FieldKind::PolyShear: {
      double f = 0;
      for (std::size_t k = sys.coeffs.size(); k-- > 0;)
        f = f * s + sys.coeffs[k];
      return f;
    }
    default: break;
  }
  throw ValidationError("BadParams", "not a shear system");
}

}  // namespace detail

inline double hamiltonian(const HamiltonianSystem& sys, Point x) {
  switch (sys.kind) {
    case FieldKind::LinearShear: return 0.5 * sys.coeffs[0] * x.b * x.b;
    case FieldKind::BumpShear: {
      double a = sys.coeffs[0], s = x.b;
      return a * (3 * s * s - 2 * s * s * s);
    }
    case FieldKind::PolyShear: {
      double h = 0, s = x.b;
      for (std::size_t k = sys.coeffs.size(); k-- > 0;)
        h = h * s + sys.coeffs[k] / double(k + 1);
      return h * s;
    }
    case FieldKind::RadialDisk:
      return sys.coeffs[0] * (x.a * x.a + x.b * x.b);
    case FieldKind::GridField:
      return detail::grid_eval(sys.grid, x.a, x.b).h;
  }
  throw ValidationError("BadParams", "unknown field kind");
}

inline Point vector_field(const HamiltonianSystem& sys, Point x) {
  switch (sys.kind) {
    case FieldKind::LinearShear:
    case FieldKind::BumpShear:
    case FieldKind::PolyShear:
      return {detail::shear_speed(sys, std::clamp(x.b, 0.0, 1.0)), 0.0};
    case FieldKind::RadialDisk: {
      double c = sys.coeffs[0];
      const double pi = std::acos(-1.0);
      return {2 * pi * c * x.b, -2 * pi * c * x.a};
    }
    case FieldKind::GridField: {
      auto e = detail::grid_eval(sys.grid, x.a, x.b);
      return {e.dh_ds, -e.dh_dtheta};
    }
  }
  throw ValidationError("BadParams", "unknown field kind");
}

inline constexpr double kDefaultStep = 1e-3;

namespace detail {

inline Point midpoint_step(const HamiltonianSystem& sys, Point x, double h) {
  Point m = x + (0.5 * h) * vector_field(sys, x);
  for (int it = 0; it < 50; ++it) {
    Point next = x + (0.5 * h) * vector_field(sys, m);
    double d = norm(next - m);
    m = next;
    if (d <= 1e-13 * (1.0 + norm(m))) {
      Point out = 2.0 * m - x;
      if (sys.surface == SurfaceKind::Annulus) out.b = std::clamp(out.b, 0.0, 1.0);
      return out;
    }
  }
  throw NumericalError("SolverDiverged", "implicit midpoint did not settle");
}

}  // namespace detail

// Flow for time t from an unwrapped chart state; the result stays unwrapped.
inline Point flow_chart(const HamiltonianSystem& sys, Point x, double t,
                        double h = kDefaultStep) {
  if (!(h > 0)) throw ValidationError("BadParams", "step size must be positive");
  if (t == 0) return x;
  long n = std::lround(std::ceil(std::fabs(t) / h - 1e-12));
  if (n < 1) n = 1;
  double step = t / double(n);
  for (long i = 0; i < n; ++i) x = detail::midpoint_step(sys, x, step);
  return x;
}

// Quotient-to-quotient time t map.
inline Point flow_point(const HamiltonianSystem& sys, Point x, double t,
                        double h = kDefaultStep) {
  Point y = flow_chart(sys, normalize_point(sys.surface, x), t, h);
  if (sys.surface == SurfaceKind::Annulus) y.a = wrap_unit(y.a);
  return normalize_point(sys.surface, y);
}

// Image of a curve under the time t map. The vertex set is refined until
// consecutive image points are closer than eps, so the PL image is an honest
// picture of the true image; the result is validated like any other curve.
inline Curve image_curve(const HamiltonianSystem& sys, const Curve& c, double t,
                         double eps = 1e-2, double h = kDefaultStep) {
  if (sys.surface != c.surface)
    throw ValidationError("BadParams", "system and curve disagree on surface");
  if (!(eps > 0) || eps >= 0.45)
    throw ValidationError("BadParams", "refinement eps outside (0, 0.45)");
  struct Node {
    double par;
    Point img;  // chart coordinates of the flowed point
  };
  auto flowed = [&](double par) {
    return flow_chart(sys, chart_point_at(c, par), t, h);
  };
  std::vector<Node> nodes;
  const std::size_t n0 = c.chart.size();
  nodes.reserve(n0 + 16);
  for (std::size_t i = 0; i < n0; ++i) {
    double par = c.vertex_param(i);
    nodes.push_back({par, flowed(par)});
  }
  if (c.closed) {
    // the flow commutes with the deck shift, so the closing image is the
    // first image one period over; going through flowed(1.0) would wrap and
    // tear the chart picture apart at the seam
    nodes.push_back({1.0, nodes[0].img + Point{double(c.winding), 0.0}});
  }
  // depth-first interval refinement
  std::vector<Node> out;
  out.push_back(nodes[0]);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    struct Span {
      Node a, b;
      int depth;
    };
    std::vector<Span> stack{{nodes[i], nodes[i + 1], 0}};
    while (!stack.empty()) {
      Span sp = stack.back();
      stack.pop_back();
      if (norm(sp.b.img - sp.a.img) <= eps) {
        out.push_back(sp.b);
        continue;
      }
      if (sp.depth >= 24)
        throw NumericalError("RefinementBudget",
                             "image edge would not shrink below eps");
      double mid = 0.5 * (sp.a.par + sp.b.par);
      Node m{mid, flowed(mid)};
      stack.push_back({m, sp.b, sp.depth + 1});
      stack.push_back({sp.a, m, sp.depth + 1});
    }
  }
  std::vector<Point> verts;
  verts.reserve(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (c.closed && i + 1 == out.size()) break;  // closing vertex is implied
    Point p = out[i].img;
    if (sys.surface == SurfaceKind::Annulus) p.a = wrap_unit(p.a);
    verts.push_back(p);
  }
  return build_curve(c.surface, std::move(verts), c.closed);
}

// det of the chart Jacobian of the time t map, by central differences. The
// chart densities are constant, so this is exactly the measure distortion.
inline double jacobian_determinant(const HamiltonianSystem& sys, Point x,
                                   double t, double h = kDefaultStep,
                                   double fd = 1e-6) {
  Point x0 = normalize_point(sys.surface, x);
  Point dxa = flow_chart(sys, {x0.a + fd, x0.b}, t, h) -
              flow_chart(sys, {x0.a - fd, x0.b}, t, h);
  double blo = x0.b, bhi = x0.b;
  if (sys.surface == SurfaceKind::Annulus) {
    // one-sided at the boundary so the probe stays in the domain
    blo = std::max(0.0, x0.b - fd);
    bhi = std::min(1.0, x0.b + fd);
  } else {
    blo = x0.b - fd;
    bhi = x0.b + fd;
  }
  Point dxb = flow_chart(sys, {x0.a, bhi}, t, h) -
              flow_chart(sys, {x0.a, blo}, t, h);
  double da = 2 * fd, db = bhi - blo;
  return (dxa.a / da) * (dxb.b / db) - (dxa.b / da) * (dxb.a / db);
}

namespace detail {

// Winding-like coordinate whose unit increments are full turns: theta-tilde
// on the annulus, clockwise turns about the origin on the disk.
struct AngleTracker {
  SurfaceKind surface;
  double last_raw = 0;  // disk: last atan2
  double value = 0;

  static AngleTracker start(SurfaceKind surf, Point chart) {
    AngleTracker t{surf};
    if (surf == SurfaceKind::Annulus) {
      t.value = chart.a;
    } else {
      if (norm(chart) < 1e-9)
        throw ValidationError("BadParams",
                              "rotation number undefined at the origin");
      t.last_raw = std::atan2(chart.b, chart.a);
      t.value = 0;
    }
    return t;
  }

  void advance(Point chart) {
    if (surface == SurfaceKind::Annulus) {
      value = chart.a;
      return;
    }
    double raw = std::atan2(chart.b, chart.a);
    double d = raw - last_raw;
    const double pi = std::acos(-1.0);
    while (d > pi) d -= 2 * pi;
    while (d < -pi) d += 2 * pi;
    last_raw = raw;
    value -= d / (2 * pi);  // clockwise counts positive
  }
};

// Mean angular displacement per unit time at one step size, horizon-doubled
// until stable.
inline double rho_single_grid(const HamiltonianSystem& sys, Point start,
                              double tol, double h, long n_max) {
  Point x = start;
  AngleTracker track = AngleTracker::start(sys.surface, x);
  const long steps_per_unit = std::max<long>(1, std::lround(1.0 / h));
  const double unit_time = steps_per_unit * h;
  long n = 0;
  auto advance_units = [&](long units) {
    for (long u = 0; u < units; ++u) {
      for (long k = 0; k < steps_per_unit; ++k) {
        x = midpoint_step(sys, x, h);
        track.advance(x);
      }
      ++n;
    }
  };
  double base = sys.surface == SurfaceKind::Annulus ? start.a : 0.0;
  advance_units(64);
  double prev = (track.value - base) / (double(n) * unit_time);
  while (n < n_max) {
    advance_units(n);  // double the horizon
    double cur = (track.value - base) / (double(n) * unit_time);
    if (std::fabs(cur - prev) < tol) return cur;
    prev = cur;
  }
  throw NumericalError("NoConvergence",
                       "rotation number did not settle by horizon " +
                           std::to_string(n_max));
}

}  // namespace detail

// Rotation number of the time-one map along the orbit of x: average
// theta-tilde displacement per iterate (annulus), average clockwise turns
// per iterate (disk). Two step sizes are combined to cancel the integrator's
// quadratic phase error.
inline double rotation_number(const HamiltonianSystem& sys, Point x,
                              double tol = 1e-6, double h = kDefaultStep,
                              long n_max = 16384) {
  Point x0 = normalize_point(sys.surface, x);
  double coarse = detail::rho_single_grid(sys, x0, 0.25 * tol, h, n_max);
  double fine = detail::rho_single_grid(sys, x0, 0.25 * tol, 0.5 * h, n_max);
  return (4 * fine - coarse) / 3;
}

struct TracedOrbit {
  Curve loop;
  double period = 0;
};

// Follow the flow from x until it first returns through the transversal at x,
// and return the closed orbit as a curve. Stationary starts are rejected.
inline TracedOrbit trace_periodic_orbit(const HamiltonianSystem& sys, Point x,
                                        double h = kDefaultStep,
                                        double t_max = 2000.0) {
  Point x0 = normalize_point(sys.surface, x);
  Point v0 = vector_field(sys, x0);
  double speed = norm(v0);
  if (speed < 1e-9)
    throw ValidationError("CriticalLevel",
                          "orbit through a near-stationary point");
  Point n0 = unit(v0);
  auto along = [&](Point q) {
    // signed transversal coordinate of quotient point q relative to x0
    Point d;
    if (sys.surface == SurfaceKind::Annulus) {
      d = {wrap_delta(x0.a, q.a), q.b - x0.b};
    } else {
      d = q - x0;
    }
    return std::pair<double, double>(dot(d, n0), norm(d));
  };
  std::vector<Point> pts{x0};
  Point cur = x0;
  double t = 0;
  bool armed = false;
  const double capture = std::max(4 * h * speed, 1e-6);
  const double spacing = 0.002;  // arclength between recorded vertices
  while (t < t_max) {
    Point prev = cur;
    cur = detail::midpoint_step(sys, cur, h);
    t += h;
    Point q = cur;
    if (sys.surface == SurfaceKind::Annulus) q.a = wrap_unit(q.a);
    auto [a1, r1] = along(q);
    if (!armed) {
      if (r1 > 2 * capture) armed = true;
    } else if (r1 < capture) {
      Point qp = prev;
      if (sys.surface == SurfaceKind::Annulus) qp.a = wrap_unit(qp.a);
      auto [a0, r0] = along(qp);
      (void)r0;
      if (a0 < 0 && a1 >= 0) {
        double u = a0 / (a0 - a1);  // crossing fraction inside this step
        while (pts.size() > 3 &&
               chart_dist(sys.surface, pts.back(), x0) < 0.5 * spacing)
          pts.pop_back();
        return {build_curve(sys.surface, pts, true), t - h + u * h};
      }
    }
    if (chart_dist(sys.surface, q, pts.back()) >= spacing) pts.push_back(q);
  }
  throw NumericalError("NoReturn", "orbit did not close before t_max");
}

struct FixedLoop {
  Curve loop;
  double level = 0;    // s on the annulus, radius on the disk
  int turns = 0;       // integer angular displacement on the loop
  double residual = 0; // max pointwise displacement of the time-one map
};

namespace detail {

// Angular displacement of the time-one map at a transversal level, with the
// integrator's quadratic phase bias cancelled between two step sizes.
inline double unit_displacement_raw(const HamiltonianSystem& sys, double level,
                                    double h) {
  if (sys.surface == SurfaceKind::Annulus) {
    Point y = flow_chart(sys, {0.0, level}, 1.0, h);
    return y.a;
  }
  Point start{level, 0.0};
  AngleTracker track = AngleTracker::start(sys.surface, start);
  Point x = start;
  long steps = std::lround(1.0 / h);
  for (long k = 0; k < steps; ++k) {
    x = midpoint_step(sys, x, h);
    track.advance(x);
  }
  return track.value;
}

inline double unit_displacement(const HamiltonianSystem& sys, double level,
                                double h) {
  double coarse = unit_displacement_raw(sys, level, h);
  double fine = unit_displacement_raw(sys, level, 0.5 * h);
  return (4 * fine - coarse) / 3;
}

}  // namespace detail

inline Curve level_circle(SurfaceKind surf, double level, int nverts = 256) {
  std::vector<Point> v;
  if (surf == SurfaceKind::Annulus) {
    for (int k = 0; k < nverts; ++k)
      v.push_back({double(k) / nverts, level});
  } else {
    const double pi = std::acos(-1.0);
    for (int k = 0; k < nverts; ++k) {
      double a = 2 * pi * double(k) / nverts;
      v.push_back({level * std::cos(a), level * std::sin(a)});
    }
  }
  return build_curve(surf, std::move(v), true);
}

// Largest time-one displacement over samples of a candidate loop. Two step
// sizes are combined so the integrator's quadratic phase drift does not
// masquerade as a real displacement.
inline double loop_residual(const HamiltonianSystem& sys, const Curve& loop,
                            double h, int samples = 64) {
  auto delta = [&](Point p, Point q) {
    if (sys.surface == SurfaceKind::Annulus)
      return Point{wrap_delta(p.a, q.a), q.b - p.b};
    return q - p;
  };
  double worst = 0;
  for (int k = 0; k < samples; ++k) {
    Point p = point_at(loop, double(k) / samples);
    Point d1 = delta(p, flow_point(sys, p, 1.0, h));
    Point d2 = delta(p, flow_point(sys, p, 1.0, 0.5 * h));
    Point d = (1.0 / 3.0) * (4.0 * d2 - d1);
    worst = std::max(worst, norm(d));
  }
  return worst;
}

// Pointwise-fixed essential loops of the time-one map. Candidates come from
// integer crossings of the angular displacement along a transversal; each is
// certified by sampling the actual displacement on the loop. For annulus
// levels the loop is the horizontal circle; if that fails the traced orbit
// through the candidate is tried before the candidate is dropped.
inline std::vector<FixedLoop> find_fixed_loops(const HamiltonianSystem& sys,
                                               double tol = 1e-6,
                                               int samples = 2000,
                                               double h = kDefaultStep) {
  // the boundary circles are invariant unconditionally; scan strictly inside
  const bool annulus = sys.surface == SurfaceKind::Annulus;
  const double lo = 1e-3;
  const double hi = 1.0 - 1e-3;
  std::vector<double> level(samples + 1), disp(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    level[i] = lo + (hi - lo) * double(i) / samples;
    disp[i] = detail::unit_displacement(sys, level[i], h);
  }
  double dmin = *std::min_element(disp.begin(), disp.end());
  double dmax = *std::max_element(disp.begin(), disp.end());
  std::vector<std::pair<double, int>> candidates;  // level, turns
  const double flat = 1e-9;
  for (long k = long(std::floor(dmin)); k <= long(std::ceil(dmax)); ++k) {
    int i = 0;
    while (i <= samples) {
      if (std::fabs(disp[i] - double(k)) <= flat) {
        int j = i;
        while (j + 1 <= samples && std::fabs(disp[j + 1] - double(k)) <= flat)
          ++j;
        candidates.push_back({level[(i + j) / 2], int(k)});
        i = j + 1;
        continue;
      }
      if (i < samples) {
        double a = disp[i] - double(k), b = disp[i + 1] - double(k);
        if ((a < -flat && b > flat) || (a > flat && b < -flat)) {
          double la = level[i], lb = level[i + 1];
          for (int it = 0; it < 60; ++it) {
            double lm = 0.5 * (la + lb);
            double dm = detail::unit_displacement(sys, lm, h) - double(k);
            if ((dm < 0) == (a < 0)) {
              la = lm;
            } else {
              lb = lm;
            }
            if (lb - la < 1e-12) break;
          }
          candidates.push_back({0.5 * (la + lb), int(k)});
        }
      }
      ++i;
    }
  }
  std::sort(candidates.begin(), candidates.end());
  std::vector<FixedLoop> out;
  for (auto [lv, k] : candidates) {
    Curve loop = level_circle(sys.surface, lv);
    double res = loop_residual(sys, loop, h);
    if (res > tol) {
      // not a round invariant loop; try the actual orbit
      try {
        Point seed = annulus ? Point{0.0, lv} : Point{lv, 0.0};
        loop = trace_periodic_orbit(sys, seed, h).loop;
        res = loop_residual(sys, loop, h);
      } catch (const std::runtime_error&) {
        continue;
      }
      if (res > tol) continue;
    }
    out.push_back({std::move(loop), lv, k, res});
  }
  return out;
}

}  // namespace curveobs
