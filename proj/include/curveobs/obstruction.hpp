#pragma once

// The curve obstruction itself.
//
// A snake triple is three crossings that are consecutive along both curves,
// carry alternating signs, and whose order along L disagrees with their order
// along K. Detection walks the K-order greedily and certifies each claimed
// triple with an isolation radius: half the clearance between the triple's
// hull (the four connecting sub-arcs) and everything else in the picture.
//
// The per-triple consistency oracle re-derives the order verdict straight
// from the crossing parameters, independent of the detector's bookkeeping.
//
// linearize_at computes the return map differential at a fixed point in the
// frame (tangent to the fixed loop, its quarter turn); the off-diagonal entry
// is the shear rate whose sign field the obstruction cares about.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "curveobs/flow.hpp"
#include "curveobs/intersect.hpp"

namespace curveobs {

struct SnakeTriple {
  std::array<std::size_t, 3> k_idx;    // positions in the K-sorted pattern
  std::array<std::size_t, 3> l_ranks;  // their ranks along L
  std::array<int, 3> signs;
  double isolation = 0;
};

enum class Verdict { Unobstructed, PartiallyObstructed, FullyObstructed };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Unobstructed: return "unobstructed";
    case Verdict::PartiallyObstructed: return "partially_obstructed";
    case Verdict::FullyObstructed: return "fully_obstructed";
  }
  return "unobstructed";
}

struct ObstructionReport {
  std::vector<SnakeTriple> triples;
  Verdict verdict = Verdict::Unobstructed;
  std::size_t points_total = 0;
  std::size_t points_covered = 0;
};

enum class TripleConsistency { Consistent, Inconsistent };

namespace detail {

// rho sends K-positions {0,1,2} to relative L-ranks; order preserving means
// identity, or a rotation when the orders are only defined up to a cyclic
// shift.
inline bool order_preserving3(const std::array<std::size_t, 3>& rho,
                              bool cyclic) {
  if (rho[0] == 0 && rho[1] == 1 && rho[2] == 2) return true;
  if (!cyclic) return false;
  return (rho[0] == 1 && rho[1] == 2 && rho[2] == 0) ||
         (rho[0] == 2 && rho[1] == 0 && rho[2] == 1);
}

inline std::array<std::size_t, 3> relative_order(double a, double b, double c) {
  std::array<double, 3> v{a, b, c};
  std::array<std::size_t, 3> rho{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (v[j] < v[i]) ++rho[i];
  return rho;
}

}  // namespace detail

// Re-derive the order verdict of one triple straight from the crossing
// parameters. k_idx lists the crossings in walking order along K, so the
// relative L-ranks of that list are the whole story.
inline TripleConsistency order_preservation_oracle(
    const IntersectionPattern& pat, const SnakeTriple& t, bool cyclic) {
  auto rho = detail::relative_order(pat.points[t.k_idx[0]].t_L,
                                    pat.points[t.k_idx[1]].t_L,
                                    pat.points[t.k_idx[2]].t_L);
  return detail::order_preserving3(rho, cyclic)
             ? TripleConsistency::Consistent
             : TripleConsistency::Inconsistent;
}

namespace detail {

// distance from a quotient point to a chart polyline, minimized over deck
// shifts of the point
inline double dist_point_curve(SurfaceKind surf, Point q, const Curve& c) {
  int mlo = 0, mhi = 0;
  if (surf == SurfaceKind::Annulus) {
    double clo = c.chart[0].a, chi = c.chart[0].a;
    for (const Point& p : c.chart) {
      clo = std::min(clo, p.a);
      chi = std::max(chi, p.a);
    }
    mlo = int(std::floor(clo - q.a)) - 1;
    mhi = int(std::ceil(chi - q.a)) + 1;
  }
  double best = std::numeric_limits<double>::infinity();
  for (int m = mlo; m <= mhi; ++m) {
    Point qs{q.a + m, q.b};
    for (std::size_t i = 0; i < c.segment_count(); ++i) {
      auto [a, b] = c.segment(i);
      best = std::min(best, point_segment_dist(qs, a, b));
    }
  }
  return best;
}

inline double dist_curve_curve(SurfaceKind surf, const Curve& x,
                               const Curve& y) {
  int mlo = 0, mhi = 0;
  if (surf == SurfaceKind::Annulus) {
    auto span = [](const Curve& c, double& lo, double& hi) {
      lo = hi = c.chart[0].a;
      for (const Point& p : c.chart) {
        lo = std::min(lo, p.a);
        hi = std::max(hi, p.a);
      }
    };
    double xlo, xhi, ylo, yhi;
    span(x, xlo, xhi);
    span(y, ylo, yhi);
    mlo = int(std::floor(xlo - yhi)) - 1;
    mhi = int(std::ceil(xhi - ylo)) + 1;
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.segment_count(); ++i) {
    auto [a, b] = x.segment(i);
    for (std::size_t j = 0; j < y.segment_count(); ++j) {
      auto [c0, c1] = y.segment(j);
      for (int m = mlo; m <= mhi; ++m)
        best = std::min(best, segment_segment_dist(a, b, {c0.a + m, c0.b},
                                                   {c1.a + m, c1.b}));
    }
  }
  return best;
}

// Put three ranks into walking order along their curve. Open curve: sorted.
// Closed curve: rotate the sorted list so the chain starts right after the
// largest cyclic gap, which makes the two chain arcs the short ones that
// contain no other crossing.
inline std::array<std::size_t, 3> chain_ranks(std::array<std::size_t, 3> r,
                                              std::size_t n, bool closed) {
  std::sort(r.begin(), r.end());
  if (!closed) return r;
  std::array<std::size_t, 3> gap{r[1] - r[0], r[2] - r[1], n - r[2] + r[0]};
  std::size_t start = 0;
  if (gap[0] >= gap[1] && gap[0] >= gap[2]) start = 1;
  else if (gap[1] >= gap[2]) start = 2;
  return {r[start % 3], r[(start + 1) % 3], r[(start + 2) % 3]};
}

struct TripleHull {
  std::vector<Curve> arcs;  // two L sub-arcs then two K sub-arcs
};

inline TripleHull triple_hull(const Curve& L, const Curve& K,
                              const IntersectionPattern& pat,
                              const SnakeTriple& t) {
  // L side: crossings in walking order along L, then the two joining arcs
  auto lchain = chain_ranks(t.l_ranks, pat.points.size(), L.closed);
  std::array<double, 3> tl{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (pat.sigma[t.k_idx[j]] == lchain[i])
        tl[i] = pat.points[t.k_idx[j]].t_L;
  TripleHull h;
  h.arcs.push_back(arc_between(L, tl[0], tl[1]));
  h.arcs.push_back(arc_between(L, tl[1], tl[2]));
  // K side: k_idx is already the walking order (a cyclic window may wrap,
  // which arc_between absorbs by walking forward through the seam)
  h.arcs.push_back(arc_between(K, pat.points[t.k_idx[0]].t_K,
                               pat.points[t.k_idx[1]].t_K));
  h.arcs.push_back(arc_between(K, pat.points[t.k_idx[1]].t_K,
                               pat.points[t.k_idx[2]].t_K));
  return h;
}

inline bool ranks_consecutive(const std::array<std::size_t, 3>& r,
                              std::size_t n, bool closed) {
  auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  if (*hi - *lo == 2) return true;
  if (!closed || n < 3) return false;
  // cyclically consecutive iff the complement gap swallows all the slack
  std::array<std::size_t, 3> s = r;
  std::sort(s.begin(), s.end());
  std::array<std::size_t, 3> gap{s[1] - s[0], s[2] - s[1], n - s[2] + s[0]};
  return *std::max_element(gap.begin(), gap.end()) == n - 2;
}

}  // namespace detail

// Greedy triple detection over the K-sorted pattern, then isolation
// certification. Claimed triples that cannot keep min_isolation clearance
// are discarded and their points go back to being uncovered.
inline ObstructionReport find_snake_triples(const Curve& L, const Curve& K,
                                            const IntersectionPattern& pat,
                                            double min_isolation = 1e-4) {
  if (L.surface != K.surface)
    throw ValidationError("BadParams", "curves live on different surfaces");
  ObstructionReport rep;
  rep.points_total = pat.points.size();
  const std::size_t n = pat.points.size();
  if (n < 3) {
    rep.verdict = Verdict::Unobstructed;
    return rep;
  }
  const bool cyclic = L.closed || K.closed;
  const std::size_t windows = K.closed ? n : n - 2;
  std::vector<char> used(n, 0);
  std::vector<SnakeTriple> claimed;
  for (std::size_t i = 0; i < windows; ++i) {
    SnakeTriple t;
    t.k_idx = {i, (i + 1) % n, (i + 2) % n};
    if (used[t.k_idx[0]] || used[t.k_idx[1]] || used[t.k_idx[2]]) continue;
    for (int j = 0; j < 3; ++j) {
      t.l_ranks[j] = pat.sigma[t.k_idx[j]];
      t.signs[j] = pat.points[t.k_idx[j]].sign;
    }
    bool l_consecutive = detail::ranks_consecutive(t.l_ranks, n, L.closed);
    bool alternating =
        t.signs[0] == -t.signs[1] && t.signs[1] == -t.signs[2];
    bool disordered = order_preservation_oracle(pat, t, cyclic) ==
                      TripleConsistency::Inconsistent;
    if (l_consecutive && alternating && disordered) {
      used[t.k_idx[0]] = used[t.k_idx[1]] = used[t.k_idx[2]] = 1;
      claimed.push_back(t);
    }
  }
  // isolation: clearance to other crossings, to the collar, to other hulls
  std::vector<detail::TripleHull> hulls;
  hulls.reserve(claimed.size());
  for (const auto& t : claimed)
    hulls.push_back(detail::triple_hull(L, K, pat, t));
  for (std::size_t a = 0; a < claimed.size(); ++a) {
    double clear = std::numeric_limits<double>::infinity();
    const auto& mine = claimed[a].k_idx;
    for (std::size_t q = 0; q < n; ++q) {
      if (q == mine[0] || q == mine[1] || q == mine[2]) continue;
      for (const Curve& arc : hulls[a].arcs)
        clear = std::min(clear, detail::dist_point_curve(
                                    L.surface, pat.points[q].at, arc));
    }
    for (const Curve& arc : hulls[a].arcs)
      for (const Point& v : arc.chart) {
        double margin = boundary_distance(L.surface, v) - pat.delta;
        clear = std::min(clear, std::max(0.0, margin));
      }
    for (std::size_t b = 0; b < claimed.size(); ++b) {
      if (b == a) continue;
      for (const Curve& arc : hulls[a].arcs)
        for (const Curve& other : hulls[b].arcs)
          clear = std::min(clear,
                           detail::dist_curve_curve(L.surface, arc, other));
    }
    claimed[a].isolation = 0.5 * clear;
    if (claimed[a].isolation >= min_isolation)
      rep.triples.push_back(claimed[a]);
  }
  rep.points_covered = 3 * rep.triples.size();
  if (rep.triples.empty())
    rep.verdict = Verdict::Unobstructed;
  else if (rep.points_covered == rep.points_total)
    rep.verdict = Verdict::FullyObstructed;
  else
    rep.verdict = Verdict::PartiallyObstructed;
  return rep;
}

// ---- linearization at a fixed point --------------------------------------

struct Linearization {
  std::array<double, 4> m{};  // row-major, frame (loop tangent, quarter turn)
  double alpha = 0;           // m[1], the shear rate
};

enum class SignVerdict { ConstantPositive, ConstantNegative, Varies };

inline const char* sign_verdict_name(SignVerdict v) {
  switch (v) {
    case SignVerdict::ConstantPositive: return "constant_positive";
    case SignVerdict::ConstantNegative: return "constant_negative";
    case SignVerdict::Varies: return "varies";
  }
  return "varies";
}

namespace detail {

inline std::array<double, 4> flow_differential(const HamiltonianSystem& sys,
                                               Point p, double t, double fd,
                                               double h) {
  Point da = flow_chart(sys, {p.a + fd, p.b}, t, h) -
             flow_chart(sys, {p.a - fd, p.b}, t, h);
  Point db = flow_chart(sys, {p.a, p.b + fd}, t, h) -
             flow_chart(sys, {p.a, p.b - fd}, t, h);
  return {da.a / (2 * fd), db.a / (2 * fd), da.b / (2 * fd), db.b / (2 * fd)};
}

}  // namespace detail

// Differential of the time-t map at the loop point with parameter par,
// expressed in the orthonormal frame (unit loop tangent, its quarter turn).
// Throws NotFixed when the point actually moves.
inline Linearization linearize_at(const HamiltonianSystem& sys,
                                  const Curve& loop, double par,
                                  double t = 1.0, double h = kDefaultStep,
                                  double fixed_tol = 1e-6) {
  if (sys.surface != loop.surface)
    throw ValidationError("BadParams", "system and loop disagree on surface");
  Point p = point_at(loop, par);
  // the fixed-point check nets out the integrator's quadratic phase drift,
  // same as the residual certification in find_fixed_loops
  auto displacement = [&](double step) {
    Point q = flow_point(sys, p, t, step);
    if (sys.surface == SurfaceKind::Annulus)
      return Point{wrap_delta(p.a, q.a), q.b - p.b};
    return q - p;
  };
  Point d1 = displacement(h);
  Point d2 = displacement(0.5 * h);
  Point drift = (1.0 / 3.0) * (4.0 * d2 - d1);
  if (norm(drift) > fixed_tol)
    throw ValidationError(
        "NotFixed", "loop point moves by " + std::to_string(norm(drift)));
  Point chart_p = chart_point_at(loop, par);
  double bump = 1e-6;
  Point vc;
  if (loop.closed || par + bump <= 1.0)
    vc = unit(chart_point_at(loop, par + bump) - chart_p);
  else
    vc = unit(chart_p - chart_point_at(loop, par - bump));
  Point vg = rot90(vc);
  auto in_frame = [&](std::array<double, 4> d) {
    // M = B^T D B with orthonormal B = [vc vg]
    Point col0{d[0] * vc.a + d[1] * vc.b, d[2] * vc.a + d[3] * vc.b};
    Point col1{d[0] * vg.a + d[1] * vg.b, d[2] * vg.a + d[3] * vg.b};
    return std::array<double, 4>{dot(col0, vc), dot(col1, vc), dot(col0, vg),
                                 dot(col1, vg)};
  };
  Linearization lin;
  lin.m = in_frame(detail::flow_differential(sys, chart_p, t, 1e-5, h));
  double a1 = lin.m[1];
  double a2 = in_frame(detail::flow_differential(sys, chart_p, t, 1e-4, h))[1];
  if (std::fabs(a1 - a2) > 1e-3) {
    // the probes disagree, so the difference quotient is still bending;
    // its error is quadratic in the probe width, extrapolate to zero
    lin.alpha = (100.0 * a1 - a2) / 99.0;
  } else {
    lin.alpha = a1;
  }
  return lin;
}

struct SignConstancy {
  SignVerdict verdict = SignVerdict::Varies;
  std::vector<double> alphas;
};

// Shear-rate sign along the whole fixed loop.
inline SignConstancy sign_constancy_check(const HamiltonianSystem& sys,
                                          const Curve& loop, int samples = 32,
                                          double t = 1.0,
                                          double h = kDefaultStep) {
  if (samples < 1)
    throw ValidationError("BadParams", "sign constancy needs samples");
  SignConstancy out;
  bool all_pos = true, all_neg = true;
  for (int k = 0; k < samples; ++k) {
    double a = linearize_at(sys, loop, double(k) / samples, t, h).alpha;
    out.alphas.push_back(a);
    if (!(a > 1e-9)) all_pos = false;
    if (!(a < -1e-9)) all_neg = false;
  }
  out.verdict = all_pos ? SignVerdict::ConstantPositive
                        : (all_neg ? SignVerdict::ConstantNegative
                                   : SignVerdict::Varies);
  return out;
}

}  // namespace curveobs
