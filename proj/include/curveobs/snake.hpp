#pragma once

// Snake insertion: replace a short piece of K around a crossing with a
// detour that meets L three times instead of once, in reversed order along
// L and with alternating signs. The detour is drawn in the affine frame
// spanned by L's tangent and K's tangent at the crossing, so in frame
// coordinates L is the axis q = 0 and the incoming K is the axis p = 0.
// Simplicity of the template is then an affine-invariant bookkeeping fact
// and holds for every transversal crossing angle.
//
// Template, with r = width/2 and b = width/8 and amplitude cap A:
//
//   S = (0,-r) -> (0,A) -> (-b,A) -> (-b,-A/2) -> (-2b,-A/2) -> (-2b,0.6A)
//     -> E = (0,r)
//
// crossing q = 0 at p ~ 0, p = -b and p = -2b: reversed along L, signs
// (eta, -eta, eta). Everything is re-validated after construction; when
// validation fails the width and amplitude are halved and the insertion is
// retried, a bounded number of times, before giving up as Crowded.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "curveobs/obstruction.hpp"

namespace curveobs {

struct SnakeParams {
  double width = 0.02;      // arclength of K replaced around each crossing
  double amplitude = 0.02;  // cap on the detour's reach along K's passage
  int max_shrink = 6;       // halvings allowed before giving up
};

struct SnakeReport {
  Curve perturbed;
  IntersectionPattern pattern;    // crossings of (L, perturbed)
  ObstructionReport obstruction;  // triples found in that pattern
  double width = 0;               // parameter values that survived
  double amplitude = 0;
  int shrinks = 0;
  double hausdorff = 0;  // measured distance between K and the perturbation
  std::size_t crossings_before = 0;
  std::size_t crossings_after = 0;
};

// Sampled symmetric Hausdorff distance between two curves.
inline double hausdorff_distance(const Curve& a, const Curve& b,
                                 double step = 0.002) {
  auto one_sided = [&](const Curve& x, const Curve& y) {
    int n = std::max(2, int(std::ceil(x.length / step)));
    double worst = 0;
    for (int k = 0; k <= n; ++k) {
      Point p = point_at(x, double(k) / n);
      worst = std::max(worst, detail::dist_point_curve(x.surface, p, y));
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

namespace detail {

struct SnakeFailure {
  std::string reason;
};

// Chart vertices [S, T1..T5, E] of one detour, or a failure description.
inline std::optional<std::vector<Point>> build_detour(
    const Curve& L, const Curve& K, const IntersectionPoint& hit, double w,
    double a, SnakeFailure& why) {
  const double r = w / 2, b = w / 8;
  Point x0 = chart_point_at(K, hit.t_K);
  Point tl = tangent_at(L, hit.t_L);
  Point tk = tangent_at(K, hit.t_K);
  double det = cross(tl, tk);
  if (std::fabs(det) < 1e-9) {
    why.reason = "crossing is numerically tangent";
    return std::nullopt;
  }
  auto to_frame = [&](Point v) {
    return Point{(tk.b * v.a - tk.a * v.b) / det,
                 (-tl.b * v.a + tl.a * v.b) / det};
  };
  auto from_frame = [&](Point f) { return x0 + f.a * tl + f.b * tk; };
  // attachment points on K, half a width to each side along the arc
  double ts = hit.t_K - r / K.length;
  double te = hit.t_K + r / K.length;
  if (K.closed) {
    ts = wrap_unit(ts);
    te = wrap_unit(te);
  }
  Point S = chart_point_at(K, ts);
  Point E = chart_point_at(K, te);
  if (K.closed && K.surface == SurfaceKind::Annulus) {
    // chart_point_at wraps the parameter; rebase near x0
    S.a -= std::round((S.a - x0.a));
    E.a -= std::round((E.a - x0.a));
  }
  Point fs = to_frame(S - x0);
  Point fe = to_frame(E - x0);
  if (!(fs.b < 0 && fe.b > 0)) {
    why.reason = "attachment points are not on opposite sides";
    return std::nullopt;
  }
  if (std::fabs(fs.a) > b / 2 || std::fabs(fe.a) > b / 2) {
    why.reason = "K bends too much inside the replaced piece";
    return std::nullopt;
  }
  // L has to run straight under the whole station range
  {
    double target =
        (L.closed ? hit.t_L - std::floor(hit.t_L) : hit.t_L) * L.length;
    std::size_t lo = 0, hi = L.cum.size() - 1;
    while (lo + 1 < hi) {
      std::size_t mid = (lo + hi) / 2;
      (L.cum[mid] <= target ? lo : hi) = mid;
    }
    double back = target - L.cum[lo];
    double front = L.cum[lo + 1] - target;
    if (back < 2.5 * b || front < b) {
      why.reason = "crossing sits too close to a corner of L";
      return std::nullopt;
    }
  }
  double A = std::min(a, 0.475 * std::min(-fs.b, fe.b));
  std::vector<Point> out;
  out.push_back(S);
  out.push_back(from_frame({0, A}));
  out.push_back(from_frame({-b, A}));
  out.push_back(from_frame({-b, -A / 2}));
  out.push_back(from_frame({-2 * b, -A / 2}));
  out.push_back(from_frame({-2 * b, 0.6 * A}));
  out.push_back(E);
  return out;
}

struct SnakeAttempt {
  Curve perturbed;
  IntersectionPattern pattern;
  ObstructionReport obstruction;
};

inline std::optional<SnakeAttempt> attempt_snakes(
    const Curve& L, const Curve& K, const IntersectionPattern& base,
    const std::vector<std::size_t>& targets, double w, double a,
    SnakeFailure& why) {
  const double r = w / 2, b = w / 8;
  const std::size_t n = base.points.size();
  std::vector<char> is_target(n, 0);
  for (std::size_t i : targets) is_target[i] = 1;
  // cut intervals must stay inside K and clear of every other crossing
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_target[i]) continue;
    double li = base.points[i].t_K * K.length;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double lj = base.points[j].t_K * K.length;
      double gap = std::fabs(lj - li);
      if (K.closed) gap = std::min(gap, K.length - gap);
      double need = is_target[j] ? 2 * r + b : r + b;
      if (gap < need) {
        why.reason = "crossings closer along K than the snake width";
        return std::nullopt;
      }
    }
    if (!K.closed && (li < r + b || K.length - li < r + b)) {
      why.reason = "crossing too close to an endpoint of K";
      return std::nullopt;
    }
  }
  // one detour per target, keyed by position in the K order
  std::vector<std::vector<Point>> detours(n);
  for (std::size_t i : targets) {
    auto d = build_detour(L, K, base.points[i], w, a, why);
    if (!d) return std::nullopt;
    detours[i] = std::move(*d);
  }
  // stitch: pieces of K between consecutive cuts, detours in between
  std::vector<Point> verts;
  auto push = [&](Point chart_pt) {
    if (K.surface == SurfaceKind::Annulus) chart_pt.a = wrap_unit(chart_pt.a);
    if (verts.empty() ||
        chart_dist(K.surface, verts.back(), chart_pt) > 1e-12)
      verts.push_back(chart_pt);
  };
  auto push_arc = [&](double from, double to) {
    Curve piece = arc_between(K, from, to);
    for (const Point& v : piece.vertices) push(v);
  };
  std::vector<std::size_t> order;  // targets sorted along K
  for (std::size_t i = 0; i < n; ++i)
    if (is_target[i]) order.push_back(i);
  auto cut_lo = [&](std::size_t i) {
    double t = base.points[i].t_K - r / K.length;
    return K.closed ? wrap_unit(t) : t;
  };
  auto cut_hi = [&](std::size_t i) {
    double t = base.points[i].t_K + r / K.length;
    return K.closed ? wrap_unit(t) : t;
  };
  try {
    if (K.closed) {
      for (std::size_t k = 0; k < order.size(); ++k) {
        for (const Point& v : detours[order[k]]) push(v);
        push_arc(cut_hi(order[k]), cut_lo(order[(k + 1) % order.size()]));
      }
      if (chart_dist(K.surface, verts.back(), verts.front()) <= 1e-12)
        verts.pop_back();
    } else {
      push_arc(0.0, cut_lo(order.front()));
      for (std::size_t k = 0; k < order.size(); ++k) {
        for (const Point& v : detours[order[k]]) push(v);
        double next =
            k + 1 < order.size() ? cut_lo(order[k + 1]) : 1.0;
        push_arc(cut_hi(order[k]), next);
      }
    }
    SnakeAttempt out;
    out.perturbed = build_curve(K.surface, std::move(verts), K.closed);
    out.pattern = intersect_curves(L, out.perturbed, base.delta);
    if (out.pattern.points.size() != n + 2 * targets.size()) {
      why.reason = "perturbation changed the crossing count unexpectedly";
      return std::nullopt;
    }
    out.obstruction = find_snake_triples(L, out.perturbed, out.pattern);
    // every inserted snake must come back as a certified triple with the
    // advertised sign sequence, right where the original crossing was
    for (std::size_t i : targets) {
      Point at = base.points[i].at;
      int eta = base.points[i].sign;
      bool found = false;
      for (const auto& t : out.obstruction.triples) {
        bool local = true;
        for (int j = 0; j < 3; ++j)
          local = local && chart_dist(K.surface,
                                      out.pattern.points[t.k_idx[j]].at,
                                      at) <= w;
        if (local && t.signs == std::array<int, 3>{eta, -eta, eta}) {
          found = true;
          break;
        }
      }
      if (!found) {
        why.reason = "inserted snake did not certify as a triple";
        return std::nullopt;
      }
    }
    return out;
  } catch (const ValidationError& e) {
    why.reason = e.what();
    return std::nullopt;
  }
}

inline SnakeReport snake_engine(const Curve& L, const Curve& K,
                                const std::vector<std::size_t>& targets,
                                SnakeParams P) {
  if (L.surface != K.surface)
    throw ValidationError("BadParams", "curves live on different surfaces");
  if (!(P.width > 0) || !(P.amplitude > 0) || P.max_shrink < 0)
    throw ValidationError("BadParams", "snake parameters must be positive");
  IntersectionPattern base = intersect_curves(L, K);
  for (std::size_t i : targets)
    if (i >= base.points.size())
      throw ValidationError("BadParams", "crossing index out of range");
  SnakeReport rep;
  rep.crossings_before = base.points.size();
  if (targets.empty()) {
    rep.perturbed = K;
    rep.pattern = base;
    rep.obstruction = find_snake_triples(L, K, base);
    rep.crossings_after = base.points.size();
    rep.width = P.width;
    rep.amplitude = P.amplitude;
    return rep;
  }
  double w = P.width, a = P.amplitude;
  SnakeFailure why{"no attempt made"};
  for (int shrink = 0; shrink <= P.max_shrink; ++shrink) {
    auto got = attempt_snakes(L, K, base, targets, w, a, why);
    if (got) {
      rep.perturbed = std::move(got->perturbed);
      rep.pattern = std::move(got->pattern);
      rep.obstruction = std::move(got->obstruction);
      rep.width = w;
      rep.amplitude = a;
      rep.shrinks = shrink;
      rep.crossings_after = rep.pattern.points.size();
      rep.hausdorff = hausdorff_distance(K, rep.perturbed);
      return rep;
    }
    w /= 2;
    a /= 2;
  }
  throw ValidationError("Crowded",
                        "snake insertion failed after " +
                            std::to_string(P.max_shrink + 1) +
                            " attempts: " + why.reason);
}

}  // namespace detail

// Insert one snake at the crossing with the given position in the K-sorted
// pattern of (L, K).
inline SnakeReport insert_snake(const Curve& L, const Curve& K,
                                std::size_t crossing, SnakeParams P = {}) {
  return detail::snake_engine(L, K, {crossing}, P);
}

// Insert a snake at every crossing of (L, K). On success the perturbed
// pattern has exactly three times as many crossings and every one of them
// is covered by a certified triple.
inline SnakeReport perturb_all(const Curve& L, const Curve& K,
                               SnakeParams P = {}) {
  std::vector<std::size_t> all(intersect_curves(L, K).points.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return detail::snake_engine(L, K, all, P);
}

}  // namespace curveobs
