#pragma once

// Transversal intersection pattern of two PL curves on one surface.
//
// Both curves are lifted to the chart and every segment pair is tested, with
// integer theta shifts of the second curve on the annulus so seam crossings
// are found exactly once. Contacts that are not proper transversal crossings
// are rejected, except inside the boundary collar where the curves are
// allowed to touch (shared endpoints of an arc and its image live there).
//
// The resulting pattern is ordered along the second curve K; sigma[i] is the
// rank of the i-th crossing in the order along the first curve L. The order
// class summarizes sigma.

#include "curveobs/curve.hpp"

namespace curveobs {

struct IntersectionPoint {
  Point at;        // quotient coordinates
  double t_L = 0;  // normalized arclength along L
  double t_K = 0;  // normalized arclength along K
  int sign = 0;    // orientation of (tangent of L, tangent of K)
};

enum class OrderClass {
  MonotoneIncreasing,
  MonotoneDecreasing,
  CircularlyMonotone,
  NonMonotone,
};

inline const char* order_class_name(OrderClass c) {
  switch (c) {
    case OrderClass::MonotoneIncreasing: return "monotone_increasing";
    case OrderClass::MonotoneDecreasing: return "monotone_decreasing";
    case OrderClass::CircularlyMonotone: return "circularly_monotone";
    case OrderClass::NonMonotone: return "non_monotone";
  }
  return "non_monotone";
}

struct IntersectionPattern {
  std::vector<IntersectionPoint> points;  // sorted by t_K
  std::vector<std::size_t> sigma;         // K-order position -> L-order rank
  OrderClass order_class = OrderClass::MonotoneIncreasing;
  std::size_t boundary_excluded = 0;
  double delta = 0;
};

inline constexpr double kBoundaryCollar = 0.02;

// sigma as a permutation: is it the identity, the reversal, or (for closed
// curves, where the starting vertex is a choice) a cyclic rotation of one?
inline OrderClass classify_order(const std::vector<std::size_t>& sigma,
                                 bool cyclic) {
  const std::size_t n = sigma.size();
  if (n < 2) return OrderClass::MonotoneIncreasing;
  bool inc = true, dec = true;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (sigma[i + 1] != sigma[i] + 1) inc = false;
    if (sigma[i] != sigma[i + 1] + 1) dec = false;
  }
  if (inc && sigma[0] == 0) return OrderClass::MonotoneIncreasing;
  if (dec && sigma[0] == n - 1) return OrderClass::MonotoneDecreasing;
  if (cyclic) {
    bool cyc_inc = true, cyc_dec = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (sigma[(i + 1) % n] != (sigma[i] + 1) % n) cyc_inc = false;
      if (sigma[i] != (sigma[(i + 1) % n] + 1) % n) cyc_dec = false;
    }
    if (cyc_inc || cyc_dec) return OrderClass::CircularlyMonotone;
  }
  return OrderClass::NonMonotone;
}

inline IntersectionPattern intersect_curves(const Curve& L, const Curve& K,
                                            double delta = kBoundaryCollar) {
  if (L.surface != K.surface)
    throw ValidationError("BadParams", "curves live on different surfaces");
  if (delta < 0 || delta >= 0.5)
    throw ValidationError("BadParams", "collar width outside [0, 0.5)");
  IntersectionPattern pat;
  pat.delta = delta;
  const bool annulus = L.surface == SurfaceKind::Annulus;
  const std::size_t nL = L.segment_count(), nK = K.segment_count();
  for (std::size_t i = 0; i < nL; ++i) {
    auto [p0, p1] = L.segment(i);
    double la = std::min(p0.a, p1.a), lb = std::max(p0.a, p1.a);
    for (std::size_t j = 0; j < nK; ++j) {
      auto [q0, q1] = K.segment(j);
      double ka = std::min(q0.a, q1.a), kb = std::max(q0.a, q1.a);
      int mlo = 0, mhi = 0;
      if (annulus) {
        mlo = int(std::ceil(la - kb - 1e-12));
        mhi = int(std::floor(lb - ka + 1e-12));
      }
      for (int m = mlo; m <= mhi; ++m) {
        Point s0 = q0, s1 = q1;
        s0.a += m;
        s1.a += m;
        SegmentHit h;
        SegmentRelation rel = intersect_segments(p0, p1, s0, s1, h);
        if (rel == SegmentRelation::None) continue;
        Point at = h.at;
        if (annulus) at.a = wrap_unit(at.a);
        if (rel == SegmentRelation::Degenerate) {
          // touching is tolerated only inside the collar, where the shared
          // boundary endpoints of an arc and its image land
          Point ref = at;
          if (boundary_distance(L.surface, normalize_point(L.surface, ref)) <
              delta) {
            ++pat.boundary_excluded;
            continue;
          }
          throw ValidationError("NonTransverse",
                                "curves touch without crossing near theta-like "
                                "coordinate " +
                                    std::to_string(ref.a));
        }
        Point dl = p1 - p0, dk = s1 - s0;
        if (std::fabs(cross(unit(dl), unit(dk))) < 1e-9)
          throw ValidationError("NonTransverse",
                                "nearly tangent crossing at segment pair " +
                                    std::to_string(i) + "," + std::to_string(j));
        IntersectionPoint ip;
        ip.at = normalize_point(L.surface, at);
        ip.t_L = (L.cum[i] + h.u * (L.cum[i + 1] - L.cum[i])) / L.length;
        ip.t_K = (K.cum[j] + h.v * (K.cum[j + 1] - K.cum[j])) / K.length;
        ip.sign = cross(dl, dk) > 0 ? 1 : -1;
        if (boundary_distance(L.surface, ip.at) < delta) {
          ++pat.boundary_excluded;
          continue;
        }
        pat.points.push_back(ip);
      }
    }
  }
  std::sort(pat.points.begin(), pat.points.end(),
            [](const IntersectionPoint& a, const IntersectionPoint& b) {
              return a.t_K < b.t_K;
            });
  // rank the crossings along L
  const std::size_t n = pat.points.size();
  std::vector<std::size_t> by_l(n);
  for (std::size_t i = 0; i < n; ++i) by_l[i] = i;
  std::sort(by_l.begin(), by_l.end(), [&](std::size_t a, std::size_t b) {
    return pat.points[a].t_L < pat.points[b].t_L;
  });
  pat.sigma.assign(n, 0);
  for (std::size_t rank = 0; rank < n; ++rank) pat.sigma[by_l[rank]] = rank;
  pat.order_class = classify_order(pat.sigma, L.closed || K.closed);
  return pat;
}

}  // namespace curveobs
