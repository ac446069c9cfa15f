#pragma once

// Family certificates.
//
// Coarse data of a single image curve K = g(L) can force the generating map,
// if it is the time-one map of an autonomous flow, to fix an essential loop
// pointwise: a large endpoint twist or a large swept area leaves the angular
// displacement profile no room to avoid a whole number of turns, and an
// integer-displacement level of an autonomous flow is a loop of fixed points.
// Each family is cut out by one scalar statistic with a strict threshold:
//
//   m1_displacement   cover theta advance between the endpoints of a spanning
//                     image arc, top boundary relative to bottom. Member
//                     above 4.
//   m2_flux           signed cover area swept between L and K. Member above 1
//                     (the annulus has total area 1).
//   disk_area_bound   normalized area enclosed by a loop on the disk. Above
//                     1/2 the loop must meet every diameter, and every
//                     area-preserving image of itself, by area accounting
//                     alone; this family constrains all area-preserving maps,
//                     not only autonomous ones.
//
// Thresholds are strict, and a statistic within kThresholdBand of its line is
// reported as a near miss and not trusted either way: at that distance the
// verdict would ride on discretization error, not on the map.
//
// fl_certificate backs a claimed membership with an explicit fixed loop found
// by simulation. The systems simulated here are autonomous by construction,
// so for a genuine member that search cannot legitimately fail; an empty
// result raises the alarm flag instead of passing silently and must be read
// as a numerics failure, never as a benign edge case.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "curveobs/flow.hpp"
#include "curveobs/intersect.hpp"
#include "curveobs/obstruction.hpp"

namespace curveobs {

enum class FamilyKind { M1Displacement, M2Flux, DiskAreaBound };

inline const char* family_kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::M1Displacement:
      return "m1_displacement";
    case FamilyKind::M2Flux:
      return "m2_flux";
    default:
      return "disk_area_bound";
  }
}

inline constexpr double kM1Threshold = 4.0;
inline constexpr double kM2Threshold = 1.0;
inline constexpr double kDiskAreaThreshold = 0.5;
inline constexpr double kThresholdBand = 1e-9;

struct FamilyVerdict {
  FamilyKind family = FamilyKind::M1Displacement;
  double statistic = 0;
  double threshold = 0;
  bool member = false;
  bool near_threshold = false;
  std::optional<FixedLoop> certificate;  // fixed loop meeting L, when found
  bool alarm = false;  // member whose fixed-loop guarantee failed to check out
};

namespace detail {

inline FamilyVerdict family_verdict(FamilyKind fam, double stat, double thr) {
  FamilyVerdict v;
  v.family = fam;
  v.statistic = stat;
  v.threshold = thr;
  v.near_threshold = std::fabs(stat - thr) <= kThresholdBand;
  v.member = !v.near_threshold && stat > thr;
  return v;
}

inline bool spanning_arc(const Curve& c) {
  if (c.surface != SurfaceKind::Annulus || c.closed) return false;
  auto at = [](double s, double v) { return std::fabs(s - v) <= kDomainTol; };
  double f = c.chart.front().b, b = c.chart.back().b;
  return (at(f, 0) && at(b, 1)) || (at(f, 1) && at(b, 0));
}

inline void require_spanning(const Curve& c, const char* who) {
  if (!spanning_arc(c))
    throw ValidationError(
        "BadParams", std::string(who) + " must span the annulus boundary to boundary");
}

}  // namespace detail

// Cover theta advance between the endpoints of a spanning arc, top relative
// to bottom. Depends only on the curve: re-lifting moves both endpoints by
// the same integer, and reversing the arc swaps which one is read first.
inline double m1_statistic(const Curve& imageL) {
  detail::require_spanning(imageL, "image curve");
  const Point& f = imageL.chart.front();
  const Point& b = imageL.chart.back();
  return f.b > 0.5 ? f.a - b.a : b.a - f.a;
}

inline FamilyVerdict m1_verdict(const Curve& imageL) {
  return detail::family_verdict(FamilyKind::M1Displacement, m1_statistic(imageL),
                                kM1Threshold);
}

struct FluxReport {
  double value = 0;
  std::string method = "area_between_lifts";
  std::string note;
};

// Signed area swept between L and K, computed from one lift of each.
//
// Spanning arcs must cross the annulus in the same direction; the swept
// region is closed off along the two boundary circles, K's lift is anchored
// within half a turn of L's at the bottom boundary, and the sign is positive
// when K sits on the positive-theta side. Closed annulus curves must be
// essential with equal winding; one period of each bounds the region and the
// sign is positive when K sits above L. Disk loops compare enclosed areas.
// Reversing both curves changes neither value.
inline FluxReport flux_between(const Curve& L, const Curve& K) {
  if (L.surface != K.surface)
    throw ValidationError("BadParams", "curves live on different surfaces");
  if (L.closed != K.closed)
    throw ValidationError("BadParams", "flux compares two arcs or two loops");
  FluxReport rep;
  if (L.surface == SurfaceKind::Disk) {
    if (!L.closed)
      throw ValidationError("BadParams", "disk flux needs closed loops");
    rep.value = std::fabs(signed_polygon_area(SurfaceKind::Disk, K.chart)) -
                std::fabs(signed_polygon_area(SurfaceKind::Disk, L.chart));
    rep.method = "enclosed_area_difference";
    rep.note = "positive when the image encloses more normalized area";
    return rep;
  }
  std::vector<Point> poly;
  poly.reserve(L.chart.size() + K.chart.size() + 2);
  if (L.closed) {
    if (std::abs(L.winding) != 1 || K.winding != L.winding)
      throw ValidationError("BadParams",
                            "flux needs essential loops with equal winding");
    // between essential loops every anchor encloses the same area per period
    const double shift = std::round(L.chart.front().a - K.chart.front().a);
    poly = L.chart;
    poly.push_back(L.chart.front() + Point{double(L.winding), 0.0});
    poly.push_back(K.chart.front() + Point{shift + L.winding, 0.0});
    for (auto it = K.chart.rbegin(); it != K.chart.rend(); ++it)
      poly.push_back(*it + Point{shift, 0.0});
    rep.value = double(L.winding) * signed_polygon_area(SurfaceKind::Annulus, poly);
    rep.note =
        "one period per loop, image lift anchored within half a turn of the "
        "source; positive when the image sits above";
    return rep;
  }
  detail::require_spanning(L, "source curve");
  detail::require_spanning(K, "image curve");
  if (std::fabs(L.chart.front().b - K.chart.front().b) > 0.5)
    throw ValidationError("BadParams",
                          "arcs cross the annulus in opposite directions");
  const double up = L.chart.front().b < 0.5 ? 1.0 : -1.0;
  // anchor at the bottom endpoints so the value ignores traversal direction
  const Point& l0 = up > 0 ? L.chart.front() : L.chart.back();
  const Point& k0 = up > 0 ? K.chart.front() : K.chart.back();
  double d = l0.a - k0.a;
  if (std::fabs(d - std::round(d)) > 0.5 - kLiftTol)
    throw ValidationError(
        "AmbiguousLift",
        "image start sits half a turn from the source at the bottom boundary");
  const double shift = std::round(d);
  for (const Point& p : K.chart) poly.push_back(p + Point{shift, 0.0});
  for (auto it = L.chart.rbegin(); it != L.chart.rend(); ++it)
    poly.push_back(*it);
  rep.value = up * signed_polygon_area(SurfaceKind::Annulus, poly);
  rep.note =
      "image lift anchored within half a turn of the source at the shared "
      "start boundary; positive toward increasing theta";
  return rep;
}

inline double m2_statistic(const Curve& L, const Curve& imageL) {
  return flux_between(L, imageL).value;
}

inline FamilyVerdict m2_verdict(const Curve& L, const Curve& imageL) {
  return detail::family_verdict(FamilyKind::M2Flux, m2_statistic(L, imageL),
                                kM2Threshold);
}

// Normalized area enclosed by a loop on the disk.
inline double enclosed_area(const Curve& loop) {
  if (loop.surface != SurfaceKind::Disk || !loop.closed)
    throw ValidationError("BadParams", "enclosed area needs a closed disk loop");
  return std::fabs(signed_polygon_area(SurfaceKind::Disk, loop.chart));
}

enum class AreaConstraint { MustIntersect, NoConstraint };

inline const char* area_constraint_name(AreaConstraint c) {
  return c == AreaConstraint::MustIntersect ? "must_intersect" : "no_constraint";
}

struct DiskAreaReport {
  FamilyVerdict verdict;
  AreaConstraint constraint = AreaConstraint::NoConstraint;
  bool intersects = false;  // whether the loop actually meets L
};

// A connected loop disjoint from a diameter lies in one half of the disk, so
// enclosing more than 1/2 forces an intersection. The report carries the
// observed intersection status next to the verdict; a member found disjoint
// contradicts that accounting (the given L was not a diameter, or an input
// is inconsistent) and raises the alarm.
inline DiskAreaReport disk_area_bound_check(const Curve& loop, const Curve& L) {
  if (L.surface != SurfaceKind::Disk)
    throw ValidationError("BadParams", "disk area bound needs disk curves");
  DiskAreaReport rep;
  rep.verdict = detail::family_verdict(FamilyKind::DiskAreaBound,
                                       enclosed_area(loop), kDiskAreaThreshold);
  rep.constraint = rep.verdict.member ? AreaConstraint::MustIntersect
                                      : AreaConstraint::NoConstraint;
  rep.intersects = detail::dist_curve_curve(SurfaceKind::Disk, loop, L) <= 1e-9;
  rep.verdict.alarm = rep.verdict.member && !rep.intersects;
  return rep;
}

// Measures the family statistic on the simulated image of L and, for a
// member, backs it with a fixed loop of nonzero turns that meets L.
inline FamilyVerdict fl_certificate(const HamiltonianSystem& sys, const Curve& L,
                                    FamilyKind family, double t = 1.0,
                                    double eps = 1e-3, double h = kDefaultStep,
                                    double tol = 1e-6, int samples = 2000) {
  if (family == FamilyKind::DiskAreaBound)
    throw ValidationError("BadParams",
                          "the disk family is certified by disk_area_bound_check");
  Curve K = image_curve(sys, L, t, eps, h);
  FamilyVerdict v = family == FamilyKind::M1Displacement ? m1_verdict(K)
                                                         : m2_verdict(L, K);
  if (!v.member) return v;
  for (FixedLoop& fl : find_fixed_loops(sys, tol, samples, h)) {
    if (fl.turns == 0) continue;
    if (detail::dist_curve_curve(sys.surface, fl.loop, L) > 1e-9) continue;
    v.certificate = std::move(fl);
    break;
  }
  v.alarm = !v.certificate.has_value();
  return v;
}

enum class Conclusion { NonAutonomous, Inconclusive };

inline const char* conclusion_name(Conclusion c) {
  return c == Conclusion::NonAutonomous ? "non_autonomous" : "inconclusive";
}

struct NonautonomyReport {
  Conclusion conclusion = Conclusion::Inconclusive;
  FamilyVerdict family;
  IntersectionPattern pattern;
  ObstructionReport obstruction;
};

// The headline combination for a pair (L, K = g(L)). Membership means an
// autonomous generator would have to fix an essential loop pointwise, and a
// fully obstructed pattern is incompatible with such a loop, so together
// they rule out every autonomous generator. Anything less is inconclusive:
// the obstruction alone does not decide, and neither does membership.
inline NonautonomyReport nonautonomy_verdict(const Curve& L, const Curve& K,
                                             const FamilyVerdict& family,
                                             double delta = kBoundaryCollar,
                                             double min_isolation = 1e-4) {
  NonautonomyReport rep;
  rep.family = family;
  rep.pattern = intersect_curves(L, K, delta);
  rep.obstruction = find_snake_triples(L, K, rep.pattern, min_isolation);
  if (family.member && rep.obstruction.verdict == Verdict::FullyObstructed)
    rep.conclusion = Conclusion::NonAutonomous;
  return rep;
}

}  // namespace curveobs
