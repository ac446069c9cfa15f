#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "curveobs/intersect.hpp"
#include "oracle.hpp"

using namespace curveobs;
using Catch::Matchers::WithinAbs;

namespace {

Curve vertical_arc(double theta = 0.0) {
  return build_curve(SurfaceKind::Annulus, {{theta, 0.0}, {theta, 1.0}}, false);
}

// PL diagonal winding c times bottom to top, the time one image of a vertical
// arc under a linear twist. n = 35 keeps interior vertices off the dyadic
// verticals the tests cross it with.
Curve twist_image(double c, int n = 35) {
  std::vector<Point> v;
  for (int k = 0; k <= n; ++k) {
    double s = double(k) / n;
    v.push_back({wrap_unit(c * s), s});
  }
  return build_curve(SurfaceKind::Annulus, v, false);
}

Curve core_circle(int n = 8, double s = 0.5) {
  std::vector<Point> v;
  for (int k = 0; k < n; ++k) v.push_back({double(k) / n, s});
  return build_curve(SurfaceKind::Annulus, v, true);
}

}  // namespace

TEST_CASE("a triple twist crosses the vertical arc twice in the interior") {
  Curve L = vertical_arc();
  Curve K = twist_image(3.0);
  auto pat = intersect_curves(L, K);
  REQUIRE(pat.points.size() == 2);
  REQUIRE_THAT(pat.points[0].at.b, WithinAbs(1.0 / 3.0, 1e-9));
  REQUIRE_THAT(pat.points[1].at.b, WithinAbs(2.0 / 3.0, 1e-9));
  REQUIRE_THAT(pat.points[0].at.a, WithinAbs(0.0, 1e-9));
  REQUIRE(pat.points[0].sign == -1);
  REQUIRE(pat.points[1].sign == -1);
  REQUIRE(pat.sigma == std::vector<std::size_t>{0, 1});
  REQUIRE(pat.order_class == OrderClass::MonotoneIncreasing);
  REQUIRE(pat.boundary_excluded == 2);  // the shared endpoints
}

TEST_CASE("a single twist only touches at the shared boundary endpoints") {
  auto pat = intersect_curves(vertical_arc(), twist_image(1.0));
  REQUIRE(pat.points.empty());
  REQUIRE(pat.boundary_excluded == 2);
  REQUIRE(pat.order_class == OrderClass::MonotoneIncreasing);
}

TEST_CASE("reversing one curve reverses the order and flips signs") {
  Curve L = vertical_arc();
  Curve K = reversed(twist_image(3.0));
  auto pat = intersect_curves(L, K);
  REQUIRE(pat.points.size() == 2);
  REQUIRE(pat.points[0].sign == 1);
  REQUIRE(pat.points[1].sign == 1);
  REQUIRE(pat.sigma == std::vector<std::size_t>{1, 0});
  REQUIRE(pat.order_class == OrderClass::MonotoneDecreasing);
}

TEST_CASE("crossings are attributed across the seam") {
  // arc pinned at theta 0.5 against a triple twist: crossings at heights
  // where the twist passes theta 0.5 + integers
  Curve L = vertical_arc(0.5);
  auto pat = intersect_curves(L, twist_image(3.0));
  REQUIRE(pat.points.size() == 3);
  REQUIRE_THAT(pat.points[0].at.b, WithinAbs(1.0 / 6.0, 1e-9));
  REQUIRE_THAT(pat.points[1].at.b, WithinAbs(3.0 / 6.0, 1e-9));
  REQUIRE_THAT(pat.points[2].at.b, WithinAbs(5.0 / 6.0, 1e-9));
}

TEST_CASE("touching away from the boundary is rejected as non transversal") {
  Curve L = vertical_arc(0.3);
  Curve K = build_curve(SurfaceKind::Annulus,
                        {{0.2, 0.0}, {0.3, 0.5}, {0.2, 1.0}}, false);
  REQUIRE_THROWS_AS(intersect_curves(L, K), ValidationError);
  try {
    intersect_curves(L, K);
  } catch (const ValidationError& e) {
    REQUIRE(e.code == "NonTransverse");
  }
}

TEST_CASE("crossings with a closed curve can be circularly monotone") {
  Curve K = core_circle();
  Curve L = build_curve(SurfaceKind::Annulus,
                        {{0.9, 0.0},
                         {0.9, 0.45},
                         {0.925, 0.55},
                         {0.95, 0.45},
                         {0.0, 0.55},
                         {0.05, 0.45},
                         {0.05, 0.0}},
                        false);
  auto pat = intersect_curves(L, K);
  REQUIRE(pat.points.size() == 4);
  REQUIRE(pat.sigma == std::vector<std::size_t>{3, 0, 1, 2});
  REQUIRE(pat.order_class == OrderClass::CircularlyMonotone);
  for (std::size_t i = 0; i + 1 < 4; ++i)
    REQUIRE(pat.points[i].sign == -pat.points[i + 1].sign);
}

TEST_CASE("collar width is adjustable and counts what it drops") {
  Curve L = vertical_arc();
  Curve K = twist_image(3.0);
  // a huge collar swallows the crossing at height one third
  auto pat = intersect_curves(L, K, 0.4);
  REQUIRE(pat.points.empty());
  REQUIRE(pat.boundary_excluded == 4);
  auto tight = intersect_curves(L, K, 1e-6);
  REQUIRE(tight.points.size() == 2);
}

TEST_CASE("classify_order distinguishes the four classes") {
  using C = OrderClass;
  REQUIRE(classify_order({0, 1, 2}, false) == C::MonotoneIncreasing);
  REQUIRE(classify_order({2, 1, 0}, false) == C::MonotoneDecreasing);
  REQUIRE(classify_order({1, 2, 0}, true) == C::CircularlyMonotone);
  REQUIRE(classify_order({1, 2, 0}, false) == C::NonMonotone);
  // a rotation of the reversal is circular too, the loop is just walked the
  // other way round
  REQUIRE(classify_order({1, 0, 2}, true) == C::CircularlyMonotone);
  REQUIRE(classify_order({1, 0, 2, 3}, true) == C::NonMonotone);
  REQUIRE(classify_order({0, 2, 1}, false) == C::NonMonotone);
  REQUIRE(classify_order({}, false) == C::MonotoneIncreasing);
  REQUIRE(classify_order({0}, true) == C::MonotoneIncreasing);
}

namespace {

// random staircase arc, strictly monotone in s, vertices on the dyadic grid
Curve random_staircase(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> dtheta(-255, 255);
  std::uniform_int_distribution<int> start(0, 1023);
  std::vector<Point> v;
  double theta = start(rng) / 1024.0;
  for (int k = 0; k <= n; ++k) {
    v.push_back({wrap_unit(theta), double(k) / n});
    theta += dtheta(rng) / 1024.0;
  }
  return build_curve(SurfaceKind::Annulus, v, false);
}

}  // namespace

TEST_CASE("the engine matches the exact rational oracle on random arcs") {
  std::mt19937 rng(20240817);
  int done = 0, rerolls = 0;
  while (done < 60) {
    REQUIRE(rerolls < 600);
    Curve L, K;
    try {
      L = random_staircase(rng, 4 + int(rng() % 6));
      K = random_staircase(rng, 5 + int(rng() % 7));
    } catch (const ValidationError&) {
      ++rerolls;
      continue;
    }
    IntersectionPattern pat;
    try {
      pat = intersect_curves(L, K, 1.0 / 64);
    } catch (const ValidationError&) {
      ++rerolls;  // vertex contact on the dyadic grid, skip the pair
      continue;
    }
    auto hits = oracle::crossings(oracle::from_curve(L), oracle::from_curve(K),
                                  SurfaceKind::Annulus, oracle::Rat(1, 64));
    REQUIRE(pat.points.size() == hits.size());
    REQUIRE(pat.sigma == oracle::sigma_of(hits));
    for (std::size_t i = 0; i < hits.size(); ++i)
      REQUIRE(pat.points[i].sign == hits[i].sign);
    ++done;
  }
}

TEST_CASE("swapping the curves inverts the pattern") {
  Curve L = vertical_arc(0.5);
  Curve K = twist_image(3.0);
  auto ab = intersect_curves(L, K);
  auto ba = intersect_curves(K, L);
  REQUIRE(ab.points.size() == ba.points.size());
  auto key = [](const IntersectionPoint& p) {
    return std::pair<double, double>(p.at.a, p.at.b);
  };
  auto a = ab.points, b = ba.points;
  std::sort(a.begin(), a.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
  std::sort(b.begin(), b.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE_THAT(a[i].at.a, WithinAbs(b[i].at.a, 1e-9));
    REQUIRE_THAT(a[i].at.b, WithinAbs(b[i].at.b, 1e-9));
    REQUIRE(a[i].sign == -b[i].sign);
    REQUIRE_THAT(a[i].t_L, WithinAbs(b[i].t_K, 1e-9));
  }
}
