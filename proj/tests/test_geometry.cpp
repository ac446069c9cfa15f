#include <catch2/catch_amalgamated.hpp>

#include "curveobs/geometry.hpp"

using namespace curveobs;
using Catch::Matchers::WithinAbs;

TEST_CASE("wrap_unit maps into [0,1)") {
  REQUIRE_THAT(wrap_unit(0.25), WithinAbs(0.25, 1e-15));
  REQUIRE_THAT(wrap_unit(-0.25), WithinAbs(0.75, 1e-15));
  REQUIRE_THAT(wrap_unit(3.75), WithinAbs(0.75, 1e-15));
  REQUIRE(wrap_unit(1.0) == 0.0);
  REQUIRE(wrap_unit(-1e-18) == 0.0);
}

TEST_CASE("wrap_delta picks the nearest representative") {
  REQUIRE_THAT(wrap_delta(0.9, 0.1), WithinAbs(0.2, 1e-15));
  REQUIRE_THAT(wrap_delta(0.1, 0.9), WithinAbs(-0.2, 1e-15));
  REQUIRE_THAT(wrap_delta(0.3, 0.55), WithinAbs(0.25, 1e-15));
  REQUIRE(std::fabs(wrap_delta(0.0, 0.5)) == 0.5);
}

TEST_CASE("normalize_point clamps within tolerance and rejects beyond") {
  Point p = normalize_point(SurfaceKind::Annulus, {1.3, 1.0 + 1e-10});
  REQUIRE_THAT(p.a, WithinAbs(0.3, 1e-12));
  REQUIRE(p.b == 1.0);
  REQUIRE_THROWS_AS(normalize_point(SurfaceKind::Annulus, {0.0, 1.1}),
                    ValidationError);
  Point q = normalize_point(SurfaceKind::Disk, {1.0 + 5e-10, 0.0});
  REQUIRE_THAT(norm(q), WithinAbs(1.0, 1e-12));
  REQUIRE_THROWS_AS(normalize_point(SurfaceKind::Disk, {1.01, 0.0}),
                    ValidationError);
}

TEST_CASE("boundary_distance on both surfaces") {
  REQUIRE_THAT(boundary_distance(SurfaceKind::Annulus, {0.2, 0.3}),
               WithinAbs(0.3, 1e-15));
  REQUIRE_THAT(boundary_distance(SurfaceKind::Annulus, {0.2, 0.9}),
               WithinAbs(0.1, 1e-15));
  REQUIRE_THAT(boundary_distance(SurfaceKind::Disk, {0.6, 0.0}),
               WithinAbs(0.4, 1e-15));
}

TEST_CASE("chart_dist respects the seam") {
  double d = chart_dist(SurfaceKind::Annulus, {0.95, 0.5}, {0.05, 0.5});
  REQUIRE_THAT(d, WithinAbs(0.1, 1e-15));
  double e = chart_dist(SurfaceKind::Disk, {0.0, 0.0}, {0.3, 0.4});
  REQUIRE_THAT(e, WithinAbs(0.5, 1e-15));
}

TEST_CASE("lift_path unrolls across the seam") {
  auto lift = lift_path({{0.9, 0.5}, {0.1, 0.5}, {0.3, 0.6}});
  REQUIRE_THAT(lift[0].t, WithinAbs(0.9, 1e-15));
  REQUIRE_THAT(lift[1].t, WithinAbs(1.1, 1e-15));
  REQUIRE_THAT(lift[2].t, WithinAbs(1.3, 1e-15));
}

TEST_CASE("lift_path rejects half turn jumps") {
  REQUIRE_THROWS_AS(lift_path({{0.0, 0.5}, {0.5, 0.5}}), ValidationError);
}

TEST_CASE("signed_polygon_area uses the surface measure") {
  std::vector<Point> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  REQUIRE_THAT(signed_polygon_area(SurfaceKind::Annulus, square),
               WithinAbs(1.0, 1e-15));
  std::reverse(square.begin(), square.end());
  REQUIRE_THAT(signed_polygon_area(SurfaceKind::Annulus, square),
               WithinAbs(-1.0, 1e-15));
  // the disk carries total measure one, so euclidean area over pi
  std::vector<Point> tri = {{0, 0}, {1, 0}, {0, 1}};
  REQUIRE_THAT(signed_polygon_area(SurfaceKind::Disk, tri),
               WithinAbs(0.5 / 3.14159265358979323846, 1e-15));
}

TEST_CASE("intersect_segments finds a proper crossing with parameters") {
  SegmentHit h;
  auto rel =
      intersect_segments({0, 0}, {1, 1}, {0, 1}, {1, 0}, h);
  REQUIRE(rel == SegmentRelation::Proper);
  REQUIRE_THAT(h.at.a, WithinAbs(0.5, 1e-12));
  REQUIRE_THAT(h.at.b, WithinAbs(0.5, 1e-12));
  REQUIRE_THAT(h.u, WithinAbs(0.5, 1e-12));
  REQUIRE_THAT(h.v, WithinAbs(0.5, 1e-12));
}

TEST_CASE("intersect_segments misses disjoint segments") {
  SegmentHit h;
  REQUIRE(intersect_segments({0, 0}, {1, 0}, {0, 1}, {1, 1}, h) ==
          SegmentRelation::None);
  REQUIRE(intersect_segments({0, 0}, {1, 0}, {2, -1}, {2, 1}, h) ==
          SegmentRelation::None);
}

TEST_CASE("intersect_segments flags touching contact as degenerate") {
  SegmentHit h;
  // shared endpoint
  REQUIRE(intersect_segments({0, 0}, {1, 0}, {1, 0}, {1, 1}, h) ==
          SegmentRelation::Degenerate);
  // endpoint in the interior of the other segment
  REQUIRE(intersect_segments({0, 0}, {1, 0}, {0.5, 0}, {0.5, 1}, h) ==
          SegmentRelation::Degenerate);
  // collinear overlap
  REQUIRE(intersect_segments({0, 0}, {1, 0}, {0.5, 0}, {2, 0}, h) ==
          SegmentRelation::Degenerate);
}

TEST_CASE("orient_sign is guarded near zero") {
  REQUIRE(orient_sign({0, 0}, {1, 0}, {0.5, 1e-14}) == 0);
  REQUIRE(orient_sign({0, 0}, {1, 0}, {0.5, 1e-6}) == 1);
  REQUIRE(orient_sign({0, 0}, {1, 0}, {0.5, -1e-6}) == -1);
}

TEST_CASE("rot90 turns counterclockwise") {
  Point v = rot90({1, 0});
  REQUIRE(v.a == 0.0);
  REQUIRE(v.b == 1.0);
}
