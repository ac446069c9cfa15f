#include <catch2/catch_amalgamated.hpp>

#include "curveobs/flow.hpp"

using namespace curveobs;
using Catch::Matchers::WithinAbs;

namespace {

Curve vertical_arc(double theta = 0.0) {
  return build_curve(SurfaceKind::Annulus, {{theta, 0.0}, {theta, 1.0}}, false);
}

// theta-independent bump hamiltonian sampled on a grid
HamiltonianSystem grid_bump(double amp, std::size_t nx = 8,
                            std::size_t ny = 41) {
  std::vector<double> v(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    double s = double(j) / double(ny - 1);
    double hval = amp * (3 * s * s - 2 * s * s * s);
    for (std::size_t i = 0; i < nx; ++i) v[j * nx + i] = hval;
  }
  return make_grid_field(nx, ny, std::move(v));
}

// theta-dependent field, zero on the two rows against each boundary
HamiltonianSystem grid_wavy(std::size_t nx = 16, std::size_t ny = 33) {
  std::vector<double> v(nx * ny, 0.0);
  const double pi = std::acos(-1.0);
  for (std::size_t j = 2; j + 2 < ny; ++j) {
    double w = std::sin(pi * double(j - 1) / double(ny - 3));
    for (std::size_t i = 0; i < nx; ++i)
      v[j * nx + i] = 0.05 * w * std::sin(2 * pi * double(i) / double(nx));
  }
  return make_grid_field(nx, ny, std::move(v));
}

}  // namespace

TEST_CASE("the linear shear integrates exactly") {
  auto sys = make_linear_shear(3.0);
  Point y = flow_chart(sys, {0.2, 0.5}, 1.0);
  REQUIRE_THAT(y.a, WithinAbs(1.7, 1e-12));
  REQUIRE(y.b == 0.5);
  Point q = flow_point(sys, {0.2, 0.5}, 1.0);
  REQUIRE_THAT(q.a, WithinAbs(0.7, 1e-12));
}

TEST_CASE("flowing backwards undoes the map") {
  auto sys = make_bump_shear(1.7);
  Point p{0.3, 0.62};
  Point r = flow_point(sys, flow_point(sys, p, 1.0), -1.0);
  REQUIRE_THAT(r.a, WithinAbs(p.a, 1e-9));
  REQUIRE_THAT(r.b, WithinAbs(p.b, 1e-9));
}

TEST_CASE("poly and bump shears agree when the coefficients match") {
  auto bump = make_bump_shear(2.0);
  auto poly = make_poly_shear({0.0, 12.0, -12.0});
  for (double s : {0.1, 0.37, 0.5, 0.93}) {
    Point a = flow_point(bump, {0.0, s}, 1.0);
    Point b = flow_point(poly, {0.0, s}, 1.0);
    REQUIRE_THAT(a.a, WithinAbs(b.a, 1e-12));
    REQUIRE_THAT(hamiltonian(bump, {0.0, s}),
                 WithinAbs(hamiltonian(poly, {0.0, s}), 1e-12));
  }
}

TEST_CASE("the radial disk flow turns clockwise and preserves radius") {
  auto sys = make_radial_disk(1.0);
  Point p{0.5, 0.0};
  // phase accuracy of the raw flow is O(h^2), radius is exact
  Point q = flow_point(sys, p, 0.25);  // quarter period
  REQUIRE_THAT(q.a, WithinAbs(0.0, 1e-5));
  REQUIRE_THAT(q.b, WithinAbs(-0.5, 1e-5));
  REQUIRE_THAT(norm(q), WithinAbs(0.5, 1e-12));
}

TEST_CASE("image_curve refines the twist image below eps") {
  auto sys = make_linear_shear(3.0);
  Curve img = image_curve(sys, vertical_arc(), 1.0, 1e-2);
  REQUIRE_FALSE(img.closed);
  REQUIRE(img.vertices.front().b == 0.0);
  REQUIRE(img.vertices.back().b == 1.0);
  for (std::size_t i = 0; i < img.segment_count(); ++i) {
    auto [p, q] = img.segment(i);
    REQUIRE(norm(q - p) <= 1e-2 + 1e-12);
  }
  for (const Point& v : img.vertices)
    REQUIRE_THAT(wrap_delta(v.a, wrap_unit(3.0 * v.b)), WithinAbs(0.0, 1e-9));
}

TEST_CASE("image_curve keeps closed curves closed with the same winding") {
  auto sys = make_bump_shear(2.0);
  std::vector<Point> v;
  for (int k = 0; k < 12; ++k) v.push_back({k / 12.0, 0.4 + 0.05 * (k % 2)});
  Curve loop = build_curve(SurfaceKind::Annulus, v, true);
  Curve img = image_curve(sys, loop, 1.0, 5e-3);
  REQUIRE(img.closed);
  REQUIRE(img.winding == 1);
}

TEST_CASE("the time one map is area preserving") {
  for (double t : {0.5, 1.0}) {
    REQUIRE_THAT(jacobian_determinant(make_linear_shear(3.0), {0.3, 0.4}, t),
                 WithinAbs(1.0, 1e-6));
    REQUIRE_THAT(jacobian_determinant(make_bump_shear(2.0), {0.7, 0.25}, t),
                 WithinAbs(1.0, 1e-6));
    REQUIRE_THAT(jacobian_determinant(make_radial_disk(1.0), {0.3, 0.2}, t),
                 WithinAbs(1.0, 1e-6));
    REQUIRE_THAT(jacobian_determinant(grid_wavy(), {0.3, 0.5}, t),
                 WithinAbs(1.0, 1e-6));
  }
}

TEST_CASE("rotation numbers of shears read off the angular speed") {
  auto sys = make_linear_shear(3.0);
  for (double s : {0.1, 0.5, 1.0 / 3.0, 0.9})
    REQUIRE_THAT(rotation_number(sys, {0.0, s}), WithinAbs(3.0 * s, 1e-6));
  REQUIRE_THAT(rotation_number(make_bump_shear(2.0), {0.2, 0.5}),
               WithinAbs(3.0, 1e-6));
}

TEST_CASE("disk rotation numbers are clockwise positive") {
  REQUIRE_THAT(rotation_number(make_radial_disk(1.0), {0.5, 0.0}),
               WithinAbs(1.0, 1e-6));
  REQUIRE_THAT(rotation_number(make_radial_disk(-2.0), {0.0, 0.3}),
               WithinAbs(-2.0, 1e-6));
  REQUIRE_THROWS_AS(rotation_number(make_radial_disk(1.0), {0.0, 0.0}),
                    ValidationError);
}

TEST_CASE("grid fields reproduce the sampled shear") {
  auto sys = grid_bump(2.0);
  REQUIRE_THAT(rotation_number(sys, {0.0, 0.5}, 1e-6), WithinAbs(3.0, 1e-2));
  // s is exactly invariant because every row is theta-constant
  Point y = flow_point(sys, {0.3, 0.37}, 1.0);
  REQUIRE(y.b == 0.37);
  // the boundary stays put in s but may slide in theta
  Point b = flow_point(sys, {0.3, 1.0}, 1.0);
  REQUIRE(b.b == 1.0);
}

TEST_CASE("grid validation rejects theta-varying boundary rows") {
  std::vector<double> v(8 * 4, 0.0);
  v[1] = 0.5;  // row 0 not constant
  REQUIRE_THROWS_AS(make_grid_field(8, 4, v), ValidationError);
  REQUIRE_THROWS_AS(make_grid_field(8, 4, std::vector<double>(7)),
                    ValidationError);
}

TEST_CASE("trace_periodic_orbit closes shear and disk orbits") {
  auto orb = trace_periodic_orbit(make_linear_shear(1.0), {0.0, 0.5});
  REQUIRE(orb.loop.closed);
  REQUIRE(std::abs(orb.loop.winding) == 1);
  REQUIRE_THAT(orb.period, WithinAbs(2.0, 1e-2));
  for (const Point& v : orb.loop.vertices)
    REQUIRE_THAT(v.b, WithinAbs(0.5, 1e-9));

  auto disk = trace_periodic_orbit(make_radial_disk(1.0), {0.5, 0.0});
  REQUIRE(disk.loop.closed);
  REQUIRE_THAT(disk.period, WithinAbs(1.0, 1e-2));
  for (const Point& v : disk.loop.vertices)
    REQUIRE_THAT(norm(v), WithinAbs(0.5, 1e-6));

  REQUIRE_THROWS_AS(trace_periodic_orbit(make_linear_shear(1.0), {0.2, 0.0}),
                    ValidationError);
}

TEST_CASE("find_fixed_loops locates integer crossings of the twist profile") {
  auto loops = find_fixed_loops(make_linear_shear(3.5));
  REQUIRE(loops.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    REQUIRE(loops[i].turns == int(i) + 1);
    REQUIRE_THAT(loops[i].level, WithinAbs((2.0 * (i + 1)) / 7.0, 1e-6));
    REQUIRE(loops[i].residual <= 1e-6);
    REQUIRE(loops[i].loop.closed);
  }
}

TEST_CASE("find_fixed_loops handles the bump shear tangency") {
  auto loops = find_fixed_loops(make_bump_shear(2.0));
  REQUIRE(loops.size() == 5);
  double r23 = std::sqrt(2.0 / 3.0), r13 = std::sqrt(1.0 / 3.0);
  std::vector<double> expect = {(1 - r23) / 2, (1 - r13) / 2, 0.5,
                                (1 + r13) / 2, (1 + r23) / 2};
  std::vector<int> turns = {1, 2, 3, 2, 1};
  for (std::size_t i = 0; i < 5; ++i) {
    REQUIRE_THAT(loops[i].level, WithinAbs(expect[i], 1e-6));
    REQUIRE(loops[i].turns == turns[i]);
  }
}

TEST_CASE("an integer disk rotation fixes every circle") {
  auto loops = find_fixed_loops(make_radial_disk(2.0));
  REQUIRE(loops.size() == 1);  // one representative for the plateau
  REQUIRE(loops[0].turns == 2);
  REQUIRE(loops[0].residual <= 1e-6);
  REQUIRE(find_fixed_loops(make_radial_disk(0.5)).empty());
}
