#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "curveobs/io.hpp"
#include "curveobs/snake.hpp"

using namespace curveobs;

namespace {

Curve vertical_arc(double theta) {
  return build_curve(SurfaceKind::Annulus, {{theta, 0.0}, {theta, 1.0}}, false);
}

// emit, parse, emit again; both emissions must agree byte for byte
std::string roundtrip(const Document& doc) {
  std::string first = emit_document(doc);
  std::string second = emit_document(parse_document(first));
  CHECK(second == first);
  return first;
}

std::string schema_message(const std::string& text) {
  try {
    parse_document(text);
  } catch (const ValidationError& e) {
    CHECK(e.code == "SchemaError");
    return e.what();
  }
  FAIL("expected a SchemaError");
  return {};
}

}  // namespace

TEST_CASE("curve documents round-trip") {
  auto doc = roundtrip(make_document(build_curve(
      SurfaceKind::Annulus, {{0.37, 0.0}, {0.9, 0.41}, {0.62, 1.0}}, false)));
  CHECK(doc.find("\"kind\":\"curve\"") != std::string::npos);
  CHECK(doc.find("\"schema_version\":1") != std::string::npos);
  CHECK(doc.find("\"spanning\":true") != std::string::npos);
  CHECK(doc.back() == '\n');

  roundtrip(make_document(build_curve(
      SurfaceKind::Disk, {{0.5, 0.0}, {0.0, 0.5}, {-0.5, 0.0}, {0.0, -0.5}},
      true)));
  // interior arc keeps its spanning flag off
  auto interior = roundtrip(make_document(build_curve(
      SurfaceKind::Annulus, {{0.1, 0.3}, {0.4, 0.6}}, false, false)));
  CHECK(interior.find("\"spanning\":false") != std::string::npos);
  // a closed loop carries no spanning key at all
  auto loop = roundtrip(make_document(build_curve(
      SurfaceKind::Annulus,
      {{0.0, 0.5}, {0.3, 0.4}, {0.6, 0.5}, {0.9, 0.6}}, true)));
  CHECK(loop.find("spanning") == std::string::npos);
}

TEST_CASE("the minimal curve document parses") {
  Document doc = parse_document(
      "{\"schema_version\":1,\"kind\":\"curve\",\"surface\":\"annulus\","
      "\"closed\":false,\"vertices\":[[0,0],[0,1]]}");
  REQUIRE(doc.kind() == DocKind::Curve);
  const Curve& c = std::get<Curve>(doc.payload);
  CHECK(c.surface == SurfaceKind::Annulus);
  CHECK_FALSE(c.closed);
  REQUIRE(c.vertices.size() == 2);
  CHECK(c.vertices[1].b == 1.0);
  // emission normalizes: the optional spanning flag is made explicit
  CHECK(emit_document(doc).find("\"spanning\":true") != std::string::npos);
}

TEST_CASE("system documents round-trip for every field kind") {
  roundtrip(make_document(make_linear_shear(3.0)));
  roundtrip(make_document(make_poly_shear({0.5, -1.0, 2.0})));
  roundtrip(make_document(make_bump_shear(2.0)));
  roundtrip(make_document(make_radial_disk(1.0)));
  std::vector<double> v(5 * 6);
  for (std::size_t j = 0; j < 6; ++j)
    for (std::size_t i = 0; i < 5; ++i) v[j * 5 + i] = 0.1 * double(j);
  auto doc = roundtrip(make_document(make_grid_field(5, 6, v)));
  CHECK(doc.find("\"field\":\"grid_field\"") != std::string::npos);
  CHECK(doc.find("\"nx\":5") != std::string::npos);
}

TEST_CASE("pattern and obstruction documents round-trip") {
  Curve L = vertical_arc(0.0);
  Curve K = build_curve(
      SurfaceKind::Annulus,
      {{-0.2, 0.0}, {0.2, 0.4}, {-0.2, 0.7}, {0.2, 1.0}}, false);
  IntersectionPattern pat = intersect_curves(L, K);
  REQUIRE(pat.points.size() == 3);
  std::string text = roundtrip(make_document(pat));
  CHECK(text.find("\"order_class\":") != std::string::npos);

  ObstructionReport rep = find_snake_triples(L, K, pat);
  std::string rtext = roundtrip(make_document(rep));
  CHECK(rtext.find("\"verdict\":") != std::string::npos);

  // parsed pattern carries the same data, not a re-derivation
  auto back = std::get<IntersectionPattern>(parse_document(text).payload);
  REQUIRE(back.points.size() == pat.points.size());
  CHECK(back.sigma == pat.sigma);
  CHECK(back.order_class == pat.order_class);
  CHECK(back.points[1].sign == pat.points[1].sign);
}

TEST_CASE("family verdicts round-trip with and without certificate") {
  FamilyVerdict plain = m1_verdict(vertical_arc(0.2));
  std::string ptext = roundtrip(make_document(plain));
  CHECK(ptext.find("certificate") == std::string::npos);

  FamilyVerdict with = plain;
  with.member = true;
  with.statistic = 5.0;
  FixedLoop fl;
  fl.level = 0.25;
  fl.turns = 1;
  fl.residual = 3e-9;
  fl.loop = build_curve(
      SurfaceKind::Annulus,
      {{0.0, 0.25}, {0.25, 0.25}, {0.5, 0.25}, {0.75, 0.25}}, true);
  with.certificate = fl;
  std::string wtext = roundtrip(make_document(with));
  CHECK(wtext.find("\"certificate\":{") != std::string::npos);
  auto back = std::get<FamilyVerdict>(parse_document(wtext).payload);
  REQUIRE(back.certificate.has_value());
  CHECK(back.certificate->turns == 1);
  CHECK(back.certificate->level == 0.25);
  CHECK(back.certificate->loop.closed);
}

TEST_CASE("rotation profiles round-trip and serialize to csv") {
  RotationProfile prof = rotation_profile(make_linear_shear(3.0), 4);
  REQUIRE(prof.level.size() == 4);
  CHECK(prof.converged == std::vector<bool>(4, true));
  CHECK(prof.rho[1] == Catch::Approx(3.0 * 0.375).margin(1e-6));
  roundtrip(make_document(prof));

  std::string csv = detail::profile_csv(prof);
  CHECK(csv.rfind("level,rho,converged\n", 0) == 0);
  CHECK(csv.find("0.125,") != std::string::npos);

  // an unconverged sample is a null rho, and an empty csv cell
  prof.converged[2] = false;
  prof.rho[2] = 0.0;
  std::string with_null = roundtrip(make_document(prof));
  CHECK(with_null.find("null") != std::string::npos);
  CHECK(detail::profile_csv(prof).find("0.625,,false") != std::string::npos);
}

TEST_CASE("flux reports round-trip") {
  FluxReport rep = flux_between(
      vertical_arc(0.0),
      build_curve(SurfaceKind::Annulus, {{0.0, 0.0}, {0.4, 1.0}}, false));
  std::string text = roundtrip(make_document(rep));
  CHECK(text.find("\"method\":\"area_between_lifts\"") != std::string::npos);
  CHECK(text.find("\"value\":0.2") != std::string::npos);
}

TEST_CASE("numbers are emitted at full precision") {
  FluxReport rep;
  rep.value = 1.0 / 3.0;
  std::string text = emit_document(make_document(rep));
  CHECK(text.find("0.33333333333333331") != std::string::npos);
  rep.value = 0.1;
  CHECK(emit_document(make_document(rep)).find("0.10000000000000001") !=
        std::string::npos);
  // integral doubles shed the fraction and stay stable through a round-trip
  rep.value = 5.0;
  roundtrip(make_document(rep));
}

TEST_CASE("a metadata block rides the envelope untouched") {
  Document doc = make_document(make_linear_shear(3.0));
  doc.metadata = {{"command", "certify"}, {"step", 0.001}};
  std::string text = roundtrip(doc);
  CHECK(text.find("\"metadata\":{\"command\":\"certify\",\"step\":0.001}") !=
        std::string::npos);
  auto back = parse_document(text);
  CHECK(back.metadata["step"] == 0.001);
  // the block is envelope-level; payload schemas stay closed
  CHECK(schema_message(
            "{\"schema_version\":1,\"kind\":\"flux_report\",\"method\":"
            "\"area_between_lifts\",\"note\":\"\",\"value\":0,\"metadata\":3}")
            .find("$.metadata") != std::string::npos);
}

TEST_CASE("the envelope is validated") {
  schema_message("not json at all");
  schema_message("[1,2,3]");
  CHECK(schema_message("{\"kind\":\"curve\"}").find("schema_version") !=
        std::string::npos);
  CHECK(schema_message(
            "{\"schema_version\":2,\"kind\":\"flux_report\",\"method\":"
            "\"area_between_lifts\",\"note\":\"\",\"value\":0}")
            .find("unsupported version") != std::string::npos);
  CHECK(schema_message("{\"schema_version\":1,\"kind\":\"mystery\"}")
            .find("$.kind") != std::string::npos);
}

TEST_CASE("unknown and malformed payload fields name their path") {
  CHECK(schema_message(
            "{\"schema_version\":1,\"kind\":\"curve\",\"surface\":\"annulus\","
            "\"closed\":false,\"vertices\":[[0,0],[0,1]],\"color\":\"red\"}")
            .find("\"color\"") != std::string::npos);
  // out-of-range vertex is a schema error before any geometry runs
  CHECK(schema_message(
            "{\"schema_version\":1,\"kind\":\"curve\",\"surface\":\"annulus\","
            "\"closed\":false,\"vertices\":[[0,0],[0.2,1.5]]}")
            .find("$.vertices[1]") != std::string::npos);
  CHECK(schema_message(
            "{\"schema_version\":1,\"kind\":\"curve\",\"surface\":\"disk\","
            "\"closed\":false,\"vertices\":[[0,0],[1.2,0.4]]}")
            .find("unit disk") != std::string::npos);
  CHECK(schema_message(
            "{\"schema_version\":1,\"kind\":\"curve\",\"surface\":\"annulus\","
            "\"closed\":true,\"vertices\":[[0,0.5],[0.5,0.5]],\"spanning\":"
            "true}")
            .find("$.spanning") != std::string::npos);
  CHECK(schema_message(
            "{\"schema_version\":1,\"kind\":\"system\",\"surface\":\"disk\","
            "\"field\":\"linear_shear\",\"c\":3}")
            .find("$.surface") != std::string::npos);
}

TEST_CASE("pattern payloads reject inconsistent data") {
  std::string head =
      "{\"schema_version\":1,\"kind\":\"pattern\",\"delta\":0.02,"
      "\"boundary_excluded\":0,\"order_class\":\"monotone_increasing\",";
  CHECK(schema_message(head +
                       "\"sigma\":[0],\"points\":[{\"at\":[0,0.5],\"sign\":2,"
                       "\"t_k\":0.5,\"t_l\":0.5}]}")
            .find("sign") != std::string::npos);
  CHECK(schema_message(head +
                       "\"sigma\":[0,0],\"points\":[{\"at\":[0,0.4],\"sign\":1,"
                       "\"t_k\":0.4,\"t_l\":0.4},{\"at\":[0,0.6],\"sign\":-1,"
                       "\"t_k\":0.6,\"t_l\":0.6}]}")
            .find("permutation") != std::string::npos);
  CHECK(schema_message(head + "\"sigma\":[0,1],\"points\":[{\"at\":[0,0.5],"
                              "\"sign\":1,\"t_k\":0.5,\"t_l\":0.5}]}")
            .find("$.sigma") != std::string::npos);
}

TEST_CASE("profile payloads tie null rho to the converged flag") {
  std::string head =
      "{\"schema_version\":1,\"kind\":\"rotation_profile\",\"surface\":"
      "\"annulus\",\"level\":[0.25,0.75],";
  CHECK(schema_message(head + "\"rho\":[0.5,null],\"converged\":[true,true]}")
            .find("$.rho[1]") != std::string::npos);
  CHECK(schema_message(head + "\"rho\":[0.5,0.7],\"converged\":[true,false]}")
            .find("$.rho[1]") != std::string::npos);
  CHECK(schema_message(head + "\"rho\":[0.5],\"converged\":[true,false]}")
            .find("equal length") != std::string::npos);
}

TEST_CASE("geometric validation still speaks with its own voice") {
  // well-formed document, self-crossing polyline
  std::string text =
      "{\"schema_version\":1,\"kind\":\"curve\",\"surface\":\"disk\","
      "\"closed\":false,\"vertices\":[[-0.5,-0.5],[0.5,0.5],[0.5,-0.5],"
      "[-0.5,0.5]],\"spanning\":false}";
  try {
    parse_document(text);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.code == "NotSimple");
  }
  // grid too small is the factory's complaint, not the reader's
  std::string grid =
      "{\"schema_version\":1,\"kind\":\"system\",\"surface\":\"annulus\","
      "\"field\":\"grid_field\",\"nx\":2,\"ny\":2,\"values\":[0,0,0,0]}";
  try {
    parse_document(grid);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.code == "BadParams");
  }
}
