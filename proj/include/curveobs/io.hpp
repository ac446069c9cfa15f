#pragma once

// JSON interchange.
//
// One document per file: a flat object carrying "schema_version", a "kind"
// discriminator, and the payload fields of that kind. Parsing is strict
// (unknown or missing keys, wrong types, and out-of-range coordinates are
// SchemaError with the offending JSON path); geometric legality stays with
// the payload constructors, so a well-formed document can still fail
// curve validation with its usual error codes.
//
// Emission is canonical: keys in sorted order, no insignificant whitespace,
// floating-point numbers at 17 significant digits, one trailing newline.
// Emit then parse then emit is byte-stable, so fixtures double as
// regression baselines.

#include <cstdint>
#include <cstdio>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "curveobs/family.hpp"
#include "curveobs/flow.hpp"
#include "curveobs/intersect.hpp"
#include "curveobs/obstruction.hpp"

namespace curveobs {

inline constexpr int kSchemaVersion = 1;

// Rotation numbers sampled on a midpoint grid of levels (s on the annulus,
// radius on the disk). A sample whose iteration failed to settle keeps its
// slot with the converged flag down.
struct RotationProfile {
  SurfaceKind surface = SurfaceKind::Annulus;
  std::vector<double> level;
  std::vector<double> rho;
  std::vector<bool> converged;
};

inline RotationProfile rotation_profile(const HamiltonianSystem& sys, int n,
                                        double tol = 1e-6,
                                        double h = kDefaultStep) {
  if (n < 1 || n > 100000)
    throw ValidationError("BadParams", "profile wants between 1 and 100000 samples");
  RotationProfile prof;
  prof.surface = sys.surface;
  for (int i = 0; i < n; ++i) {
    double lv = (i + 0.5) / n;
    Point x = sys.surface == SurfaceKind::Annulus ? Point{0.0, lv}
                                                  : Point{lv, 0.0};
    prof.level.push_back(lv);
    try {
      prof.rho.push_back(rotation_number(sys, x, tol, h));
      prof.converged.push_back(true);
    } catch (const NumericalError&) {
      prof.rho.push_back(0.0);
      prof.converged.push_back(false);
    }
  }
  return prof;
}

enum class DocKind {
  Curve,
  System,
  Pattern,
  Obstruction,
  Family,
  Profile,
  Flux,
};

inline const char* doc_kind_name(DocKind k) {
  switch (k) {
    case DocKind::Curve: return "curve";
    case DocKind::System: return "system";
    case DocKind::Pattern: return "pattern";
    case DocKind::Obstruction: return "obstruction";
    case DocKind::Family: return "family_verdict";
    case DocKind::Profile: return "rotation_profile";
    default: return "flux_report";
  }
}

struct Document {
  int schema_version = kSchemaVersion;
  // alternative order matches DocKind
  std::variant<Curve, HamiltonianSystem, IntersectionPattern, ObstructionReport,
               FamilyVerdict, RotationProfile, FluxReport>
      payload;
  // free-form provenance block (tool name, parameter echo); envelope-level,
  // so every payload schema stays closed. Null means absent.
  nlohmann::json metadata;

  DocKind kind() const { return DocKind(payload.index()); }
};

template <class T>
Document make_document(T payload) {
  Document d;
  d.payload = std::move(payload);
  return d;
}

namespace detail {

[[noreturn]] inline void schema_fail(const std::string& path,
                                     const std::string& msg) {
  throw ValidationError("SchemaError", path + ": " + msg);
}

// ---- canonical emission -------------------------------------------------

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void emit_string(const std::string& s, std::string& out) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

inline void emit_json(const nlohmann::json& j, std::string& out) {
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        emit_string(it.key(), out);
        out += ':';
        emit_json(it.value(), out);
      }
      out += '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        emit_json(j[i], out);
      }
      out += ']';
      return;
    }
    case nlohmann::json::value_t::string:
      emit_string(j.get<std::string>(), out);
      return;
    case nlohmann::json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case nlohmann::json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      return;
    case nlohmann::json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      return;
    case nlohmann::json::value_t::number_float: {
      double v = j.get<double>();
      if (!std::isfinite(v))
        throw ValidationError("SchemaError", "non-finite number in document");
      out += fmt_double(v);
      return;
    }
    default:
      out += "null";
      return;
  }
}

// ---- strict readers -----------------------------------------------------

inline void reject_unknown(const nlohmann::json& j, const std::string& path,
                           std::initializer_list<const char*> keys) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : keys)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known) schema_fail(path, "unknown key \"" + item.key() + "\"");
  }
}

inline const nlohmann::json& field(const nlohmann::json& j,
                                   const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    schema_fail(path, std::string("missing key \"") + key + "\"");
  return *it;
}

inline double num(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number()) schema_fail(path, "expected a number");
  return j.get<double>();
}

inline std::int64_t integer(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    schema_fail(path, "expected an integer");
  return j.get<std::int64_t>();
}

inline bool boolean(const nlohmann::json& j, const std::string& path) {
  if (!j.is_boolean()) schema_fail(path, "expected a boolean");
  return j.get<bool>();
}

inline std::string str(const nlohmann::json& j, const std::string& path) {
  if (!j.is_string()) schema_fail(path, "expected a string");
  return j.get<std::string>();
}

inline const nlohmann::json& array(const nlohmann::json& j,
                                   const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array");
  return j;
}

inline SurfaceKind surface_from(const nlohmann::json& j,
                                const std::string& path) {
  std::string s = str(j, path);
  if (s == "annulus") return SurfaceKind::Annulus;
  if (s == "disk") return SurfaceKind::Disk;
  schema_fail(path, "surface must be \"annulus\" or \"disk\"");
}

inline Point point_from(const nlohmann::json& j, const std::string& path,
                        SurfaceKind surf) {
  if (!j.is_array() || j.size() != 2)
    schema_fail(path, "expected a coordinate pair");
  Point p{num(j[0], path + "[0]"), num(j[1], path + "[1]")};
  if (surf == SurfaceKind::Annulus) {
    if (p.b < -kDomainTol || p.b > 1.0 + kDomainTol)
      schema_fail(path, "s coordinate outside [0,1]");
  } else if (p.a * p.a + p.b * p.b > 1.0 + 2 * kDomainTol) {
    schema_fail(path, "point outside the unit disk");
  }
  return p;
}

// ---- curve --------------------------------------------------------------

inline nlohmann::json curve_json(const Curve& c) {
  nlohmann::json j;
  j["surface"] = surface_name(c.surface);
  j["closed"] = c.closed;
  auto verts = nlohmann::json::array();
  for (const Point& p : c.vertices)
    verts.push_back(nlohmann::json::array({p.a, p.b}));
  j["vertices"] = std::move(verts);
  if (!c.closed)
    j["spanning"] =
        boundary_distance(c.surface, c.vertices.front()) <= kDomainTol &&
        boundary_distance(c.surface, c.vertices.back()) <= kDomainTol;
  return j;
}

inline Curve curve_from(const nlohmann::json& j, const std::string& path) {
  reject_unknown(j, path, {"surface", "closed", "vertices", "spanning"});
  SurfaceKind surf = surface_from(field(j, path, "surface"), path + ".surface");
  bool closed = boolean(field(j, path, "closed"), path + ".closed");
  const auto& jv = array(field(j, path, "vertices"), path + ".vertices");
  std::vector<Point> verts;
  verts.reserve(jv.size());
  for (std::size_t i = 0; i < jv.size(); ++i)
    verts.push_back(
        point_from(jv[i], path + ".vertices[" + std::to_string(i) + "]", surf));
  bool spanning = true;
  if (j.contains("spanning")) {
    if (closed)
      schema_fail(path + ".spanning", "only open curves take \"spanning\"");
    spanning = boolean(j["spanning"], path + ".spanning");
  }
  return build_curve(surf, std::move(verts), closed, spanning);
}

// ---- system -------------------------------------------------------------

inline nlohmann::json system_json(const HamiltonianSystem& sys) {
  nlohmann::json j;
  j["surface"] = surface_name(sys.surface);
  j["field"] = field_kind_name(sys.kind);
  switch (sys.kind) {
    case FieldKind::LinearShear:
    case FieldKind::RadialDisk:
      j["c"] = sys.coeffs[0];
      break;
    case FieldKind::PolyShear:
      j["coeffs"] = sys.coeffs;
      break;
    case FieldKind::BumpShear:
      j["amplitude"] = sys.coeffs[0];
      break;
    case FieldKind::GridField:
      j["nx"] = sys.grid.nx;
      j["ny"] = sys.grid.ny;
      j["values"] = sys.grid.v;
      break;
  }
  return j;
}

inline HamiltonianSystem system_from(const nlohmann::json& j,
                                     const std::string& path) {
  std::string kind = str(field(j, path, "field"), path + ".field");
  SurfaceKind surf = surface_from(field(j, path, "surface"), path + ".surface");
  auto check_surface = [&](SurfaceKind want) {
    if (surf != want)
      schema_fail(path + ".surface",
                  kind + " lives on the " + surface_name(want));
  };
  auto coeff = [&](const char* key) {
    return num(field(j, path, key), path + "." + key);
  };
  if (kind == "linear_shear") {
    reject_unknown(j, path, {"surface", "field", "c"});
    check_surface(SurfaceKind::Annulus);
    return make_linear_shear(coeff("c"));
  }
  if (kind == "poly_shear") {
    reject_unknown(j, path, {"surface", "field", "coeffs"});
    check_surface(SurfaceKind::Annulus);
    const auto& jc = array(field(j, path, "coeffs"), path + ".coeffs");
    std::vector<double> coeffs;
    for (std::size_t i = 0; i < jc.size(); ++i)
      coeffs.push_back(num(jc[i], path + ".coeffs[" + std::to_string(i) + "]"));
    return make_poly_shear(std::move(coeffs));
  }
  if (kind == "bump_shear") {
    reject_unknown(j, path, {"surface", "field", "amplitude"});
    check_surface(SurfaceKind::Annulus);
    return make_bump_shear(coeff("amplitude"));
  }
  if (kind == "radial_disk") {
    reject_unknown(j, path, {"surface", "field", "c"});
    check_surface(SurfaceKind::Disk);
    return make_radial_disk(coeff("c"));
  }
  if (kind == "grid_field") {
    reject_unknown(j, path, {"surface", "field", "nx", "ny", "values"});
    check_surface(SurfaceKind::Annulus);
    auto nx = integer(field(j, path, "nx"), path + ".nx");
    auto ny = integer(field(j, path, "ny"), path + ".ny");
    if (nx < 0 || ny < 0) schema_fail(path, "grid dimensions must be positive");
    const auto& jv = array(field(j, path, "values"), path + ".values");
    std::vector<double> values;
    values.reserve(jv.size());
    for (std::size_t i = 0; i < jv.size(); ++i)
      values.push_back(num(jv[i], path + ".values[" + std::to_string(i) + "]"));
    return make_grid_field(std::size_t(nx), std::size_t(ny), std::move(values));
  }
  schema_fail(path + ".field", "unknown field kind \"" + kind + "\"");
}

// ---- intersection pattern -----------------------------------------------

inline nlohmann::json pattern_json(const IntersectionPattern& pat) {
  nlohmann::json j;
  j["delta"] = pat.delta;
  j["boundary_excluded"] = pat.boundary_excluded;
  j["order_class"] = order_class_name(pat.order_class);
  j["sigma"] = pat.sigma;
  auto pts = nlohmann::json::array();
  for (const IntersectionPoint& p : pat.points) {
    nlohmann::json q;
    q["at"] = nlohmann::json::array({p.at.a, p.at.b});
    q["sign"] = p.sign;
    q["t_k"] = p.t_K;
    q["t_l"] = p.t_L;
    pts.push_back(std::move(q));
  }
  j["points"] = std::move(pts);
  return j;
}

inline OrderClass order_class_from(const nlohmann::json& j,
                                   const std::string& path) {
  std::string s = str(j, path);
  for (OrderClass c :
       {OrderClass::MonotoneIncreasing, OrderClass::MonotoneDecreasing,
        OrderClass::CircularlyMonotone, OrderClass::NonMonotone})
    if (s == order_class_name(c)) return c;
  schema_fail(path, "unknown order class \"" + s + "\"");
}

inline double unit_param(const nlohmann::json& j, const std::string& path) {
  double t = num(j, path);
  if (t < 0 || t > 1) schema_fail(path, "parameter outside [0,1]");
  return t;
}

inline int sign_from(const nlohmann::json& j, const std::string& path) {
  auto s = integer(j, path);
  if (s != 1 && s != -1) schema_fail(path, "sign must be +1 or -1");
  return int(s);
}

inline IntersectionPattern pattern_from(const nlohmann::json& j,
                                        const std::string& path) {
  reject_unknown(
      j, path,
      {"delta", "boundary_excluded", "order_class", "sigma", "points"});
  IntersectionPattern pat;
  pat.delta = num(field(j, path, "delta"), path + ".delta");
  if (pat.delta < 0 || pat.delta >= 0.5)
    schema_fail(path + ".delta", "collar outside [0, 0.5)");
  auto excl = integer(field(j, path, "boundary_excluded"),
                      path + ".boundary_excluded");
  if (excl < 0) schema_fail(path + ".boundary_excluded", "negative count");
  pat.boundary_excluded = std::size_t(excl);
  pat.order_class = order_class_from(field(j, path, "order_class"),
                                     path + ".order_class");
  const auto& jp = array(field(j, path, "points"), path + ".points");
  for (std::size_t i = 0; i < jp.size(); ++i) {
    std::string pp = path + ".points[" + std::to_string(i) + "]";
    const auto& q = jp[i];
    if (!q.is_object()) schema_fail(pp, "expected an object");
    reject_unknown(q, pp, {"at", "sign", "t_k", "t_l"});
    IntersectionPoint ip;
    // the surface is not recorded in the pattern; keep coordinates as given
    const auto& at = field(q, pp, "at");
    if (!at.is_array() || at.size() != 2)
      schema_fail(pp + ".at", "expected a coordinate pair");
    ip.at = Point{num(at[0], pp + ".at[0]"), num(at[1], pp + ".at[1]")};
    ip.sign = sign_from(field(q, pp, "sign"), pp + ".sign");
    ip.t_K = unit_param(field(q, pp, "t_k"), pp + ".t_k");
    ip.t_L = unit_param(field(q, pp, "t_l"), pp + ".t_l");
    pat.points.push_back(ip);
  }
  const auto& js = array(field(j, path, "sigma"), path + ".sigma");
  if (js.size() != jp.size())
    schema_fail(path + ".sigma", "length differs from points");
  std::vector<bool> seen(js.size(), false);
  for (std::size_t i = 0; i < js.size(); ++i) {
    std::string sp = path + ".sigma[" + std::to_string(i) + "]";
    auto r = integer(js[i], sp);
    if (r < 0 || std::size_t(r) >= js.size() || seen[std::size_t(r)])
      schema_fail(sp, "sigma is not a permutation");
    seen[std::size_t(r)] = true;
    pat.sigma.push_back(std::size_t(r));
  }
  return pat;
}

// ---- obstruction report -------------------------------------------------

inline nlohmann::json obstruction_json(const ObstructionReport& rep) {
  nlohmann::json j;
  j["verdict"] = verdict_name(rep.verdict);
  j["points_total"] = rep.points_total;
  j["points_covered"] = rep.points_covered;
  auto triples = nlohmann::json::array();
  for (const SnakeTriple& t : rep.triples) {
    nlohmann::json q;
    q["isolation"] = t.isolation;
    q["k_idx"] = t.k_idx;
    q["l_ranks"] = t.l_ranks;
    q["signs"] = t.signs;
    triples.push_back(std::move(q));
  }
  j["triples"] = std::move(triples);
  return j;
}

inline ObstructionReport obstruction_from(const nlohmann::json& j,
                                          const std::string& path) {
  reject_unknown(j, path,
                 {"verdict", "points_total", "points_covered", "triples"});
  ObstructionReport rep;
  std::string v = str(field(j, path, "verdict"), path + ".verdict");
  bool known = false;
  for (Verdict w : {Verdict::Unobstructed, Verdict::PartiallyObstructed,
                    Verdict::FullyObstructed})
    if (v == verdict_name(w)) {
      rep.verdict = w;
      known = true;
    }
  if (!known) schema_fail(path + ".verdict", "unknown verdict \"" + v + "\"");
  auto total = integer(field(j, path, "points_total"), path + ".points_total");
  auto covered =
      integer(field(j, path, "points_covered"), path + ".points_covered");
  if (total < 0 || covered < 0 || covered > total)
    schema_fail(path, "covered count exceeds total");
  rep.points_total = std::size_t(total);
  rep.points_covered = std::size_t(covered);
  const auto& jt = array(field(j, path, "triples"), path + ".triples");
  for (std::size_t i = 0; i < jt.size(); ++i) {
    std::string tp = path + ".triples[" + std::to_string(i) + "]";
    const auto& q = jt[i];
    if (!q.is_object()) schema_fail(tp, "expected an object");
    reject_unknown(q, tp, {"isolation", "k_idx", "l_ranks", "signs"});
    SnakeTriple t;
    t.isolation = num(field(q, tp, "isolation"), tp + ".isolation");
    auto triple = [&](const char* key, auto& dst, auto read) {
      const auto& ja = array(field(q, tp, key), tp + "." + key);
      if (ja.size() != 3) schema_fail(tp + "." + key, "expected 3 entries");
      for (std::size_t k = 0; k < 3; ++k)
        dst[k] = read(ja[k], tp + "." + key + "[" + std::to_string(k) + "]");
    };
    triple("k_idx", t.k_idx, [](const nlohmann::json& x, const std::string& p) {
      auto v = integer(x, p);
      if (v < 0) schema_fail(p, "negative index");
      return std::size_t(v);
    });
    triple("l_ranks", t.l_ranks,
           [](const nlohmann::json& x, const std::string& p) {
             auto v = integer(x, p);
             if (v < 0) schema_fail(p, "negative rank");
             return std::size_t(v);
           });
    triple("signs", t.signs, sign_from);
    rep.triples.push_back(t);
  }
  return rep;
}

// ---- family verdict -----------------------------------------------------

inline nlohmann::json family_json(const FamilyVerdict& v) {
  nlohmann::json j;
  j["family"] = family_kind_name(v.family);
  j["statistic"] = v.statistic;
  j["threshold"] = v.threshold;
  j["member"] = v.member;
  j["near_threshold"] = v.near_threshold;
  j["alarm"] = v.alarm;
  if (v.certificate) {
    nlohmann::json c;
    c["level"] = v.certificate->level;
    c["turns"] = v.certificate->turns;
    c["residual"] = v.certificate->residual;
    c["loop"] = curve_json(v.certificate->loop);
    j["certificate"] = std::move(c);
  }
  return j;
}

inline FamilyVerdict family_from(const nlohmann::json& j,
                                 const std::string& path) {
  reject_unknown(j, path,
                 {"family", "statistic", "threshold", "member",
                  "near_threshold", "alarm", "certificate"});
  FamilyVerdict v;
  std::string f = str(field(j, path, "family"), path + ".family");
  bool known = false;
  for (FamilyKind k : {FamilyKind::M1Displacement, FamilyKind::M2Flux,
                       FamilyKind::DiskAreaBound})
    if (f == family_kind_name(k)) {
      v.family = k;
      known = true;
    }
  if (!known) schema_fail(path + ".family", "unknown family \"" + f + "\"");
  v.statistic = num(field(j, path, "statistic"), path + ".statistic");
  v.threshold = num(field(j, path, "threshold"), path + ".threshold");
  v.member = boolean(field(j, path, "member"), path + ".member");
  v.near_threshold =
      boolean(field(j, path, "near_threshold"), path + ".near_threshold");
  v.alarm = boolean(field(j, path, "alarm"), path + ".alarm");
  if (j.contains("certificate")) {
    const auto& c = j["certificate"];
    std::string cp = path + ".certificate";
    if (!c.is_object()) schema_fail(cp, "expected an object");
    reject_unknown(c, cp, {"level", "turns", "residual", "loop"});
    FixedLoop fl;
    fl.level = num(field(c, cp, "level"), cp + ".level");
    fl.turns = int(integer(field(c, cp, "turns"), cp + ".turns"));
    fl.residual = num(field(c, cp, "residual"), cp + ".residual");
    fl.loop = curve_from(field(c, cp, "loop"), cp + ".loop");
    v.certificate = std::move(fl);
  }
  return v;
}

// ---- rotation profile ---------------------------------------------------

inline nlohmann::json profile_json(const RotationProfile& prof) {
  nlohmann::json j;
  j["surface"] = surface_name(prof.surface);
  j["level"] = prof.level;
  auto rho = nlohmann::json::array();
  for (std::size_t i = 0; i < prof.rho.size(); ++i) {
    if (prof.converged[i])
      rho.push_back(prof.rho[i]);
    else
      rho.push_back(nullptr);
  }
  j["rho"] = std::move(rho);
  j["converged"] = prof.converged;
  return j;
}

inline RotationProfile profile_from(const nlohmann::json& j,
                                    const std::string& path) {
  reject_unknown(j, path, {"surface", "level", "rho", "converged"});
  RotationProfile prof;
  prof.surface = surface_from(field(j, path, "surface"), path + ".surface");
  const auto& jl = array(field(j, path, "level"), path + ".level");
  const auto& jr = array(field(j, path, "rho"), path + ".rho");
  const auto& jc = array(field(j, path, "converged"), path + ".converged");
  if (jr.size() != jl.size() || jc.size() != jl.size())
    schema_fail(path, "level, rho and converged must have equal length");
  for (std::size_t i = 0; i < jl.size(); ++i) {
    std::string ip = "[" + std::to_string(i) + "]";
    prof.level.push_back(num(jl[i], path + ".level" + ip));
    bool ok = boolean(jc[i], path + ".converged" + ip);
    prof.converged.push_back(ok);
    if (jr[i].is_null() != !ok)
      schema_fail(path + ".rho" + ip,
                  "rho must be null exactly for unconverged samples");
    prof.rho.push_back(ok ? num(jr[i], path + ".rho" + ip) : 0.0);
  }
  return prof;
}

inline std::string profile_csv(const RotationProfile& prof) {
  std::string out = "level,rho,converged\n";
  for (std::size_t i = 0; i < prof.level.size(); ++i) {
    out += fmt_double(prof.level[i]);
    out += ',';
    if (prof.converged[i]) out += fmt_double(prof.rho[i]);
    out += ',';
    out += prof.converged[i] ? "true" : "false";
    out += '\n';
  }
  return out;
}

// ---- flux report --------------------------------------------------------

inline nlohmann::json flux_json(const FluxReport& rep) {
  nlohmann::json j;
  j["method"] = rep.method;
  j["note"] = rep.note;
  j["value"] = rep.value;
  return j;
}

inline FluxReport flux_from(const nlohmann::json& j, const std::string& path) {
  reject_unknown(j, path, {"method", "note", "value"});
  FluxReport rep;
  rep.method = str(field(j, path, "method"), path + ".method");
  if (rep.method != "area_between_lifts" &&
      rep.method != "enclosed_area_difference")
    schema_fail(path + ".method", "unknown method \"" + rep.method + "\"");
  rep.note = str(field(j, path, "note"), path + ".note");
  rep.value = num(field(j, path, "value"), path + ".value");
  return rep;
}

}  // namespace detail

inline std::string emit_document(const Document& doc) {
  nlohmann::json j = std::visit(
      [](const auto& payload) -> nlohmann::json {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, Curve>)
          return detail::curve_json(payload);
        else if constexpr (std::is_same_v<T, HamiltonianSystem>)
          return detail::system_json(payload);
        else if constexpr (std::is_same_v<T, IntersectionPattern>)
          return detail::pattern_json(payload);
        else if constexpr (std::is_same_v<T, ObstructionReport>)
          return detail::obstruction_json(payload);
        else if constexpr (std::is_same_v<T, FamilyVerdict>)
          return detail::family_json(payload);
        else if constexpr (std::is_same_v<T, RotationProfile>)
          return detail::profile_json(payload);
        else
          return detail::flux_json(payload);
      },
      doc.payload);
  j["kind"] = doc_kind_name(doc.kind());
  j["schema_version"] = doc.schema_version;
  if (!doc.metadata.is_null()) j["metadata"] = doc.metadata;
  std::string out;
  detail::emit_json(j, out);
  out += '\n';
  return out;
}

inline Document parse_document(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    detail::schema_fail("$", e.what());
  }
  if (!j.is_object()) detail::schema_fail("$", "expected an object");
  auto version = detail::integer(detail::field(j, "$", "schema_version"),
                                 "$.schema_version");
  if (version != kSchemaVersion)
    detail::schema_fail("$.schema_version",
                        "unsupported version " + std::to_string(version));
  std::string kind = detail::str(detail::field(j, "$", "kind"), "$.kind");
  Document doc;
  doc.schema_version = int(version);
  nlohmann::json body = j;
  body.erase("schema_version");
  body.erase("kind");
  if (auto it = body.find("metadata"); it != body.end()) {
    if (!it->is_object()) detail::schema_fail("$.metadata", "expected an object");
    doc.metadata = *it;
    body.erase(it);
  }
  if (kind == "curve")
    doc.payload = detail::curve_from(body, "$");
  else if (kind == "system")
    doc.payload = detail::system_from(body, "$");
  else if (kind == "pattern")
    doc.payload = detail::pattern_from(body, "$");
  else if (kind == "obstruction")
    doc.payload = detail::obstruction_from(body, "$");
  else if (kind == "family_verdict")
    doc.payload = detail::family_from(body, "$");
  else if (kind == "rotation_profile")
    doc.payload = detail::profile_from(body, "$");
  else if (kind == "flux_report")
    doc.payload = detail::flux_from(body, "$");
  else
    detail::schema_fail("$.kind", "unknown kind \"" + kind + "\"");
  return doc;
}

}  // namespace curveobs
