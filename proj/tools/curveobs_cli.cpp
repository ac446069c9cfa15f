// Command-line surface over the library. One JSON document (or CSV / SVG
// text) to stdout per invocation; every numeric default is visible in
// --help and echoed back in the document's metadata block, so an output
// file records the parameters that produced it.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curveobs/io.hpp"
#include "curveobs/snake.hpp"
#include "curveobs/svg.hpp"

using namespace curveobs;

namespace {

Document load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("BadParams", "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

template <class T>
T load_as(const std::string& path, const char* wanted) {
  Document doc = load_document(path);
  if (const T* payload = std::get_if<T>(&doc.payload)) return *payload;
  throw ValidationError("SchemaError",
                        path + ": expected a " + wanted + " document, got " +
                            doc_kind_name(doc.kind()));
}

Curve load_curve(const std::string& path) {
  return load_as<Curve>(path, "curve");
}

HamiltonianSystem load_system(const std::string& path) {
  return load_as<HamiltonianSystem>(path, "system");
}

// the standing reference arc {theta = 0}
Curve standing_arc() {
  return build_curve(SurfaceKind::Annulus, {{0.0, 0.0}, {0.0, 1.0}}, false);
}

template <class T>
void print_document(T payload, nlohmann::json meta) {
  Document doc = make_document(std::move(payload));
  doc.metadata = std::move(meta);
  std::cout << emit_document(doc);
}

FamilyKind parse_family(const std::string& name) {
  if (name == "m1") return FamilyKind::M1Displacement;
  if (name == "m2") return FamilyKind::M2Flux;
  throw ValidationError("BadParams", "family must be m1 or m2");
}

int run(int argc, char** argv) {
  CLI::App app{"curve-configuration obstructions on the annulus and disk"};
  app.require_subcommand(1);

  std::string l_path, k_path, h_path, v_path, curve_path, family_name;
  double delta = kBoundaryCollar;
  double min_isolation = 1e-4;
  double w = SnakeParams{}.width, a = SnakeParams{}.amplitude;
  int max_shrink = SnakeParams{}.max_shrink;
  double t = 1.0, eps = 1e-2, cert_eps = 1e-3, h = kDefaultStep, tol = 1e-6;
  int grid = 50, samples = 2000;
  bool profile_json = false;
  std::vector<std::string> render_paths;
  std::string pattern_path, report_path;

  auto add_delta = [&](CLI::App* sc) {
    sc->add_option("--delta", delta, "boundary collar excluded from patterns")
        ->capture_default_str();
  };
  auto add_step = [&](CLI::App* sc) {
    sc->add_option("--step", h, "integrator step")->capture_default_str();
  };

  CLI::App* sc_intersect =
      app.add_subcommand("intersect", "crossing pattern of two curves");
  sc_intersect->add_option("L", l_path, "curve document")->required();
  sc_intersect->add_option("K", k_path, "curve document")->required();
  add_delta(sc_intersect);

  CLI::App* sc_obstruct =
      app.add_subcommand("obstruct", "search the pattern for snake triples");
  sc_obstruct->add_option("L", l_path, "curve document")->required();
  sc_obstruct->add_option("K", k_path, "curve document")->required();
  add_delta(sc_obstruct);
  sc_obstruct
      ->add_option("--min-isolation", min_isolation,
                   "smallest accepted crossing separation")
      ->capture_default_str();

  CLI::App* sc_perturb = app.add_subcommand(
      "perturb", "replace every crossing of K with a small snake");
  sc_perturb->add_option("L", l_path, "curve document")->required();
  sc_perturb->add_option("K", k_path, "curve document")->required();
  sc_perturb->add_option("--w", w, "arclength of K replaced per crossing")
      ->capture_default_str();
  sc_perturb->add_option("--a", a, "detour amplitude")->capture_default_str();
  sc_perturb
      ->add_option("--max-shrink", max_shrink,
                   "halvings allowed when parameters collide")
      ->capture_default_str();

  CLI::App* sc_flow =
      app.add_subcommand("flow", "transport a curve by the Hamiltonian flow");
  sc_flow->add_option("H", h_path, "system document")->required();
  sc_flow->add_option("--t", t, "flow time")->capture_default_str();
  sc_flow->add_option("--curve", curve_path, "curve document")->required();
  sc_flow->add_option("--eps", eps, "resample resolution of the image")
      ->capture_default_str();
  add_step(sc_flow);

  CLI::App* sc_profile = app.add_subcommand(
      "rotation-profile", "rotation number per invariant level, as csv");
  sc_profile->add_option("H", h_path, "system document")->required();
  sc_profile->add_option("--grid", grid, "number of sampled levels")
      ->capture_default_str();
  sc_profile->add_option("--tol", tol, "rotation number tolerance")
      ->capture_default_str();
  add_step(sc_profile);
  sc_profile->add_flag("--json", profile_json,
                       "emit the profile document instead of csv");

  CLI::App* sc_flux =
      app.add_subcommand("flux", "area swept between two curves");
  sc_flux->add_option("L", l_path, "curve document")->required();
  sc_flux->add_option("K", k_path, "curve document")->required();

  CLI::App* sc_certify = app.add_subcommand(
      "certify", "family membership plus a fixed-loop certificate");
  sc_certify->add_option("H", h_path, "system document")->required();
  sc_certify->add_option("--family", family_name, "m1 or m2")->required();
  sc_certify->add_option("--curve", curve_path,
                         "reference arc (default: the arc at theta 0)");
  sc_certify->add_option("--t", t, "flow time")->capture_default_str();
  sc_certify->add_option("--eps", cert_eps, "image resample resolution")
      ->capture_default_str();
  add_step(sc_certify);
  sc_certify->add_option("--tol", tol, "fixed-loop residual tolerance")
      ->capture_default_str();
  sc_certify->add_option("--samples", samples, "level-scan resolution")
      ->capture_default_str();

  CLI::App* sc_verdict = app.add_subcommand(
      "verdict", "combine a family verdict with the obstruction search");
  sc_verdict->add_option("L", l_path, "curve document")->required();
  sc_verdict->add_option("K", k_path, "curve document")->required();
  sc_verdict
      ->add_option("--family-verdict", v_path, "family verdict document")
      ->required();
  add_delta(sc_verdict);
  sc_verdict
      ->add_option("--min-isolation", min_isolation,
                   "smallest accepted crossing separation")
      ->capture_default_str();

  CLI::App* sc_render = app.add_subcommand("render", "figure as svg text");
  sc_render->add_option("curves", render_paths, "curve documents")
      ->required()
      ->expected(-1);
  sc_render->add_option("--pattern", pattern_path,
                        "pattern document to mark crossings");
  sc_render->add_option("--obstruction", report_path,
                        "obstruction document to shade snake neighborhoods");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (app.got_subcommand(sc_intersect)) {
    IntersectionPattern pat =
        intersect_curves(load_curve(l_path), load_curve(k_path), delta);
    print_document(pat, {{"command", "intersect"}, {"delta", delta}});
  } else if (app.got_subcommand(sc_obstruct)) {
    Curve L = load_curve(l_path), K = load_curve(k_path);
    IntersectionPattern pat = intersect_curves(L, K, delta);
    ObstructionReport rep = find_snake_triples(L, K, pat, min_isolation);
    print_document(rep, {{"command", "obstruct"},
                         {"delta", delta},
                         {"min_isolation", min_isolation}});
  } else if (app.got_subcommand(sc_perturb)) {
    Curve L = load_curve(l_path), K = load_curve(k_path);
    SnakeReport rep = perturb_all(L, K, {w, a, max_shrink});
    print_document(rep.perturbed,
                   {{"command", "perturb"},
                    {"w", w},
                    {"a", a},
                    {"max_shrink", max_shrink},
                    {"width_used", rep.width},
                    {"amplitude_used", rep.amplitude},
                    {"shrinks", rep.shrinks},
                    {"hausdorff", rep.hausdorff},
                    {"crossings_before", rep.crossings_before},
                    {"crossings_after", rep.crossings_after},
                    {"verdict", verdict_name(rep.obstruction.verdict)},
                    {"triples", rep.obstruction.triples.size()}});
  } else if (app.got_subcommand(sc_flow)) {
    Curve image = image_curve(load_system(h_path), load_curve(curve_path), t,
                              eps, h);
    print_document(
        image,
        {{"command", "flow"}, {"t", t}, {"eps", eps}, {"h", h}});
  } else if (app.got_subcommand(sc_profile)) {
    RotationProfile prof = rotation_profile(load_system(h_path), grid, tol, h);
    if (profile_json) {
      print_document(prof, {{"command", "rotation-profile"},
                            {"grid", grid},
                            {"tol", tol},
                            {"h", h}});
    } else {
      std::cout << detail::profile_csv(prof);
    }
  } else if (app.got_subcommand(sc_flux)) {
    FluxReport rep = flux_between(load_curve(l_path), load_curve(k_path));
    print_document(rep, {{"command", "flux"}});
  } else if (app.got_subcommand(sc_certify)) {
    Curve L = curve_path.empty() ? standing_arc() : load_curve(curve_path);
    FamilyVerdict v = fl_certificate(load_system(h_path), L,
                                     parse_family(family_name), t, cert_eps, h,
                                     tol, samples);
    print_document(v, {{"command", "certify"},
                       {"family", family_name},
                       {"curve", curve_path.empty() ? "standing" : curve_path},
                       {"t", t},
                       {"eps", cert_eps},
                       {"h", h},
                       {"tol", tol},
                       {"samples", samples}});
  } else if (app.got_subcommand(sc_verdict)) {
    Curve L = load_curve(l_path), K = load_curve(k_path);
    FamilyVerdict fam = load_as<FamilyVerdict>(v_path, "family verdict");
    NonautonomyReport rep =
        nonautonomy_verdict(L, K, fam, delta, min_isolation);
    print_document(rep.obstruction,
                   {{"command", "verdict"},
                    {"conclusion", conclusion_name(rep.conclusion)},
                    {"family", family_kind_name(fam.family)},
                    {"family_member", fam.member},
                    {"statistic", fam.statistic},
                    {"delta", delta},
                    {"min_isolation", min_isolation}});
  } else if (app.got_subcommand(sc_render)) {
    std::vector<Curve> curves;
    for (const std::string& p : render_paths) curves.push_back(load_curve(p));
    IntersectionPattern pat;
    ObstructionReport rep;
    bool have_pat = !pattern_path.empty(), have_rep = !report_path.empty();
    if (have_pat)
      pat = load_as<IntersectionPattern>(pattern_path, "pattern");
    if (have_rep)
      rep = load_as<ObstructionReport>(report_path, "obstruction");
    std::cout << render_svg(curves, have_pat ? &pat : nullptr,
                            have_rep ? &rep : nullptr);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
