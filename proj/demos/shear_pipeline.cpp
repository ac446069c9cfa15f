// End-to-end walkthrough on the linear shear of slope 5: transport the
// standing arc, count crossings, snake every one of them, certify family
// membership, and combine everything into the final verdict. Writes the
// before/after figures next to the executable's working directory.

#include <fstream>
#include <iostream>

#include "curveobs/io.hpp"
#include "curveobs/snake.hpp"
#include "curveobs/svg.hpp"

using namespace curveobs;

int main() {
  Curve L =
      build_curve(SurfaceKind::Annulus, {{0.0, 0.0}, {0.0, 1.0}}, false);
  HamiltonianSystem sys = make_linear_shear(5.0);

  Curve K = image_curve(sys, L, 1.0);
  IntersectionPattern before = intersect_curves(L, K);
  std::cout << "image of the standing arc under the slope-5 shear: "
            << before.points.size() << " interior crossings, order "
            << order_class_name(before.order_class) << "\n";

  ObstructionReport raw = find_snake_triples(L, K, before);
  std::cout << "unperturbed pair: " << verdict_name(raw.verdict) << "\n";

  SnakeReport snaked = perturb_all(L, K);
  std::cout << "after snaking every crossing (hausdorff "
            << snaked.hausdorff << "): " << snaked.crossings_after
            << " crossings, " << snaked.obstruction.triples.size()
            << " triples, " << verdict_name(snaked.obstruction.verdict)
            << "\n";

  FamilyVerdict fam = fl_certificate(sys, L, FamilyKind::M1Displacement);
  std::cout << "family statistic " << fam.statistic << " against threshold "
            << fam.threshold << ": member=" << (fam.member ? "yes" : "no");
  if (fam.certificate)
    std::cout << ", fixed loop at level " << fam.certificate->level
              << " making " << fam.certificate->turns << " turn(s)";
  std::cout << "\n";

  NonautonomyReport final =
      nonautonomy_verdict(L, snaked.perturbed, fam);
  std::cout << "conclusion: " << conclusion_name(final.conclusion) << "\n";

  std::ofstream("shear5_before.svg") << render_svg({L, K}, &before);
  std::ofstream("shear5_after.svg") << render_svg(
      {L, snaked.perturbed}, &snaked.pattern, &snaked.obstruction);
  std::cout << "figures written to shear5_before.svg, shear5_after.svg\n";
  return 0;
}
