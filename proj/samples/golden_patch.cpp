// Synthesizes the patch with f1 = 1, f2 = 0, h1 = h2 = 1 and prints a few
// samples of F together with the verification verdict.

#include <cstdio>

#include "flatspin/pipeline.hpp"

int main() {
  using namespace flatspin;
  const SeedR31 seed{expr::parse("1", expr::Mode::analytic), expr::parse("0", expr::Mode::analytic),
                     expr::parse("1", expr::Mode::real_smooth), expr::parse("1", expr::Mode::real_smooth)};
  const GridDomain dom{0.0, 1.0, 0.0, 1.0, 65, 65};

  const Run run = synthesize(seed, dom);
  for (std::size_t k : {std::size_t{0}, std::size_t{32}, std::size_t{64}}) {
    const MinkVec& v = run.patch.F(k, k);
    std::printf("F(%.2f + %.2fi) = (% .8f, % .8f, % .8f, % .8f)\n", dom.x(k), dom.y(k), v.x1, v.x2, v.x3, v.x4);
  }
  for (const Check& c : run.report.checks) {
    std::printf("%-20s %.3e / %.3e %s\n", c.name.c_str(), c.residual, c.budget,
                c.informational ? "(informational)" : c.passed ? "ok" : "FAILED");
  }
  return all_passed(run.report.checks) ? 0 : 1;
}
