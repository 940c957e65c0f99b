// Prints one PASS/FAIL line per acceptance criterion; failing checks are
// listed underneath. Exit status 1 if any criterion fails.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "moebius_lab/verification.hpp"

using namespace moebius_lab;

int main(int argc, char** argv) {
  VerifyConfig cfg;
  if (argc > 1) cfg.seed = std::strtoull(argv[1], nullptr, 10);

  bool all = true;
  for (int id = 1; id <= kCriterionCount; ++id) {
    const CriterionResult r = run_criterion(id, cfg);
    all = all && r.pass;
    const Check* worst = nullptr;
    for (const Check& c : r.checks)
      if (c.relation == "<=" && c.tolerance > 0 && (!worst || c.value / c.tolerance > worst->value / worst->tolerance))
        worst = &c;
    std::printf("criterion %2d: %s  %-48s %3zu checks  %.2fs", id, r.pass ? "PASS" : "FAIL",
                r.title.c_str(), r.checks.size(), r.seconds);
    if (worst) std::printf("  worst %.3g / %.0e (%s)", worst->value, worst->tolerance, worst->name.c_str());
    std::printf("\n");
    for (const Check& c : r.checks) {
      if (c.pass) continue;
      if (!c.error.empty())
        std::printf("    failed: %s: %s\n", c.name.c_str(), c.error.c_str());
      else
        std::printf("    failed: %s: %.6g %s %.3g\n", c.name.c_str(), c.value,
                    c.relation == ">=" ? "<" : ">", c.tolerance);
    }
  }
  std::printf("%s\n", all ? "all criteria pass" : "some criteria FAIL");
  return all ? 0 : 1;
}
