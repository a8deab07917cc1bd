// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// With --criterion N only that criterion runs (used by ctest).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>

#include "flux/verification.hpp"

int main(int argc, char** argv) {
  int only = 0;
  bool info = true;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
      info = false;
    } else if (std::strcmp(argv[i], "--no-info") == 0) {
      info = false;
    } else {
      std::cerr << "usage: flux_acceptance [--criterion N] [--no-info]\n";
      return 1;
    }
  }

  bool all = true;
  bool ran = false;
  for (const auto& c : flux::acceptance_criteria()) {
    if (only && c.id != only) continue;
    ran = true;
    const auto start = std::chrono::steady_clock::now();
    const auto r = c.run();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && r.passed;
    std::printf("%s [%d] %s: %s (%zu checks, %.1fs)\n", r.passed ? "PASS" : "FAIL", r.id,
                r.title.c_str(), r.detail.c_str(), r.checks, secs);
    std::fflush(stdout);
  }
  if (!ran) {
    std::cerr << "no criterion " << only << "\n";
    return 1;
  }
  if (info) std::printf("INFO cost-gap monotonicity: %s\n", flux::cost_gap_monotonicity_report().c_str());
  return all ? 0 : 1;
}
