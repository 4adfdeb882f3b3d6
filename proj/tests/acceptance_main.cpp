// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "screwkit/acceptance.hpp"

int main(int argc, char** argv) {
  screwkit::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      options.only.push_back(std::atoi(argv[++i]));
    } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      options.seed = std::strtoull(argv[++i], nullptr, 10);
    } else {
      std::fprintf(stderr, "usage: %s [--only ID]... [--seed N]\n", argv[0]);
      return 2;
    }
  }
  bool all = true;
  const auto results = screwkit::run_acceptance(options, [](const screwkit::CriterionResult& r) {
    std::printf("%s\n", screwkit::format_criterion_line(r).c_str());
    std::fflush(stdout);
  });
  for (const auto& r : results) all = all && r.passed;
  return all && !results.empty() ? 0 : 1;
}
