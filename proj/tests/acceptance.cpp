// Runs the full criterion battery and prints one PASS/FAIL line per criterion.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "trunkenness/executor.hpp"
#include "trunkenness/paper_suite.hpp"

int main(int argc, char** argv) {
  trunk::SuiteOptions options;
  for (int i = 1; i < argc; ++i) options.only.push_back(std::atoi(argv[i]));
  int failures = 0;
  trunk::run_paper_suite(options, &trunk::Executor::shared(),
                         [&](const trunk::CriterionResult& r) {
                           std::printf("%s\n", trunk::format_criterion(r).c_str());
                           std::fflush(stdout);
                           if (!r.passed) ++failures;
                         });
  std::printf("%d of %d criteria failed\n", failures,
              options.only.empty() ? trunk::kCriterionCount : static_cast<int>(options.only.size()));
  return failures == 0 ? 0 : 1;
}
