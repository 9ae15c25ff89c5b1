#pragma once

// The acceptance battery with every grid, budget and seed pinned, so the
// whole table reproduces with one call.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "trunkenness/executor.hpp"

namespace trunk {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteOptions {
  std::vector<int> only;  // empty: all criteria 1..11
  std::uint64_t seed = 1;
};

inline constexpr int kCriterionCount = 11;

std::vector<CriterionResult> run_paper_suite(
    const SuiteOptions& options, Executor* pool = nullptr,
    const std::function<void(const CriterionResult&)>& on_result = {});

/// One table row: "criterion  3  PASS  title  (detail)".
std::string format_criterion(const CriterionResult& result);

}  // namespace trunk
