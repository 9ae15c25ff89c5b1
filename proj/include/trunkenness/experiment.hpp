#pragma once

#include <string>

#include "trunkenness/config.hpp"
#include "trunkenness/executor.hpp"

namespace trunk {

struct ExperimentOutcome {
  std::string summary;  // human-readable, also written to summary.txt
  bool passed = true;   // false only when a paper-suite criterion failed
};

/// Runs the configured task and writes report.json, summary.txt,
/// effective_config.ini and, where applicable, profile.csv / trace.csv /
/// samples.csv into out_dir (created if missing). Identical inputs give
/// byte-identical CSV files.
ExperimentOutcome run_experiment(const ExperimentConfig& config, const std::string& out_dir,
                                 Executor* pool = nullptr);

}  // namespace trunk
