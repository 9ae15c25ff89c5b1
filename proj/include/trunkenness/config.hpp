#pragma once

// Experiment configuration: a flat INI document with a [field] and a [task]
// section. Every key has a default; unknown keys and out-of-range values are
// collected into one ConfigError with line numbers.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trunkenness/chart_search.hpp"
#include "trunkenness/fields.hpp"
#include "trunkenness/flow.hpp"
#include "trunkenness/knot.hpp"

namespace trunk {

enum class Task {
  Flux,
  Profile,
  Trunkenness,
  KnotTrunk,
  Linking,
  Helicity,
  AsymptoticTrunk,
  PaperSuite,
};

const char* task_name(Task task);
std::optional<Task> parse_task(const std::string& name);

struct FieldConfig {
  std::string type = "seifert";  // seifert | tube | zero
  double alpha = 1.0;
  double beta = 2.0;
  double scale = 1.0;
  std::uint64_t rotation_seed = 0;  // 0: no rotation, else Rotated(random(seed))

  // tube core: torus (projected Seifert orbit), circle, or file
  std::string core = "torus";
  int core_p = 2;
  int core_q = 3;
  double core_ratio = 1.0;
  double circle_radius = 1.0;
  std::string core_file;
  int core_vertices = 512;
  double radius = 0.1;
  double flux = 1.0;
  std::string profile = "parabolic";  // parabolic | bump

  bool operator==(const FieldConfig&) const = default;
};

struct TaskConfig {
  Task task = Task::Trunkenness;
  std::uint64_t seed = 1;

  // flux / profile
  std::string chart = "standard";  // standard | swapped | random
  double level = 0.5;
  int grid_u = 128;
  int grid_v = 256;
  int mc_samples = 0;  // 0 disables the Monte-Carlo cross-check
  double epsilon = 0.01;
  int mc_substeps = 16;
  int n_levels = 32;

  // chart search
  int search_grid_u = 64;
  int search_grid_v = 128;
  std::vector<double> lambdas{0.25, 0.5, 1.0, 2.0, 4.0};
  bool dual_cell = false;
  int budget = 200;
  int starts = 3;
  double simplex_tolerance = 1e-3;
  int plateau_checks = 50;
  bool warm_start_core = true;

  // knots: torus | cable | file
  std::string knot = "torus";
  int knot_p = 2;
  int knot_q = 3;
  int components = 1;
  double knot_ratio = 1.0;
  int knot_vertices = 4096;
  std::vector<std::string> knot_files;
  // linking of two Seifert (knot_p, knot_q) orbits on these tori
  double ratio_a = 0.5;
  double ratio_b = 2.0;

  // orbits
  int pairs = 8;
  double duration = 1.0;
  double step = 0.0;  // 0 selects default_step(field)
  std::vector<double> durations{1.0, 2.0, 3.0};
  std::vector<double> start{1.0, 0.0, 1.0, 0.0};
  bool compare_field = true;
  std::string closure = "geodesic";  // geodesic | chord

  bool operator==(const TaskConfig&) const = default;
};

struct ExperimentConfig {
  FieldConfig field;
  TaskConfig task;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Throws ConfigError listing every problem found.
ExperimentConfig parse_config(const std::string& text);

/// Effective configuration with every key, in a form parse_config accepts.
std::string echo_config(const ExperimentConfig& config);

/// Field described by the config (builds tubes, applies scale and rotation).
FieldSpec build_field(const FieldConfig& config);
/// Core knot of a tube field config, in chart coordinates.
PLKnot build_core(const FieldConfig& config);
SearchConfig build_search(const TaskConfig& config);
HeightChart build_chart(const TaskConfig& config);
Closure build_closure(const TaskConfig& config);

}  // namespace trunk
