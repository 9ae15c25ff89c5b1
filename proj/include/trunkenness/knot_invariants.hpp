#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "trunkenness/chart_search.hpp"
#include "trunkenness/executor.hpp"
#include "trunkenness/fields.hpp"
#include "trunkenness/flow.hpp"
#include "trunkenness/knot.hpp"

namespace trunk {

/// Exact level sweep of a link: the crossing count is constant between
/// consecutive distinct vertex heights, so every such open interval is
/// visited once. Degenerate components contribute nothing.
struct LevelSweep {
  /// (lower end of an open interval, total crossing count on it)
  std::vector<std::pair<double, int>> intervals;
  int max_count = 0;
  double argmax_level = 0.5;  // midpoint of the first interval attaining max_count
};

LevelSweep sweep_levels(const std::vector<PLKnot>& link, const HeightChart& chart);

/// max_t #{link ∩ h^{-1}(t)}.
int knot_trunk_fixed(const std::vector<PLKnot>& link, const HeightChart& chart);

/// Largest crossing count seen inside each of n_levels equal bins of [0,1].
std::vector<int> per_level_max(const LevelSweep& sweep, int n_levels);

struct KnotTraceEntry {
  HeightChart chart;
  int value = 0;
  int best_so_far = 0;
};

struct TrunkReport {
  std::vector<PLKnot> link;
  HeightChart best_chart;
  int trunk_upper = 0;
  std::vector<int> per_level_max;
  std::vector<KnotTraceEntry> trace;
  bool degenerate = false;  // every component collapsed to a point

  void write_json(std::ostream& out) const;
};

/// Coarse grid over the 24-cell and its dual, then perturbed charts around
/// the minimum until `plateau_checks` consecutive perturbations fail to
/// improve it. n_levels only sets the resolution of per_level_max.
TrunkReport knot_trunk_upper(const std::vector<PLKnot>& link, const SearchConfig& config,
                             int n_levels = 64, Executor* pool = nullptr);

/// Gauss linking sum of two loops, (1/4 pi) sum of signed solid angles of
/// segment pairs, in the chart projected from the point of S^3 farthest
/// from both knots. Throws KnotsTooClose when two segments come within 1e-9.
double gauss_linking_sum(const PLKnot& k1, const PLKnot& k2, Executor* pool = nullptr);

struct LinkingResult {
  long value = 0;
  double raw = 0.0;
  double residual = 0.0;  // |raw - value|
};

/// Rounded Gauss sum; NonIntegerLinking when the residual exceeds 0.05.
LinkingResult linking_number(const PLKnot& k1, const PLKnot& k2, Executor* pool = nullptr);

struct HelicityEstimate {
  double estimate = 0.0;
  double spread = 0.0;  // sample standard deviation
  std::vector<double> samples;
};

/// Mean of Lk(k(p1,t), k(p2,t)) / t^2 over Haar-random pairs (unrounded).
HelicityEstimate asymptotic_helicity(const FieldSpec& field, int pairs, double duration,
                                     double step, std::uint64_t seed,
                                     Closure closure = Closure::Geodesic,
                                     Executor* pool = nullptr);

struct AsymptoticTrunkPoint {
  double duration = 0.0;
  int trunk = 0;
  double normalized = 0.0;  // trunk / duration
  bool degenerate = false;
};

struct AsymptoticTrunkReport {
  std::vector<AsymptoticTrunkPoint> points;
  std::optional<TrunkennessReport> field_trunkenness;
};

AsymptoticTrunkReport asymptotic_trunk(const FieldSpec& field, const PointS3& start,
                                       const std::vector<double>& durations, double step,
                                       const SearchConfig& config, bool compare_field = true,
                                       Closure closure = Closure::Geodesic,
                                       Executor* pool = nullptr);

}  // namespace trunk
