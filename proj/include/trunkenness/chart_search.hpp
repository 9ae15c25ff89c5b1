#pragma once

// Minimization of chart -> max_t Flux(X, h^{-1}(t)) over the family of
// rotated and dilated height charts. Everything reported is an upper bound
// on the trunkenness: the family is a restriction of all height functions.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "trunkenness/executor.hpp"
#include "trunkenness/fields.hpp"
#include "trunkenness/flux.hpp"
#include "trunkenness/geometry.hpp"

namespace trunk {

struct SearchConfig {
  int n_levels = 32;
  QuadratureGrid grid{64, 128};
  std::vector<double> lambdas{0.25, 0.5, 1.0, 2.0, 4.0};
  /// Adds the dual 24-cell to the rotation grid (48 instead of 24 foci).
  bool dual_cell = false;
  int refine_budget = 200;
  int refine_starts = 3;
  double simplex_tolerance = 1e-3;
  double simplex_step = 0.2;
  /// Perturbed charts that must fail to improve an integer (knot) minimum.
  int plateau_checks = 50;
  std::uint64_t seed = 1;
  /// Extra charts evaluated alongside the coarse grid (warm starts).
  std::vector<HeightChart> warm_start;

  /// Throws InvalidArgument for out-of-range settings.
  void validate() const;
  std::size_t coarse_size() const;
};

/// The 24 unit Hurwitz quaternions (vertices of the 24-cell).
std::vector<Quat> cell24();
/// The 24 vertices of the dual 24-cell, (+-1 +-1 0 0)/sqrt 2 and permutations.
std::vector<Quat> dual_cell24();

/// Deterministic coarse charts: each grid quaternion acts by left
/// multiplication, combined with each dilation in the config.
std::vector<HeightChart> coarse_charts(const SearchConfig& config);

/// Chart obtained by a small left rotation exp(theta/2) of `base` and a
/// dilation factor exp(log_lambda): the local coordinates used in refinement.
HeightChart perturb_chart(const HeightChart& base, const Vec3& theta, double log_lambda);

struct TraceEntry {
  HeightChart chart;
  double value = 0.0;
  double best_so_far = 0.0;
};

struct TrunkennessReport {
  FieldSpec field;
  HeightChart best_chart;
  double upper_bound = 0.0;
  FluxProfile profile_at_best;
  std::vector<TraceEntry> trace;
  bool budget_exhausted = false;
  int evaluations = 0;

  /// JSON object with upper_bound, best_chart (matrix rows + lambda) and trace.
  void write_json(std::ostream& out) const;
};

TrunkennessReport trunkenness_upper(const FieldSpec& field, const SearchConfig& config,
                                    Executor* pool = nullptr);

}  // namespace trunk
