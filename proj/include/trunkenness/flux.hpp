#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "trunkenness/executor.hpp"
#include "trunkenness/fields.hpp"
#include "trunkenness/geometry.hpp"

namespace trunk {

struct QuadratureGrid {
  int nu = 128;  // polar rows
  int nv = 256;  // azimuthal columns
};

/// Haar-normalized unsigned flux (1 / 2 pi^2) * sum |<X, n>| dA over a
/// midpoint grid on the level sphere. Requires nu, nv >= 8.
double flux_quadrature(const FieldSpec& field, const LevelSphere& sphere,
                       QuadratureGrid grid = {}, Executor* pool = nullptr);

struct MonteCarloFlux {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t hits = 0;
};

/// (1/eps) * Haar measure of phi^[0,eps](h^{-1}(t)), estimated from `samples`
/// Haar points. Requires eps in [1e-4, 0.05] and samples >= 1000.
MonteCarloFlux flux_monte_carlo(const FieldSpec& field, const HeightChart& chart, double t,
                                double epsilon, std::size_t samples, std::uint64_t seed,
                                int substeps = 16, Executor* pool = nullptr);

/// Flux sampled over levels of one chart. Every evaluated level is kept,
/// sorted by t, including the refinement evaluations around the maximum.
struct FluxProfile {
  HeightChart chart;
  std::vector<double> levels;
  std::vector<double> values;
  double argmax_level = 0.5;
  double max_value = 0.0;

  /// Columns `t,flux`.
  void write_csv(std::ostream& out) const;
};

/// Uniform grid of n_levels (>= 16) levels over [t_floor, 1 - t_floor], then
/// golden-section refinement of the best bracket until it is below 1e-4.
FluxProfile flux_profile(const FieldSpec& field, const HeightChart& chart, int n_levels,
                         QuadratureGrid grid = {}, Executor* pool = nullptr);

}  // namespace trunk
