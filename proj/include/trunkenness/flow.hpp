#pragma once

#include <iosfwd>
#include <vector>

#include "trunkenness/fields.hpp"
#include "trunkenness/geometry.hpp"
#include "trunkenness/knot.hpp"

namespace trunk {

/// Sampled forward orbit. samples.size() == floor(duration / step) + 1.
struct OrbitPath {
  FieldSpec field;
  PointS3 start;
  double duration = 0.0;
  double step = 0.0;  // requested step; the effective one is duration / (samples - 1)
  std::vector<PointS3> samples;
};

/// Classical RK4 in R^4 with projection back onto S^3 after every step.
/// Throws StepTooLarge when step * |X| exceeds 0.1 at any stage.
OrbitPath integrate(const FieldSpec& field, const PointS3& start, double duration, double step);

enum class Closure {
  Geodesic,    // shortest great-circle arc from the endpoint back to the start
  ChartChord,  // straight segment in the stereographic chart from infinity
};

/// Orbit closed by a short arc, subdivided so no closing edge is longer than
/// the mean orbit edge. A vanishing orbit yields PLKnot::degenerate.
PLKnot close_orbit(const OrbitPath& path, Closure closure = Closure::Geodesic);
PLKnot orbit_knot(const FieldSpec& field, const PointS3& start, double duration, double step,
                  Closure closure = Closure::Geodesic);

/// Whether p lies in phi^[0,eps](h^{-1}(t)): the backward orbit segment of
/// length eps, sampled at `substeps` RK4 steps, changes side of the level.
bool crossing_membership(const FieldSpec& field, const PointS3& p, const HeightChart& chart,
                         double t, double epsilon, int substeps);

/// Step that keeps the stability guard satisfied with margin.
double default_step(const FieldSpec& field);

/// Knot text format with the field and duration recorded in the header.
void write_orbit(std::ostream& out, const OrbitPath& path);

}  // namespace trunk
