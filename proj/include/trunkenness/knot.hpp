#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "trunkenness/geometry.hpp"

namespace trunk {

/// Closed polygonal loop, either on S^3 or in stereographic chart coordinates.
/// The closing edge from the last vertex back to the first is implicit.
class PLKnot {
 public:
  enum class Space { S3, Chart };

  /// Throws InvalidArgument unless there are >= 3 vertices and consecutive
  /// vertices (cyclically) are more than 1e-12 apart.
  static PLKnot on_s3(std::vector<PointS3> vertices);
  static PLKnot in_chart(std::vector<Vec3> vertices);
  /// A loop collapsed to a single point (orbit of a vanishing field). Its
  /// trunk and linking numbers are defined as 0.
  static PLKnot degenerate(const PointS3& where);

  Space space() const noexcept { return space_; }
  bool is_degenerate() const noexcept { return degenerate_; }
  std::size_t size() const noexcept;

  /// Vertices on S^3 (chart knots are mapped through the inverse projection).
  std::vector<PointS3> s3_points() const;
  /// Vertices in chart coordinates (S^3 knots are projected from infinity).
  std::vector<Vec3> chart_points() const;

  /// Inserts the midpoint of every edge (geodesic midpoint on S^3).
  PLKnot subdivided() const;
  /// Total length, measured in the space the knot lives in.
  double length() const;

 private:
  Space space_ = Space::S3;
  bool degenerate_ = false;
  std::vector<PointS3> s3_;
  std::vector<Vec3> chart_;
};

/// Dirac measure carried by a periodic orbit of period T_k.
struct KnotMeasure {
  PLKnot knot;
  double period = 1.0;
  bool normalized = false;

  double mass() const { return normalized ? 1.0 : period; }
};

/// Orbit of the Seifert flow of slope (p,q) through the point with
/// |z1/z2| = ratio, sampled at `vertices` uniform times over its period 1.
/// Throws NotCoprime when gcd(p,q) != 1.
PLKnot torus_knot(int p, int q, double ratio, std::size_t vertices = 4096);

/// `components` distinct orbits of the Seifert flow (p,q) on the torus
/// |z1/z2| = ratio, evenly spaced in phase: the n-strand cable of T(p,q).
std::vector<PLKnot> torus_cable(int p, int q, int components, double ratio,
                                std::size_t vertices = 4096);

/// Round circle of the given radius in the chart plane z = height, centred
/// on the z axis.
PLKnot chart_circle(double radius, std::size_t vertices = 512, double height = 0.0);

/// Heights of the vertices under a chart.
std::vector<double> vertex_heights(const PLKnot& knot, const HeightChart& chart);

/// Number of edges whose endpoint heights straddle t (sign changes of h - t).
/// Returns -1 when some vertex sits within 1e-12 of t.
long count_level_crossings(const std::vector<double>& heights, double t);

/// Flux of a Dirac knot measure through a level sphere: the number of
/// intersection points, divided by T_k when the measure is normalized.
/// A vertex lying on the level triggers up to 5 retries with the level
/// nudged by a random offset in [1e-9, 1e-8]; then DegenerateIntersection.
double knot_measure_flux(const KnotMeasure& measure, const LevelSphere& sphere);

/// Plain-text knot files: optional "#chart r3|s3" header, one vertex per line.
PLKnot read_knot(std::istream& in);
PLKnot read_knot_file(const std::string& path);
void write_knot(std::ostream& out, const PLKnot& knot,
                const std::vector<std::string>& header_lines = {});
void write_knot_file(const std::string& path, const PLKnot& knot,
                     const std::vector<std::string>& header_lines = {});

}  // namespace trunk
