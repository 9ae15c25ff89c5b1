#pragma once

// Divergence-free fields supported in a tubular neighbourhood of a knot.
//
// The core (given in chart coordinates) is smoothed by a truncated Fourier
// series and framed by a rotation-minimizing frame whose closing holonomy is
// spread uniformly along the loop, so the frame is periodic. With tube
// coordinates Psi(s,a,b) = c(s) + a N(s) + b B(s), the chart field is the
// Jacobian-corrected pushforward
//
//     W = f(rho) * dPsi/ds / det(DPsi),      rho = |(a,b)|,
//
// of the straight solenoidal field f(rho) d/ds. W is divergence-free for
// Lebesgue measure and carries flux F = int f dA through every meridian
// disc. It is moved to S^3 with the conformal density of the chart so that
// the result preserves the Haar measure with the same meridian flux.

#include <optional>
#include <vector>

#include "trunkenness/geometry.hpp"
#include "trunkenness/knot.hpp"

namespace trunk {

enum class TubeProfile {
  Parabolic,  // f = 2F/(pi r^2) (1 - (rho/r)^2)
  Bump,       // f = 3F/(pi r^2) (1 - (rho/r)^2)^2, C^1 at the wall
};

struct TubeSpec {
  PLKnot core;  // chart coordinates (S^3 cores are projected from infinity)
  double radius = 0.1;
  double flux = 1.0;
  TubeProfile profile = TubeProfile::Parabolic;
};

/// Radial profile value f(rho); zero for rho >= radius.
double tube_profile(TubeProfile profile, double rho, double radius, double flux);

class TubeField {
 public:
  struct Options {
    int max_modes = 64;           // Fourier modes kept for core and frame
    std::size_t samples = 2048;   // dense samples for frame, search and checks
  };

  /// Builds the smoothed core, frame and search grid. Throws
  /// TubeNotEmbedded when the tube self-intersects, its radius exceeds the
  /// core's radius of curvature, or it reaches near the chart's infinity.
  explicit TubeField(TubeSpec spec);
  TubeField(TubeSpec spec, Options options);

  const TubeSpec& spec() const noexcept { return spec_; }

  struct Frame {
    Vec3 point, velocity, tangent, normal, binormal;
    Vec3 d_normal, d_binormal;
  };
  /// Core point, velocity and frame (with s-derivatives) at s in [0, 2 pi).
  Frame frame(double s) const;
  Vec3 tube_point(double s, double a, double b) const;

  struct Coordinates {
    double s, a, b;
  };
  /// Tube coordinates of a chart point, or nothing outside the tube.
  std::optional<Coordinates> locate(const Vec3& x) const;

  /// Lebesgue-divergence-free chart field W.
  Vec3 chart_field(const Vec3& x) const;
  /// Haar-preserving field on S^3.
  Vec4 operator()(const PointS3& p) const;

  double max_curvature() const noexcept { return max_curvature_; }
  double min_separation() const noexcept { return min_separation_; }
  /// Largest distance between an input vertex and the smoothed core.
  double smoothing_error() const noexcept { return smoothing_error_; }

 private:
  struct Series {
    Vec3 mean = Vec3::Zero();
    std::vector<Vec3> cos_coef, sin_coef;  // modes 1..K
    void fit(const std::vector<Vec3>& samples, int max_modes);
    // value, first and second derivative
    void eval(double s, Vec3& v, Vec3& d1, Vec3& d2) const;
    void eval(double s, Vec3& v, Vec3& d1) const;
  };

  void build_frame();
  void build_grid();
  void validate();
  double solve_foot(const Vec3& x, double s0) const;

  TubeSpec spec_;
  Options options_;
  Series core_;
  Series frame_series_;
  std::vector<double> sample_s_;
  std::vector<Vec3> sample_pts_;
  double spacing_ = 0.0;

  // uniform search grid over the bounding box
  Vec3 lo_, hi_;
  double cell_ = 1.0;
  int dims_[3] = {1, 1, 1};
  std::vector<std::uint32_t> cell_start_, cell_items_;

  double max_curvature_ = 0.0;
  double min_separation_ = 0.0;
  double smoothing_error_ = 0.0;
};

}  // namespace trunk
