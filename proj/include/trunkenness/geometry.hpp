#pragma once

// Points, rotations and height charts on the unit 3-sphere.
//
// Conventions: a point is a unit vector (x1,x2,x3,x4) in R^4, identified
// with (z1,z2) = (x1 + i x2, x3 + i x4) in C^2 and with the quaternion
// x1 + x2 i + x3 j + x4 k. Stereographic coordinates are taken from the
// focus "infinity" = (0,0,0,1); the point "0" is (0,0,0,-1).

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <vector>

namespace trunk {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using Quat = Eigen::Quaterniond;

inline constexpr double kPi = 3.14159265358979323846;
/// Riemannian volume of the unit round 3-sphere; Haar density is its inverse.
inline constexpr double kS3Volume = 2.0 * kPi * kPi;
/// Levels closer than this to 0 or 1 are point-like and excluded.
inline constexpr double kLevelFloor = 1e-6;

class PointS3 {
 public:
  PointS3() : x_(0.0, 0.0, 0.0, -1.0) {}
  /// Normalizes `v`; throws InvalidArgument for a (near) zero vector.
  explicit PointS3(const Vec4& v);
  PointS3(double x1, double x2, double x3, double x4) : PointS3(Vec4(x1, x2, x3, x4)) {}

  const Vec4& coords() const noexcept { return x_; }
  double operator[](int i) const { return x_[i]; }
  double dot(const PointS3& other) const { return x_.dot(other.x_); }
  /// Great-circle distance.
  double distance(const PointS3& other) const;

  static PointS3 origin() { return PointS3(); }
  static PointS3 infinity() { return PointS3(0.0, 0.0, 0.0, 1.0); }

 private:
  Vec4 x_;
};

/// Element of SO(4).
class Rotation4 {
 public:
  Rotation4() : m_(Mat4::Identity()) {}
  /// Validates orthogonality and det = +1 (1e-10).
  explicit Rotation4(const Mat4& m);

  /// p -> left * p * conj(right) in quaternion arithmetic.
  static Rotation4 from_quaternions(const Quat& left, const Quat& right);
  /// (x1,x2,x3,x4) -> (x3,x4,x1,x2).
  static Rotation4 swap();
  /// A rotation taking `from` to the point 0 = (0,0,0,-1).
  static Rotation4 sending_to_origin(const PointS3& from);
  /// Haar-random rotation (uniform unit quaternion pair), deterministic in seed.
  static Rotation4 random(std::uint64_t seed);

  const Mat4& matrix() const noexcept { return m_; }
  Rotation4 inverse() const { return Rotation4(m_.transpose(), Unchecked{}); }
  Rotation4 operator*(const Rotation4& rhs) const { return Rotation4(m_ * rhs.m_, Unchecked{}); }
  PointS3 apply(const PointS3& p) const;
  Vec4 apply(const Vec4& v) const { return m_ * v; }

 private:
  struct Unchecked {};
  Rotation4(const Mat4& m, Unchecked) : m_(m) {}
  Mat4 m_;
};

/// Quaternion view of a point, and back.
Quat to_quaternion(const Vec4& v);
Vec4 from_quaternion(const Quat& q);

/// Stereographic projection from infinity = (0,0,0,1).
Vec3 to_chart(const PointS3& p);
PointS3 from_chart(const Vec3& x);
/// Pushes a chart vector at chart point x forward to a tangent vector of S^3.
Vec4 chart_vector_to_s3(const Vec3& x, const Vec3& y);
/// Pulls a tangent vector of S^3 at p back to chart coordinates.
Vec3 s3_vector_to_chart(const PointS3& p, const Vec4& v);

/// Height function h = h0 o D_lambda o R, levels are round 2-spheres.
class HeightChart {
 public:
  static constexpr double kMinDilation = 0.05;
  static constexpr double kMaxDilation = 20.0;

  HeightChart() = default;
  /// Throws InvalidArgument if lambda is outside [0.05, 20].
  explicit HeightChart(Rotation4 rotation, double dilation = 1.0);

  static HeightChart standard() { return HeightChart(); }
  /// Chart whose levels are x2 = const (the "swapped" axis).
  static HeightChart swapped() { return HeightChart(Rotation4::swap()); }

  const Rotation4& rotation() const noexcept { return rotation_; }
  double dilation() const noexcept { return dilation_; }

  /// Points of S^3 where the chart height is 0 and 1.
  PointS3 low_focus() const;
  PointS3 high_focus() const;

  /// Composes an extra rotation g: (g . chart)(p) = chart(g p).
  HeightChart precomposed(const Rotation4& g) const;

 private:
  Rotation4 rotation_;
  double dilation_ = 1.0;
};

/// h0(p) = 1 - 1/(1 + |x|^2), x the stereographic image of p; 1 at infinity.
double standard_height(const PointS3& p);
double chart_height(const HeightChart& chart, const PointS3& p);

/// Parametrized level h^{-1}(t) of a chart: a round 2-sphere of S^3.
class LevelSphere {
 public:
  /// Throws LevelOutOfRange unless t lies in (kLevelFloor, 1 - kLevelFloor).
  LevelSphere(const HeightChart& chart, double t);

  const HeightChart& chart() const noexcept { return chart_; }
  double level() const noexcept { return t_; }
  /// Value of x4 (before rotation) on this level, and Euclidean radius in R^4.
  double axis_height() const noexcept { return c_; }
  double radius() const noexcept { return radius_; }
  /// Geodesic radius around the low focus.
  double intrinsic_radius() const;
  double area() const;

  /// (u,v) in [0,pi] x [0,2pi).
  Vec4 point(double u, double v) const;
  /// Unit normal tangent to S^3, pointing toward increasing level
  /// (or away from it when reversed()).
  Vec4 normal(double u, double v) const;
  double area_element(double u, double v) const;

  LevelSphere reversed() const;
  bool is_reversed() const noexcept { return sign_ < 0.0; }

 private:
  HeightChart chart_;
  double t_ = 0.5;
  double c_ = 0.0;
  double radius_ = 1.0;
  double sign_ = 1.0;
};

/// Haar-distributed points (normalized standard normal 4-vectors).
std::vector<PointS3> haar_sample(std::size_t count, std::uint64_t seed);

}  // namespace trunk
