#include "trunkenness/geometry.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <random>

#include "trunkenness/error.hpp"

namespace trunk {

PointS3::PointS3(const Vec4& v) {
  const double n = v.norm();
  if (!(n > 1e-150) || !std::isfinite(n)) {
    throw InvalidArgument("cannot normalize a zero or non-finite 4-vector onto S^3");
  }
  x_ = v / n;
}

double PointS3::distance(const PointS3& other) const {
  // atan2 form stays accurate for nearly equal and nearly antipodal points.
  const double s = (x_ - other.x_).norm();
  const double c = (x_ + other.x_).norm();
  return 2.0 * std::atan2(s, c);
}

Rotation4::Rotation4(const Mat4& m) : m_(m) {
  const double orth = (m.transpose() * m - Mat4::Identity()).cwiseAbs().maxCoeff();
  if (!(orth <= 1e-10)) throw InvalidArgument("rotation matrix is not orthogonal");
  if (!(std::abs(m.determinant() - 1.0) <= 1e-10)) {
    throw InvalidArgument("rotation matrix must have determinant +1");
  }
}

Quat to_quaternion(const Vec4& v) { return Quat(v[0], v[1], v[2], v[3]); }

Vec4 from_quaternion(const Quat& q) { return Vec4(q.w(), q.x(), q.y(), q.z()); }

Rotation4 Rotation4::from_quaternions(const Quat& left, const Quat& right) {
  const Quat a = left.normalized();
  const Quat b = right.normalized().conjugate();
  Mat4 m;
  for (int i = 0; i < 4; ++i) {
    m.col(i) = from_quaternion(a * to_quaternion(Vec4::Unit(i)) * b);
  }
  return Rotation4(m, Unchecked{});
}

Rotation4 Rotation4::swap() {
  Mat4 m = Mat4::Zero();
  m(0, 2) = m(1, 3) = m(2, 0) = m(3, 1) = 1.0;
  return Rotation4(m, Unchecked{});
}

Rotation4 Rotation4::sending_to_origin(const PointS3& from) {
  // q * from = -k  <=>  q = -k * conj(from).
  const Quat minus_k(0.0, 0.0, 0.0, -1.0);
  const Quat q = minus_k * to_quaternion(from.coords()).conjugate();
  return from_quaternions(q, Quat::Identity());
}

Rotation4 Rotation4::random(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto draw = [&] {
    Vec4 v;
    for (int i = 0; i < 4; ++i) v[i] = normal(rng);
    return to_quaternion(v.normalized());
  };
  const Quat left = draw();
  const Quat right = draw();
  return from_quaternions(left, right);
}

PointS3 Rotation4::apply(const PointS3& p) const { return PointS3(m_ * p.coords()); }

Vec3 to_chart(const PointS3& p) {
  const Vec4& x = p.coords();
  const double denom = 1.0 - x[3];
  return x.head<3>() / denom;
}

PointS3 from_chart(const Vec3& x) {
  const double s = x.squaredNorm();
  Vec4 p;
  p.head<3>() = 2.0 * x / (1.0 + s);
  p[3] = (s - 1.0) / (s + 1.0);
  return PointS3(p);
}

Vec4 chart_vector_to_s3(const Vec3& x, const Vec3& y) {
  const double s = x.squaredNorm();
  const double inv = 1.0 / (1.0 + s);
  const double xy = x.dot(y);
  Vec4 v;
  v.head<3>() = 2.0 * inv * y - 4.0 * inv * inv * xy * x;
  v[3] = 4.0 * inv * inv * xy;
  return v;
}

Vec3 s3_vector_to_chart(const PointS3& p, const Vec4& v) {
  const Vec4& x = p.coords();
  const double d = 1.0 - x[3];
  return v.head<3>() / d + x.head<3>() * (v[3] / (d * d));
}

HeightChart::HeightChart(Rotation4 rotation, double dilation)
    : rotation_(std::move(rotation)), dilation_(dilation) {
  if (!(dilation >= kMinDilation && dilation <= kMaxDilation)) {
    throw InvalidArgument("chart dilation must lie in [0.05, 20]");
  }
}

PointS3 HeightChart::low_focus() const {
  return rotation_.inverse().apply(PointS3::origin());
}

PointS3 HeightChart::high_focus() const {
  return rotation_.inverse().apply(PointS3::infinity());
}

HeightChart HeightChart::precomposed(const Rotation4& g) const {
  return HeightChart(rotation_ * g, dilation_);
}

namespace {

// h0 o D_lambda written in terms of the axis coordinate x4 = (R p)_4, using
// |x|^2 = (1 + x4) / (1 - x4) for the stereographic radius.
double height_from_axis(double x4, double dilation) {
  if (x4 >= 1.0) return 1.0;
  if (x4 <= -1.0) return 0.0;
  const double l2 = dilation * dilation;
  const double up = 1.0 + x4;
  return l2 * up / ((1.0 - x4) + l2 * up);
}

}  // namespace

double standard_height(const PointS3& p) { return height_from_axis(p[3], 1.0); }

double chart_height(const HeightChart& chart, const PointS3& p) {
  const double x4 = chart.rotation().matrix().row(3).dot(p.coords());
  return height_from_axis(std::clamp(x4, -1.0, 1.0), chart.dilation());
}

LevelSphere::LevelSphere(const HeightChart& chart, double t) : chart_(chart), t_(t) {
  if (!(t > kLevelFloor && t < 1.0 - kLevelFloor)) {
    throw LevelOutOfRange("level must lie in (1e-6, 1 - 1e-6)");
  }
  const double l = chart.dilation();
  const double r2 = t / ((1.0 - t) * l * l);
  c_ = (r2 - 1.0) / (r2 + 1.0);
  radius_ = std::sqrt(std::max(0.0, 1.0 - c_ * c_));
}

double LevelSphere::intrinsic_radius() const { return std::acos(std::clamp(-c_, -1.0, 1.0)); }

double LevelSphere::area() const { return 4.0 * kPi * radius_ * radius_; }

Vec4 LevelSphere::point(double u, double v) const {
  const double su = std::sin(u);
  const Vec4 q(radius_ * su * std::cos(v), radius_ * su * std::sin(v), radius_ * std::cos(u), c_);
  return chart_.rotation().matrix().transpose() * q;
}

Vec4 LevelSphere::normal(double u, double v) const {
  const double su = std::sin(u);
  // Gradient of x4 projected to the tangent space: e4 - c q, of norm radius.
  Vec4 n(-c_ * su * std::cos(v), -c_ * su * std::sin(v), -c_ * std::cos(u), radius_);
  return sign_ * (chart_.rotation().matrix().transpose() * n);
}

double LevelSphere::area_element(double u, double /*v*/) const {
  return radius_ * radius_ * std::sin(u);
}

LevelSphere LevelSphere::reversed() const {
  LevelSphere copy = *this;
  copy.sign_ = -sign_;
  return copy;
}

std::vector<PointS3> haar_sample(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<PointS3> out;
  out.reserve(count);
  while (out.size() < count) {
    Vec4 v(normal(rng), normal(rng), normal(rng), normal(rng));
    if (v.squaredNorm() < 1e-24) continue;
    out.emplace_back(v);
  }
  return out;
}

}  // namespace trunk
