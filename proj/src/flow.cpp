#include "trunkenness/flow.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "trunkenness/error.hpp"

namespace trunk {

namespace {

constexpr double kGuard = 0.1;

Vec4 guarded(const FieldSpec& field, const Vec4& y, double h) {
  const Vec4 v = field(PointS3(y));
  if (std::abs(h) * v.norm() > kGuard) {
    std::ostringstream msg;
    msg << "step " << std::abs(h) << " times speed " << v.norm() << " exceeds " << kGuard;
    throw StepTooLarge(msg.str());
  }
  return v;
}

// One RK4 step of size h (negative h integrates backward).
Vec4 rk4(const FieldSpec& field, const Vec4& y, double h) {
  const Vec4 k1 = guarded(field, y, h);
  const Vec4 k2 = guarded(field, y + 0.5 * h * k1, h);
  const Vec4 k3 = guarded(field, y + 0.5 * h * k2, h);
  const Vec4 k4 = guarded(field, y + h * k3, h);
  return (y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).normalized();
}

}  // namespace

OrbitPath integrate(const FieldSpec& field, const PointS3& start, double duration, double step) {
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw InvalidArgument("duration must be non-negative");
  }
  if (!(step > 0.0)) throw InvalidArgument("step must be positive");
  OrbitPath path{field, start, duration, step, {start}};
  if (duration == 0.0) return path;
  if (step > duration * (1.0 + 1e-12)) throw InvalidArgument("step must not exceed duration");
  const auto n = static_cast<std::size_t>(std::floor(duration / step + 1e-9));
  const double h = duration / static_cast<double>(n);
  path.samples.reserve(n + 1);
  Vec4 y = start.coords();
  for (std::size_t i = 0; i < n; ++i) {
    y = rk4(field, y, h);
    path.samples.emplace_back(y);
  }
  return path;
}

PLKnot close_orbit(const OrbitPath& path, Closure closure) {
  std::vector<PointS3> pts;
  pts.reserve(path.samples.size() + 16);
  for (const auto& p : path.samples) {
    if (pts.empty() || (p.coords() - pts.back().coords()).norm() > 1e-12) pts.push_back(p);
  }
  while (pts.size() > 1 && (pts.back().coords() - pts.front().coords()).norm() <= 1e-12) {
    pts.pop_back();
  }
  if (pts.size() < 3) return PLKnot::degenerate(path.start);

  double mean = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    mean += (pts[i + 1].coords() - pts[i].coords()).norm();
  }
  mean /= static_cast<double>(pts.size() - 1);

  const PointS3 end = pts.back();
  const PointS3 start = pts.front();
  std::vector<PointS3> bridge;
  if (closure == Closure::Geodesic) {
    const double angle = end.distance(start);
    Vec4 dir;
    if (angle > kPi - 1e-12) {
      // Antipodal: leave along the first basis direction not parallel to end.
      for (int axis = 0; axis < 4; ++axis) {
        dir = Vec4::Unit(axis) - end.coords()[axis] * end.coords();
        if (dir.norm() > 1e-6) break;
      }
      dir.normalize();
    } else {
      dir = (start.coords() - std::cos(angle) * end.coords()).normalized();
    }
    const int pieces = std::max(1, static_cast<int>(std::ceil(angle / mean)));
    for (int k = 1; k < pieces; ++k) {
      const double phi = angle * k / pieces;
      bridge.emplace_back(std::cos(phi) * end.coords() + std::sin(phi) * dir);
    }
  } else {
    const Vec3 a = to_chart(end);
    const Vec3 b = to_chart(start);
    // Compare in S^3 length so both closures use similar spacing.
    const double chart_mean = mean * 0.5 * (1.0 + 0.5 * (a.squaredNorm() + b.squaredNorm()));
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a).norm() / chart_mean)));
    for (int k = 1; k < pieces; ++k) {
      bridge.push_back(from_chart(a + (b - a) * (static_cast<double>(k) / pieces)));
    }
  }
  for (const auto& p : bridge) {
    if ((p.coords() - pts.back().coords()).norm() > 1e-12 &&
        (p.coords() - start.coords()).norm() > 1e-12) {
      pts.push_back(p);
    }
  }
  return PLKnot::on_s3(std::move(pts));
}

PLKnot orbit_knot(const FieldSpec& field, const PointS3& start, double duration, double step,
                  Closure closure) {
  if (!(duration > 0.0)) throw InvalidArgument("orbit knot needs a positive duration");
  return close_orbit(integrate(field, start, duration, step), closure);
}

bool crossing_membership(const FieldSpec& field, const PointS3& p, const HeightChart& chart,
                         double t, double epsilon, int substeps) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (substeps < 4) throw InvalidArgument("substeps must be >= 4");
  const double first = chart_height(chart, p) - t;
  if (std::abs(first) <= 1e-12) return true;
  const double h = -epsilon / substeps;
  Vec4 y = p.coords();
  for (int i = 0; i < substeps; ++i) {
    y = rk4(field, y, h);
    const double side = chart_height(chart, PointS3(y)) - t;
    if (side == 0.0 || (side < 0.0) != (first < 0.0)) return true;
  }
  return false;
}

double default_step(const FieldSpec& field) {
  if (const auto* s = std::get_if<FieldSpec::Seifert>(&field.variant())) {
    return 1e-3 * std::min(1.0, 1.0 / std::max(s->alpha, s->beta));
  }
  const double speed = field.speed_bound();
  if (!(speed > 0.0)) return 1e-3;
  return std::min(1e-3, 0.05 / speed);
}

void write_orbit(std::ostream& out, const OrbitPath& path) {
  out << "# field " << path.field.describe() << "\n";
  out << std::setprecision(17);
  out << "# duration " << path.duration << "\n";
  out << "# step " << path.step << "\n";
  out << "#chart s3\n";
  for (const auto& p : path.samples) out << p[0] << " " << p[1] << " " << p[2] << " " << p[3] << "\n";
}

}  // namespace trunk
