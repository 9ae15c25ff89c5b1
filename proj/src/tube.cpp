#include "trunkenness/tube.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trunkenness/error.hpp"

namespace trunk {

double tube_profile(TubeProfile profile, double rho, double radius, double flux) {
  if (rho >= radius) return 0.0;
  const double u = 1.0 - (rho / radius) * (rho / radius);
  const double area = kPi * radius * radius;
  switch (profile) {
    case TubeProfile::Parabolic:
      return 2.0 * flux / area * u;
    case TubeProfile::Bump:
      return 3.0 * flux / area * u * u;
  }
  return 0.0;
}

void TubeField::Series::fit(const std::vector<Vec3>& samples, int max_modes) {
  const std::size_t n = samples.size();
  const int modes = std::min<int>(max_modes, static_cast<int>((n - 1) / 2));
  mean.setZero();
  for (const auto& v : samples) mean += v;
  mean /= static_cast<double>(n);
  cos_coef.assign(modes, Vec3::Zero());
  sin_coef.assign(modes, Vec3::Zero());
  for (std::size_t j = 0; j < n; ++j) {
    const double s = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
    for (int k = 1; k <= modes; ++k) {
      cos_coef[k - 1] += std::cos(k * s) * samples[j];
      sin_coef[k - 1] += std::sin(k * s) * samples[j];
    }
  }
  const double w = 2.0 / static_cast<double>(n);
  for (int k = 0; k < modes; ++k) {
    cos_coef[k] *= w;
    sin_coef[k] *= w;
  }
}

void TubeField::Series::eval(double s, Vec3& v, Vec3& d1, Vec3& d2) const {
  const double c1 = std::cos(s), s1 = std::sin(s);
  double ck = c1, sk = s1;
  v = mean;
  d1.setZero();
  d2.setZero();
  for (std::size_t k = 1; k <= cos_coef.size(); ++k) {
    const Vec3& a = cos_coef[k - 1];
    const Vec3& b = sin_coef[k - 1];
    const double kk = static_cast<double>(k);
    const Vec3 even = a * ck + b * sk;
    v += even;
    d1 += kk * (b * ck - a * sk);
    d2 -= kk * kk * even;
    const double next_c = ck * c1 - sk * s1;
    sk = sk * c1 + ck * s1;
    ck = next_c;
  }
}

void TubeField::Series::eval(double s, Vec3& v, Vec3& d1) const {
  Vec3 d2;
  eval(s, v, d1, d2);
}

TubeField::TubeField(TubeSpec spec) : TubeField(std::move(spec), Options{}) {}

TubeField::TubeField(TubeSpec spec, Options options)
    : spec_(std::move(spec)), options_(options) {
  if (!(spec_.radius > 0.0) || !std::isfinite(spec_.radius)) {
    throw InvalidArgument("tube radius must be positive");
  }
  if (!(spec_.flux > 0.0) || !std::isfinite(spec_.flux)) {
    throw InvalidArgument("tube flux must be positive");
  }
  if (spec_.core.is_degenerate()) throw InvalidArgument("tube core is degenerate");
  if (options_.samples < 64) throw InvalidArgument("tube needs at least 64 frame samples");

  // Meridian flux normalization, composite Simpson on [0, r].
  {
    const int n = 2000;
    const double h = spec_.radius / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double rho = i * h;
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      acc += w * tube_profile(spec_.profile, rho, spec_.radius, spec_.flux) * 2.0 * kPi * rho;
    }
    acc *= h / 3.0;
    if (std::abs(acc - spec_.flux) > 1e-8 * std::max(1.0, std::abs(spec_.flux))) {
      throw InvalidArgument("tube profile does not integrate to the meridian flux");
    }
  }

  const auto vertices = spec_.core.chart_points();
  core_.fit(vertices, options_.max_modes);
  for (std::size_t j = 0; j < vertices.size(); ++j) {
    const double s = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(vertices.size());
    Vec3 v, d1;
    core_.eval(s, v, d1);
    smoothing_error_ = std::max(smoothing_error_, (v - vertices[j]).norm());
  }
  if (smoothing_error_ > 0.1 * spec_.radius) {
    throw InvalidArgument("tube core is too rough for Fourier smoothing (deviation " +
                          std::to_string(smoothing_error_) + ")");
  }

  build_frame();
  validate();
  build_grid();
}

void TubeField::build_frame() {
  const std::size_t m = options_.samples;
  sample_s_.resize(m);
  sample_pts_.resize(m);
  std::vector<Vec3> tangents(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double s = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(m);
    Vec3 v, d1;
    core_.eval(s, v, d1);
    if (!(d1.norm() > 1e-12)) throw TubeNotEmbedded("tube core has a stationary point");
    sample_s_[i] = s;
    sample_pts_[i] = v;
    tangents[i] = d1.normalized();
  }

  // Double-reflection transport of a normal vector along the samples.
  std::vector<Vec3> r(m + 1);
  {
    const Vec3& t0 = tangents[0];
    int axis = 0;
    t0.cwiseAbs().minCoeff(&axis);
    Vec3 e = Vec3::Unit(axis);
    r[0] = (e - e.dot(t0) * t0).normalized();
  }
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = (i + 1) % m;
    const Vec3 v1 = sample_pts_[j] - sample_pts_[i];
    const double c1 = v1.squaredNorm();
    const Vec3 rl = r[i] - (2.0 / c1) * v1.dot(r[i]) * v1;
    const Vec3 tl = tangents[i] - (2.0 / c1) * v1.dot(tangents[i]) * v1;
    const Vec3 v2 = tangents[j] - tl;
    const double c2 = v2.squaredNorm();
    r[i + 1] = c2 > 1e-300 ? Vec3(rl - (2.0 / c2) * v2.dot(rl) * v2) : rl;
    r[i + 1] = (r[i + 1] - r[i + 1].dot(tangents[j]) * tangents[j]).normalized();
  }
  // Spread the closing holonomy uniformly so the frame is periodic.
  const double holonomy =
      std::atan2(r[m].cross(r[0]).dot(tangents[0]), r[m].dot(r[0]));
  std::vector<Vec3> corrected(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double angle = holonomy * static_cast<double>(i) / static_cast<double>(m);
    corrected[i] = std::cos(angle) * r[i] + std::sin(angle) * tangents[i].cross(r[i]);
  }
  frame_series_.fit(corrected, options_.max_modes);

  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) total += (sample_pts_[(i + 1) % m] - sample_pts_[i]).norm();
  spacing_ = total / static_cast<double>(m);
}

TubeField::Frame TubeField::frame(double s) const {
  Frame f;
  Vec3 acc;
  core_.eval(s, f.point, f.velocity, acc);
  const double speed = f.velocity.norm();
  f.tangent = f.velocity / speed;
  const Vec3 dt = (acc - acc.dot(f.tangent) * f.tangent) / speed;

  Vec3 guide, dguide;
  frame_series_.eval(s, guide, dguide);
  const double gt = guide.dot(f.tangent);
  const Vec3 m = guide - gt * f.tangent;
  const Vec3 dm = dguide - (dguide.dot(f.tangent) + guide.dot(dt)) * f.tangent - gt * dt;
  const double mn = m.norm();
  f.normal = m / mn;
  f.d_normal = (dm - dm.dot(f.normal) * f.normal) / mn;
  f.binormal = f.tangent.cross(f.normal);
  f.d_binormal = dt.cross(f.normal) + f.tangent.cross(f.d_normal);
  return f;
}

Vec3 TubeField::tube_point(double s, double a, double b) const {
  const Frame f = frame(s);
  return f.point + a * f.normal + b * f.binormal;
}

void TubeField::validate() {
  const std::size_t m = sample_pts_.size();
  const double r = spec_.radius;

  max_curvature_ = 0.0;
  double max_norm = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    Vec3 v, d1, d2;
    core_.eval(sample_s_[i], v, d1, d2);
    const double k = d1.cross(d2).norm() / std::pow(d1.norm(), 3);
    max_curvature_ = std::max(max_curvature_, k);
    max_norm = std::max(max_norm, v.norm());
  }
  if (!(max_curvature_ * r < 1.0)) {
    throw TubeNotEmbedded("tube radius exceeds the core's radius of curvature");
  }
  if (max_norm + r > 50.0) {
    throw TubeNotEmbedded("tube reaches too close to the chart's point at infinity");
  }

  std::vector<double> arc(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    arc[i + 1] = arc[i] + (sample_pts_[(i + 1) % m] - sample_pts_[i]).norm();
  }
  const double total = arc[m];
  const double window = 4.0 * r;
  min_separation_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double along = arc[j] - arc[i];
      if (std::min(along, total - along) < window) continue;
      min_separation_ = std::min(min_separation_, (sample_pts_[i] - sample_pts_[j]).norm());
    }
  }
  if (!(min_separation_ > 2.0 * r)) {
    throw TubeNotEmbedded("non-adjacent parts of the core are closer than 2r (" +
                          std::to_string(min_separation_) + ")");
  }
}

void TubeField::build_grid() {
  const double reach = spec_.radius + spacing_;
  lo_ = hi_ = sample_pts_.front();
  for (const auto& p : sample_pts_) {
    lo_ = lo_.cwiseMin(p);
    hi_ = hi_.cwiseMax(p);
  }
  lo_.array() -= reach;
  hi_.array() += reach;
  const double extent = (hi_ - lo_).maxCoeff();
  cell_ = std::max(reach, extent / 256.0);
  for (int d = 0; d < 3; ++d) {
    dims_[d] = std::max(1, static_cast<int>(std::ceil((hi_[d] - lo_[d]) / cell_)));
  }
  const std::size_t cells = static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
  auto index_of = [&](const Vec3& p) {
    int ijk[3];
    for (int d = 0; d < 3; ++d) {
      ijk[d] = std::clamp(static_cast<int>((p[d] - lo_[d]) / cell_), 0, dims_[d] - 1);
    }
    return (static_cast<std::size_t>(ijk[2]) * dims_[1] + ijk[1]) * dims_[0] + ijk[0];
  };
  cell_start_.assign(cells + 1, 0);
  for (const auto& p : sample_pts_) ++cell_start_[index_of(p) + 1];
  for (std::size_t c = 0; c < cells; ++c) cell_start_[c + 1] += cell_start_[c];
  cell_items_.resize(sample_pts_.size());
  std::vector<std::uint32_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t i = 0; i < sample_pts_.size(); ++i) {
    cell_items_[fill[index_of(sample_pts_[i])]++] = static_cast<std::uint32_t>(i);
  }
}

double TubeField::solve_foot(const Vec3& x, double s0) const {
  // Root of g(s) = (x - c(s)) . c'(s), decreasing through the foot point.
  auto g = [&](double s, double* dg) {
    Vec3 v, d1, d2;
    core_.eval(s, v, d1, d2);
    const Vec3 diff = x - v;
    if (dg) *dg = -d1.squaredNorm() + diff.dot(d2);
    return diff.dot(d1);
  };
  const double h = 2.0 * kPi / static_cast<double>(sample_s_.size());
  double lo = s0 - h, hi = s0 + h;
  double glo = g(lo, nullptr), ghi = g(hi, nullptr);
  for (int k = 0; k < 8 && !(glo > 0.0 && ghi < 0.0); ++k) {
    if (!(glo > 0.0)) { lo -= h; glo = g(lo, nullptr); }
    if (!(ghi < 0.0)) { hi += h; ghi = g(hi, nullptr); }
  }
  if (!(glo > 0.0 && ghi < 0.0)) return std::numeric_limits<double>::quiet_NaN();
  double s = s0;
  for (int it = 0; it < 60; ++it) {
    double dg = 0.0;
    const double gs = g(s, &dg);
    if (gs > 0.0) lo = s; else hi = s;
    double next = (dg < 0.0) ? s - gs / dg : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 1e-15 * (1.0 + std::abs(s)) || hi - lo < 1e-15) return next;
    s = next;
  }
  return s;
}

std::optional<TubeField::Coordinates> TubeField::locate(const Vec3& x) const {
  for (int d = 0; d < 3; ++d) {
    if (x[d] < lo_[d] || x[d] > hi_[d]) return std::nullopt;
  }
  int ijk[3];
  for (int d = 0; d < 3; ++d) {
    ijk[d] = std::clamp(static_cast<int>((x[d] - lo_[d]) / cell_), 0, dims_[d] - 1);
  }
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (int dz = -1; dz <= 1; ++dz) {
    const int k = ijk[2] + dz;
    if (k < 0 || k >= dims_[2]) continue;
    for (int dy = -1; dy <= 1; ++dy) {
      const int j = ijk[1] + dy;
      if (j < 0 || j >= dims_[1]) continue;
      for (int dx = -1; dx <= 1; ++dx) {
        const int i = ijk[0] + dx;
        if (i < 0 || i >= dims_[0]) continue;
        const std::size_t c = (static_cast<std::size_t>(k) * dims_[1] + j) * dims_[0] + i;
        for (std::uint32_t q = cell_start_[c]; q < cell_start_[c + 1]; ++q) {
          const double d2 = (sample_pts_[cell_items_[q]] - x).squaredNorm();
          if (d2 < best) {
            best = d2;
            best_i = cell_items_[q];
          }
        }
      }
    }
  }
  const double reach = spec_.radius + spacing_;
  if (!(best <= reach * reach)) return std::nullopt;
  const double s = solve_foot(x, sample_s_[best_i]);
  if (!std::isfinite(s)) return std::nullopt;
  const Frame f = frame(s);
  const Vec3 d = x - f.point;
  const double a = d.dot(f.normal);
  const double b = d.dot(f.binormal);
  if (a * a + b * b >= spec_.radius * spec_.radius) return std::nullopt;
  double wrapped = std::fmod(s, 2.0 * kPi);
  if (wrapped < 0.0) wrapped += 2.0 * kPi;
  return Coordinates{wrapped, a, b};
}

Vec3 TubeField::chart_field(const Vec3& x) const {
  const auto where = locate(x);
  if (!where) return Vec3::Zero();
  const Frame f = frame(where->s);
  const double rho = std::hypot(where->a, where->b);
  const double amp = tube_profile(spec_.profile, rho, spec_.radius, spec_.flux);
  if (amp == 0.0) return Vec3::Zero();
  const Vec3 ds = f.velocity + where->a * f.d_normal + where->b * f.d_binormal;
  const double jac = ds.dot(f.tangent);
  return (amp / jac) * ds;
}

Vec4 TubeField::operator()(const PointS3& p) const {
  if (p[3] > 1.0 - 1e-9) return Vec4::Zero();
  const Vec3 x = to_chart(p);
  const Vec3 w = chart_field(x);
  if (w.isZero(0.0)) return Vec4::Zero();
  // Chart density of the round volume is sigma = (2 / (1 + |x|^2))^3; the
  // chart field Y = 2 pi^2 W / sigma preserves Haar measure with the same
  // meridian flux as W has for Lebesgue measure.
  const double g = 2.0 / (1.0 + x.squaredNorm());
  const Vec3 y = (kS3Volume / (g * g * g)) * w;
  return chart_vector_to_s3(x, y);
}

}  // namespace trunk
