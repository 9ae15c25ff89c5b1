#include "trunkenness/flux.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>

#include "trunkenness/error.hpp"
#include "trunkenness/flow.hpp"

namespace trunk {

namespace {

Executor& pick(Executor* pool) { return pool ? *pool : Executor::shared(); }

}  // namespace

double flux_quadrature(const FieldSpec& field, const LevelSphere& sphere, QuadratureGrid grid,
                       Executor* pool) {
  if (grid.nu < 8 || grid.nv < 8) throw InvalidArgument("quadrature grid must be at least 8x8");
  if (field.is_zero()) return 0.0;
  const double du = kPi / grid.nu;
  const double dv = 2.0 * kPi / grid.nv;
  std::vector<double> cos_v(grid.nv), sin_v(grid.nv);
  for (int j = 0; j < grid.nv; ++j) {
    cos_v[j] = std::cos((j + 0.5) * dv);
    sin_v[j] = std::sin((j + 0.5) * dv);
  }
  const Mat4 back = sphere.chart().rotation().matrix().transpose();
  const double c = sphere.axis_height();
  const double rho = sphere.radius();
  const double sign = sphere.is_reversed() ? -1.0 : 1.0;

  // Row sums are reduced in a fixed order so the result does not depend on
  // scheduling.
  std::vector<double> rows(grid.nu, 0.0);
  pick(pool).parallel_for(static_cast<std::size_t>(grid.nu), [&](std::size_t i) {
    const double u = (static_cast<double>(i) + 0.5) * du;
    const double su = std::sin(u), cu = std::cos(u);
    double acc = 0.0;
    for (int j = 0; j < grid.nv; ++j) {
      const Vec4 q(rho * su * cos_v[j], rho * su * sin_v[j], rho * cu, c);
      const Vec4 nq(-c * su * cos_v[j], -c * su * sin_v[j], -c * cu, rho);
      const Vec4 p = back * q;
      const Vec4 n = sign * (back * nq);
      acc += std::abs(field(PointS3(p)).dot(n));
    }
    rows[i] = acc * rho * rho * su;
  });
  const double total = std::accumulate(rows.begin(), rows.end(), 0.0);
  return total * du * dv / kS3Volume;
}

MonteCarloFlux flux_monte_carlo(const FieldSpec& field, const HeightChart& chart, double t,
                                double epsilon, std::size_t samples, std::uint64_t seed,
                                int substeps, Executor* pool) {
  if (!(epsilon >= 1e-4 && epsilon <= 0.05)) {
    throw InvalidArgument("epsilon must lie in [1e-4, 0.05]");
  }
  if (samples < 1000) throw InvalidArgument("at least 1000 samples are required");
  const auto points = haar_sample(samples, seed);
  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::size_t> hits(chunks, 0);
  pick(pool).parallel_for(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(samples, (c + 1) * kChunk);
    std::size_t local = 0;
    for (std::size_t i = c * kChunk; i < end; ++i) {
      if (crossing_membership(field, points[i], chart, t, epsilon, substeps)) ++local;
    }
    hits[c] = local;
  });
  MonteCarloFlux out;
  out.hits = std::accumulate(hits.begin(), hits.end(), std::size_t{0});
  const double n = static_cast<double>(samples);
  const double frac = static_cast<double>(out.hits) / n;
  out.estimate = frac / epsilon;
  out.std_error = std::sqrt(frac * (1.0 - frac) / n) / epsilon;
  return out;
}

void FluxProfile::write_csv(std::ostream& out) const {
  out << "t,flux\n" << std::setprecision(12);
  for (std::size_t i = 0; i < levels.size(); ++i) out << levels[i] << "," << values[i] << "\n";
}

FluxProfile flux_profile(const FieldSpec& field, const HeightChart& chart, int n_levels,
                         QuadratureGrid grid, Executor* pool) {
  if (n_levels < 16) throw InvalidArgument("a flux profile needs at least 16 levels");
  const double lo = kLevelFloor * (1.0 + 1e-6);
  const double hi = 1.0 - lo;
  std::vector<double> ts(n_levels), fs(n_levels);
  for (int i = 0; i < n_levels; ++i) ts[i] = lo + (hi - lo) * i / (n_levels - 1);
  auto flux_at = [&](double t) { return flux_quadrature(field, LevelSphere(chart, t), grid, pool); };
  pick(pool).parallel_for(static_cast<std::size_t>(n_levels),
                          [&](std::size_t i) { fs[i] = flux_at(ts[i]); });

  const auto best = static_cast<int>(std::max_element(fs.begin(), fs.end()) - fs.begin());
  std::vector<std::pair<double, double>> evaluated;
  for (int i = 0; i < n_levels; ++i) evaluated.emplace_back(ts[i], fs[i]);

  if (!field.is_zero()) {
    // Golden-section search for the maximum inside the neighbouring cells.
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = ts[std::max(0, best - 1)];
    double b = ts[std::min(n_levels - 1, best + 1)];
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = flux_at(x1), f2 = flux_at(x2);
    evaluated.emplace_back(x1, f1);
    evaluated.emplace_back(x2, f2);
    while (b - a >= 1e-4) {
      if (f1 >= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - invphi * (b - a);
        f1 = flux_at(x1);
        evaluated.emplace_back(x1, f1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + invphi * (b - a);
        f2 = flux_at(x2);
        evaluated.emplace_back(x2, f2);
      }
    }
  }

  std::sort(evaluated.begin(), evaluated.end());
  FluxProfile profile;
  profile.chart = chart;
  for (const auto& [t, f] : evaluated) {
    profile.levels.push_back(t);
    profile.values.push_back(f);
    if (f > profile.max_value || profile.levels.size() == 1) {
      profile.max_value = f;
      profile.argmax_level = t;
    }
  }
  return profile;
}

}  // namespace trunk
