#include "trunkenness/knot_invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include "json.hpp"
#include "trunkenness/error.hpp"

namespace trunk {

namespace {

Executor& pick(Executor* pool) { return pool ? *pool : Executor::shared(); }

}  // namespace

LevelSweep sweep_levels(const std::vector<PLKnot>& link, const HeightChart& chart) {
  // +1 where an edge's open height range starts, -1 where it ends.
  std::vector<std::pair<double, int>> events;
  for (const auto& knot : link) {
    if (knot.is_degenerate()) continue;
    const auto h = vertex_heights(knot, chart);
    for (std::size_t i = 0; i < h.size(); ++i) {
      const double a = h[i], b = h[(i + 1) % h.size()];
      if (a == b) continue;
      events.emplace_back(std::min(a, b), +1);
      events.emplace_back(std::max(a, b), -1);
    }
  }
  std::sort(events.begin(), events.end());
  LevelSweep out;
  int count = 0;
  for (std::size_t i = 0; i < events.size();) {
    const double v = events[i].first;
    while (i < events.size() && events[i].first == v) count += events[i++].second;
    if (i < events.size()) {
      out.intervals.emplace_back(v, count);
      if (count > out.max_count) {
        out.max_count = count;
        out.argmax_level = 0.5 * (v + events[i].first);
      }
    }
  }
  return out;
}

int knot_trunk_fixed(const std::vector<PLKnot>& link, const HeightChart& chart) {
  return sweep_levels(link, chart).max_count;
}

std::vector<int> per_level_max(const LevelSweep& sweep, int n_levels) {
  if (n_levels < 1) throw InvalidArgument("n_levels must be positive");
  std::vector<int> bins(n_levels, 0);
  for (std::size_t k = 0; k < sweep.intervals.size(); ++k) {
    const double lo = sweep.intervals[k].first;
    const double hi = k + 1 < sweep.intervals.size() ? sweep.intervals[k + 1].first : lo;
    const int first = std::clamp(static_cast<int>(lo * n_levels), 0, n_levels - 1);
    const int last = std::clamp(static_cast<int>(hi * n_levels), 0, n_levels - 1);
    for (int b = first; b <= last; ++b) bins[b] = std::max(bins[b], sweep.intervals[k].second);
  }
  return bins;
}

void TrunkReport::write_json(std::ostream& out) const {
  nlohmann::json j;
  j["trunk_upper"] = trunk_upper;
  j["components"] = link.size();
  j["degenerate"] = degenerate;
  std::vector<double> m;
  for (int r = 0; r < 4; ++r) {
    for (int k = 0; k < 4; ++k) m.push_back(best_chart.rotation().matrix()(r, k));
  }
  j["best_chart"] = {{"matrix", m}, {"lambda", best_chart.dilation()}};
  j["per_level_max"] = per_level_max;
  j["trace"] = nlohmann::json::array();
  for (const auto& e : trace) j["trace"].push_back({{"value", e.value}, {"best", e.best_so_far}});
  out << j.dump(2) << "\n";
}

namespace {

// A chart is non-generic for a link when some component lies inside a single
// level; the sweep then sees no crossings at all. Such charts are skipped.
constexpr int kInadmissible = std::numeric_limits<int>::max();

int admissible_trunk(const std::vector<PLKnot>& link, const HeightChart& chart) {
  for (const auto& k : link) {
    if (k.is_degenerate()) continue;
    const auto h = vertex_heights(k, chart);
    const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
    if (*hi - *lo <= 1e-9) return kInadmissible;
  }
  return knot_trunk_fixed(link, chart);
}

}  // namespace

TrunkReport knot_trunk_upper(const std::vector<PLKnot>& link, const SearchConfig& config,
                             int n_levels, Executor* pool) {
  if (link.empty()) throw InvalidArgument("a link needs at least one component");
  TrunkReport report;
  report.link = link;
  report.degenerate = std::all_of(link.begin(), link.end(),
                                  [](const PLKnot& k) { return k.is_degenerate(); });
  if (report.degenerate) {
    report.per_level_max.assign(n_levels, 0);
    return report;
  }
  Executor& exec = pick(pool);

  // Dilation does not change which points share a level, so only rotations
  // are searched for knots.
  SearchConfig grid_config = config;
  grid_config.lambdas = {1.0};
  grid_config.dual_cell = true;
  auto coarse = coarse_charts(grid_config);
  coarse.insert(coarse.end(), config.warm_start.begin(), config.warm_start.end());

  int best = kInadmissible;
  auto record = [&](const HeightChart& chart, int value) {
    if (value == kInadmissible) return;
    if (value < best) {
      best = value;
      report.best_chart = chart;
    }
    report.trace.push_back({chart, value, best});
  };

  std::vector<int> values(coarse.size());
  exec.parallel_for(coarse.size(),
                    [&](std::size_t i) { values[i] = admissible_trunk(link, coarse[i]); });
  for (std::size_t i = 0; i < coarse.size(); ++i) record(coarse[i], values[i]);

  // Plateau confirmation: perturbations of growing size around the current
  // best; any improvement restarts the count.
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> size(0.01, 0.5);
  const int max_rounds = 20;
  for (int round = 0; round < max_rounds; ++round) {
    std::vector<HeightChart> trial;
    for (int k = 0; k < config.plateau_checks; ++k) {
      const Vec3 dir(normal(rng), normal(rng), normal(rng));
      trial.push_back(perturb_chart(report.best_chart, size(rng) * dir.normalized(), 0.0));
    }
    std::vector<int> tv(trial.size());
    exec.parallel_for(trial.size(), [&](std::size_t i) { tv[i] = admissible_trunk(link, trial[i]); });
    const int before = best;
    for (std::size_t i = 0; i < trial.size(); ++i) record(trial[i], tv[i]);
    if (best == before) break;
  }
  if (best == kInadmissible) throw DegenerateIntersection("no generic chart found for the link");
  report.trunk_upper = best;
  report.per_level_max = per_level_max(sweep_levels(link, report.best_chart), n_levels);
  return report;
}

namespace {

double segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1) {
  const Vec3 d1 = p1 - p0, d2 = q1 - q0, r = p0 - q0;
  const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
  const double c = d1.dot(r), b = d1.dot(d2);
  const double denom = a * e - b * b;
  double s = denom > 1e-300 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
  double t = (b * s + f) / e;
  if (t < 0.0) {
    t = 0.0;
    s = std::clamp(-c / a, 0.0, 1.0);
  } else if (t > 1.0) {
    t = 1.0;
    s = std::clamp((b - c) / a, 0.0, 1.0);
  }
  return ((p0 + s * d1) - (q0 + t * d2)).norm();
}

Vec3 unit_cross(const Vec3& a, const Vec3& b) {
  const Vec3 c = a.cross(b);
  const double n = c.norm();
  return n > 0.0 ? Vec3(c / n) : Vec3(Vec3::Zero());
}

double safe_asin(double x) { return std::asin(std::clamp(x, -1.0, 1.0)); }

// Signed solid angle subtended by segment pair (a0,a1), (b0,b1).
double pair_solid_angle(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
  const Vec3 r13 = b0 - a0, r14 = b1 - a0, r23 = b0 - a1, r24 = b1 - a1;
  const Vec3 n1 = unit_cross(r13, r14), n2 = unit_cross(r14, r24);
  const Vec3 n3 = unit_cross(r24, r23), n4 = unit_cross(r23, r13);
  const double omega = safe_asin(n1.dot(n2)) + safe_asin(n2.dot(n3)) + safe_asin(n3.dot(n4)) +
                       safe_asin(n4.dot(n1));
  const double orient = (b1 - b0).cross(a1 - a0).dot(r13);
  return orient > 0.0 ? omega : (orient < 0.0 ? -omega : 0.0);
}

// Chart in which both loops are far from infinity.
std::pair<std::vector<Vec3>, std::vector<Vec3>> project_pair(const PLKnot& k1, const PLKnot& k2) {
  const auto p1 = k1.s3_points();
  const auto p2 = k2.s3_points();
  std::vector<Vec4> candidates;
  for (const auto& q : cell24()) candidates.push_back(from_quaternion(q));
  for (const auto& q : dual_cell24()) candidates.push_back(from_quaternion(q));
  for (const auto& p : haar_sample(64, 0x5eedULL)) candidates.push_back(p.coords());
  Vec4 focus = candidates.front();
  double best = -2.0;
  for (const auto& f : candidates) {
    // Chordal closeness to the nearest vertex, via the largest dot product.
    double nearest = -1.0;
    for (const auto* pts : {&p1, &p2}) {
      for (const auto& p : *pts) nearest = std::max(nearest, p.coords().dot(f));
    }
    if (1.0 - nearest > best) {
      best = 1.0 - nearest;
      focus = f;
    }
  }
  // sending_to_origin maps the focus to (0,0,0,-1); flipping x3, x4 (a
  // rotation) then takes it to infinity.
  Mat4 flip = Mat4::Identity();
  flip(2, 2) = flip(3, 3) = -1.0;
  const Mat4 m = flip * Rotation4::sending_to_origin(PointS3(focus)).matrix();
  auto project = [&](const std::vector<PointS3>& pts) {
    std::vector<Vec3> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(to_chart(PointS3(m * p.coords())));
    return out;
  };
  return {project(p1), project(p2)};
}

}  // namespace

double gauss_linking_sum(const PLKnot& k1, const PLKnot& k2, Executor* pool) {
  if (k1.is_degenerate() || k2.is_degenerate()) return 0.0;
  const auto [a, b] = project_pair(k1, k2);
  const std::size_t n = a.size(), m = b.size();
  std::vector<Vec3> mid_b(m);
  std::vector<double> half_b(m);
  for (std::size_t j = 0; j < m; ++j) {
    mid_b[j] = 0.5 * (b[j] + b[(j + 1) % m]);
    half_b[j] = 0.5 * (b[(j + 1) % m] - b[j]).norm();
  }
  std::vector<double> rows(n, 0.0);
  std::vector<char> too_close(n, 0);
  pick(pool).parallel_for(n, [&](std::size_t i) {
    const Vec3& a0 = a[i];
    const Vec3& a1 = a[(i + 1) % n];
    const Vec3 mid_a = 0.5 * (a0 + a1);
    const double half_a = 0.5 * (a1 - a0).norm();
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const Vec3& b0 = b[j];
      const Vec3& b1 = b[(j + 1) % m];
      if ((mid_a - mid_b[j]).norm() - half_a - half_b[j] <= 1e-9 &&
          segment_distance(a0, a1, b0, b1) <= 1e-9) {
        too_close[i] = 1;
        return;
      }
      acc += pair_solid_angle(a0, a1, b0, b1);
    }
    rows[i] = acc;
  });
  if (std::any_of(too_close.begin(), too_close.end(), [](char c) { return c != 0; })) {
    throw KnotsTooClose("knots come within 1e-9 of each other");
  }
  return std::accumulate(rows.begin(), rows.end(), 0.0) / (4.0 * kPi);
}

LinkingResult linking_number(const PLKnot& k1, const PLKnot& k2, Executor* pool) {
  LinkingResult out;
  out.raw = gauss_linking_sum(k1, k2, pool);
  out.value = std::lround(out.raw);
  out.residual = std::abs(out.raw - static_cast<double>(out.value));
  if (out.residual > 0.05) {
    throw NonIntegerLinking("Gauss sum " + std::to_string(out.raw) +
                            " is not close to an integer");
  }
  return out;
}

HelicityEstimate asymptotic_helicity(const FieldSpec& field, int pairs, double duration,
                                     double step, std::uint64_t seed, Closure closure,
                                     Executor* pool) {
  if (!(duration >= 1.0)) throw InvalidArgument("helicity duration must be at least 1");
  if (pairs < 4) throw InvalidArgument("at least 4 orbit pairs are required");
  HelicityEstimate out;
  out.samples.assign(pairs, 0.0);
  Executor& exec = pick(pool);
  exec.parallel_for(static_cast<std::size_t>(pairs), [&](std::size_t k) {
    for (int attempt = 0;; ++attempt) {
      const auto pts = haar_sample(2, seed + 1000003ULL * k + 7919ULL * attempt);
      const auto k1 = orbit_knot(field, pts[0], duration, step, closure);
      const auto k2 = orbit_knot(field, pts[1], duration, step, closure);
      try {
        // Pairs run in parallel, so the inner sum stays on this thread.
        out.samples[k] = gauss_linking_sum(k1, k2, &exec) / (duration * duration);
        return;
      } catch (const KnotsTooClose&) {
        if (attempt >= 10) throw;
      }
    }
  });
  const double n = static_cast<double>(pairs);
  out.estimate = std::accumulate(out.samples.begin(), out.samples.end(), 0.0) / n;
  double var = 0.0;
  for (double s : out.samples) var += (s - out.estimate) * (s - out.estimate);
  out.spread = std::sqrt(var / (n - 1.0));
  return out;
}

AsymptoticTrunkReport asymptotic_trunk(const FieldSpec& field, const PointS3& start,
                                       const std::vector<double>& durations, double step,
                                       const SearchConfig& config, bool compare_field,
                                       Closure closure, Executor* pool) {
  if (durations.size() < 3) throw InvalidArgument("at least 3 durations are required");
  for (std::size_t i = 0; i < durations.size(); ++i) {
    if (!(durations[i] > 0.0)) throw InvalidArgument("durations must be positive");
    if (i > 0 && !(durations[i] > durations[i - 1])) {
      throw InvalidArgument("durations must be increasing");
    }
  }
  AsymptoticTrunkReport out;
  SearchConfig search = config;
  for (double t : durations) {
    const auto knot = orbit_knot(field, start, t, step, closure);
    const auto report = knot_trunk_upper({knot}, search, 64, pool);
    AsymptoticTrunkPoint point;
    point.duration = t;
    point.trunk = report.trunk_upper;
    point.normalized = report.trunk_upper / t;
    point.degenerate = report.degenerate;
    out.points.push_back(point);
    if (!report.degenerate) search.warm_start = {report.best_chart};
  }
  if (compare_field) out.field_trunkenness = trunkenness_upper(field, config, pool);
  return out;
}

}  // namespace trunk
