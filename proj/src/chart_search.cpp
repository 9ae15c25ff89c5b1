#include "trunkenness/chart_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "json.hpp"

#include "trunkenness/error.hpp"
#include "trunkenness/nelder_mead.hpp"

namespace trunk {

void SearchConfig::validate() const {
  if (n_levels < 16) throw InvalidArgument("n_levels must be at least 16");
  if (grid.nu < 8 || grid.nv < 8) throw InvalidArgument("quadrature grid must be at least 8x8");
  if (lambdas.empty()) throw InvalidArgument("at least one dilation is required");
  for (double l : lambdas) {
    if (!(l >= HeightChart::kMinDilation && l <= HeightChart::kMaxDilation)) {
      throw InvalidArgument("dilations must lie in [0.05, 20]");
    }
  }
  if (coarse_size() < 32) throw InvalidArgument("coarse grid must hold at least 32 charts");
  if (refine_budget < 200) throw InvalidArgument("refinement budget must be at least 200");
  if (refine_starts < 1) throw InvalidArgument("at least one refinement start is required");
  if (!(simplex_tolerance > 0.0)) throw InvalidArgument("simplex tolerance must be positive");
  if (!(simplex_step > 0.0)) throw InvalidArgument("simplex step must be positive");
  if (plateau_checks < 1) throw InvalidArgument("plateau checks must be positive");
}

std::size_t SearchConfig::coarse_size() const {
  return (dual_cell ? 48 : 24) * lambdas.size() + warm_start.size();
}

std::vector<Quat> cell24() {
  std::vector<Quat> out;
  for (int axis = 0; axis < 4; ++axis) {
    for (double s : {1.0, -1.0}) {
      Vec4 v = Vec4::Zero();
      v[axis] = s;
      out.push_back(to_quaternion(v));
    }
  }
  for (int mask = 0; mask < 16; ++mask) {
    Vec4 v;
    for (int k = 0; k < 4; ++k) v[k] = (mask >> k & 1) ? -0.5 : 0.5;
    out.push_back(to_quaternion(v));
  }
  return out;
}

std::vector<Quat> dual_cell24() {
  std::vector<Quat> out;
  const double h = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      for (double sa : {h, -h}) {
        for (double sb : {h, -h}) {
          Vec4 v = Vec4::Zero();
          v[a] = sa;
          v[b] = sb;
          out.push_back(to_quaternion(v));
        }
      }
    }
  }
  return out;
}

std::vector<HeightChart> coarse_charts(const SearchConfig& config) {
  auto quats = cell24();
  if (config.dual_cell) {
    const auto dual = dual_cell24();
    quats.insert(quats.end(), dual.begin(), dual.end());
  }
  std::vector<HeightChart> out;
  for (const auto& q : quats) {
    const auto r = Rotation4::from_quaternions(q, Quat::Identity());
    for (double l : config.lambdas) out.emplace_back(r, l);
  }
  out.insert(out.end(), config.warm_start.begin(), config.warm_start.end());
  return out;
}

HeightChart perturb_chart(const HeightChart& base, const Vec3& theta, double log_lambda) {
  const double angle = theta.norm();
  Quat q = Quat::Identity();
  if (angle > 0.0) {
    const Vec3 axis = theta / angle;
    q = Quat(std::cos(angle / 2), std::sin(angle / 2) * axis[0], std::sin(angle / 2) * axis[1],
             std::sin(angle / 2) * axis[2]);
  }
  const auto rot = Rotation4::from_quaternions(q, Quat::Identity()) * base.rotation();
  const double lambda = std::clamp(base.dilation() * std::exp(log_lambda),
                                   HeightChart::kMinDilation, HeightChart::kMaxDilation);
  return HeightChart(rot, lambda);
}

void TrunkennessReport::write_json(std::ostream& out) const {
  auto chart_json = [](const HeightChart& c) {
    nlohmann::json j;
    std::vector<double> m;
    for (int r = 0; r < 4; ++r) {
      for (int k = 0; k < 4; ++k) m.push_back(c.rotation().matrix()(r, k));
    }
    j["matrix"] = m;
    j["lambda"] = c.dilation();
    return j;
  };
  nlohmann::json j;
  j["field"] = field.describe();
  j["upper_bound"] = upper_bound;
  j["argmax_level"] = profile_at_best.argmax_level;
  j["best_chart"] = chart_json(best_chart);
  j["evaluations"] = evaluations;
  j["budget_exhausted"] = budget_exhausted;
  j["trace"] = nlohmann::json::array();
  for (const auto& e : trace) {
    auto entry = chart_json(e.chart);
    entry["value"] = e.value;
    j["trace"].push_back(entry);
  }
  out << j.dump(2) << "\n";
}

namespace {

bool same_chart(const HeightChart& a, const HeightChart& b) {
  return a.dilation() == b.dilation() &&
         (a.rotation().matrix() - b.rotation().matrix()).cwiseAbs().maxCoeff() < 1e-12;
}

}  // namespace

TrunkennessReport trunkenness_upper(const FieldSpec& field, const SearchConfig& config,
                                    Executor* pool) {
  config.validate();
  Executor& exec = pool ? *pool : Executor::shared();
  TrunkennessReport report;
  report.field = field;

  double best = std::numeric_limits<double>::infinity();
  auto record = [&](const HeightChart& chart, const FluxProfile& profile) {
    ++report.evaluations;
    if (profile.max_value < best) {
      best = profile.max_value;
      report.best_chart = chart;
      report.profile_at_best = profile;
    }
    report.trace.push_back({chart, profile.max_value, best});
  };

  const auto coarse = coarse_charts(config);
  std::vector<FluxProfile> profiles(coarse.size());
  exec.parallel_for(coarse.size(), [&](std::size_t i) {
    profiles[i] = flux_profile(field, coarse[i], config.n_levels, config.grid, &exec);
  });
  for (std::size_t i = 0; i < coarse.size(); ++i) record(coarse[i], profiles[i]);
  report.upper_bound = best;
  if (best == 0.0) return report;

  // Best distinct coarse charts seed the local refinement.
  std::vector<std::size_t> order(coarse.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return profiles[a].max_value < profiles[b].max_value;
  });
  std::vector<HeightChart> starts;
  for (std::size_t i : order) {
    if (static_cast<int>(starts.size()) >= config.refine_starts) break;
    const bool dup = std::any_of(starts.begin(), starts.end(),
                                 [&](const HeightChart& c) { return same_chart(c, coarse[i]); });
    if (!dup) starts.push_back(coarse[i]);
  }

  int remaining = config.refine_budget;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    const int share = remaining / static_cast<int>(starts.size() - s);
    if (share < 5) {
      report.budget_exhausted = true;
      break;
    }
    const HeightChart base = starts[s];
    auto objective = [&](const std::vector<double>& x) {
      const HeightChart chart = perturb_chart(base, Vec3(x[0], x[1], x[2]), x[3]);
      const auto profile = flux_profile(field, chart, config.n_levels, config.grid, &exec);
      record(chart, profile);
      return profile.max_value;
    };
    const auto result = nelder_mead(objective, {0.0, 0.0, 0.0, 0.0}, config.simplex_step, share,
                                    config.simplex_tolerance);
    remaining -= result.evaluations;
    if (!result.converged) report.budget_exhausted = true;
  }
  report.upper_bound = best;
  return report;
}

}  // namespace trunk
