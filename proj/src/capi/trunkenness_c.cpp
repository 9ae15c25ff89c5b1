#include "trunkenness.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "trunkenness/chart_search.hpp"
#include "trunkenness/config.hpp"
#include "trunkenness/error.hpp"
#include "trunkenness/experiment.hpp"
#include "trunkenness/flow.hpp"
#include "trunkenness/flux.hpp"
#include "trunkenness/knot_invariants.hpp"
#include "trunkenness/paper_suite.hpp"

struct tk_field {
  trunk::FieldSpec spec;
};
struct tk_chart {
  trunk::HeightChart chart;
};
struct tk_knot {
  trunk::PLKnot knot;
};

namespace {

thread_local std::string last_error;

tk_status status_of(const trunk::Error& e) {
  const std::string kind = e.kind();
  if (kind == "InvalidArgument") return TK_ERR_INVALID_ARGUMENT;
  if (kind == "LevelOutOfRange") return TK_ERR_LEVEL_OUT_OF_RANGE;
  if (kind == "TubeNotEmbedded") return TK_ERR_TUBE_NOT_EMBEDDED;
  if (kind == "NotCoprime") return TK_ERR_NOT_COPRIME;
  if (kind == "DegenerateIntersection") return TK_ERR_DEGENERATE_INTERSECTION;
  if (kind == "StepTooLarge") return TK_ERR_STEP_TOO_LARGE;
  if (kind == "KnotsTooClose") return TK_ERR_KNOTS_TOO_CLOSE;
  if (kind == "NonIntegerLinking") return TK_ERR_NON_INTEGER_LINKING;
  if (kind == "IoError") return TK_ERR_IO;
  if (kind == "ConfigError") return TK_ERR_CONFIG;
  return TK_ERR_INTERNAL;
}

// Runs body, translating exceptions into status codes.
template <typename Body>
tk_status guarded(Body&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const trunk::ConfigError& e) {
    last_error.clear();
    for (const auto& issue : e.issues()) {
      if (!last_error.empty()) last_error += "\n";
      if (issue.line > 0) last_error += "line " + std::to_string(issue.line) + ": ";
      if (!issue.field.empty()) last_error += issue.field + ": ";
      last_error += issue.message;
    }
    return TK_ERR_CONFIG;
  } catch (const trunk::Error& e) {
    last_error = e.what();
    return status_of(e);
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return TK_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return TK_ERR_INTERNAL;
  }
}

tk_status null_argument(const char* name) {
  last_error = std::string(name) + " must not be NULL";
  return TK_ERR_INVALID_ARGUMENT;
}

#define TK_REQUIRE(ptr) \
  if (!(ptr)) return null_argument(#ptr)

trunk::Mat4 matrix_from(const double m[16]) {
  trunk::Mat4 out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out(r, c) = m[4 * r + c];
  }
  return out;
}

trunk::SearchConfig search_from(const tk_search_params* p) {
  trunk::SearchConfig s;
  if (p) {
    s.n_levels = p->n_levels;
    s.grid = {p->grid_u, p->grid_v};
    s.refine_budget = p->budget;
    s.refine_starts = p->starts;
    s.plateau_checks = p->plateau_checks;
    s.seed = p->seed;
  }
  return s;
}

std::vector<trunk::PLKnot> link_from(const tk_knot* const* link, size_t count) {
  std::vector<trunk::PLKnot> out;
  for (size_t i = 0; i < count; ++i) {
    if (!link[i]) throw trunk::InvalidArgument("link component " + std::to_string(i) + " is NULL");
    out.push_back(link[i]->knot);
  }
  return out;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* tk_status_name(tk_status status) {
  switch (status) {
    case TK_OK: return "Ok";
    case TK_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case TK_ERR_LEVEL_OUT_OF_RANGE: return "LevelOutOfRange";
    case TK_ERR_TUBE_NOT_EMBEDDED: return "TubeNotEmbedded";
    case TK_ERR_NOT_COPRIME: return "NotCoprime";
    case TK_ERR_DEGENERATE_INTERSECTION: return "DegenerateIntersection";
    case TK_ERR_STEP_TOO_LARGE: return "StepTooLarge";
    case TK_ERR_KNOTS_TOO_CLOSE: return "KnotsTooClose";
    case TK_ERR_NON_INTEGER_LINKING: return "NonIntegerLinking";
    case TK_ERR_IO: return "IoError";
    case TK_ERR_CONFIG: return "ConfigError";
    case TK_ERR_CRITERIA_FAILED: return "CriteriaFailed";
    case TK_ERR_INTERNAL: return "InternalError";
  }
  return "Unknown";
}

const char* tk_last_error(void) { return last_error.c_str(); }

const char* tk_version(void) { return "0.1.0"; }

tk_status tk_set_jobs(unsigned jobs) {
  return guarded([&] {
    if (jobs < 1) throw trunk::InvalidArgument("jobs must be at least 1");
    trunk::Executor::configure_shared(jobs);
    return TK_OK;
  });
}

tk_status tk_field_seifert(double alpha, double beta, tk_field** out) {
  TK_REQUIRE(out);
  return guarded([&] {
    *out = new tk_field{trunk::FieldSpec::seifert(alpha, beta)};
    return TK_OK;
  });
}

tk_status tk_field_zero(tk_field** out) {
  TK_REQUIRE(out);
  return guarded([&] {
    *out = new tk_field{trunk::FieldSpec::zero()};
    return TK_OK;
  });
}

tk_status tk_field_scaled(double factor, const tk_field* inner, tk_field** out) {
  TK_REQUIRE(inner);
  TK_REQUIRE(out);
  return guarded([&] {
    *out = new tk_field{trunk::FieldSpec::scaled(factor, inner->spec)};
    return TK_OK;
  });
}

tk_status tk_field_rotated(const double rotation[16], const tk_field* inner, tk_field** out) {
  TK_REQUIRE(rotation);
  TK_REQUIRE(inner);
  TK_REQUIRE(out);
  return guarded([&] {
    *out = new tk_field{
        trunk::FieldSpec::rotated(trunk::Rotation4(matrix_from(rotation)), inner->spec)};
    return TK_OK;
  });
}

tk_status tk_field_tube(const tk_knot* core, double radius, double flux, tk_tube_profile profile,
                        tk_field** out) {
  TK_REQUIRE(core);
  TK_REQUIRE(out);
  return guarded([&] {
    auto chart_core = core->knot.space() == trunk::PLKnot::Space::Chart
                          ? core->knot
                          : trunk::PLKnot::in_chart(core->knot.chart_points());
    const auto prof =
        profile == TK_PROFILE_BUMP ? trunk::TubeProfile::Bump : trunk::TubeProfile::Parabolic;
    *out = new tk_field{trunk::FieldSpec::tubes({trunk::TubeSpec{chart_core, radius, flux, prof}})};
    return TK_OK;
  });
}

void tk_field_free(tk_field* field) { delete field; }

tk_status tk_field_eval(const tk_field* field, const double point[4], double out[4]) {
  TK_REQUIRE(field);
  TK_REQUIRE(point);
  TK_REQUIRE(out);
  return guarded([&] {
    const auto v = field->spec(trunk::PointS3(point[0], point[1], point[2], point[3]));
    for (int i = 0; i < 4; ++i) out[i] = v[i];
    return TK_OK;
  });
}

tk_status tk_chart_create(const double rotation[16], double lambda, tk_chart** out) {
  TK_REQUIRE(rotation);
  TK_REQUIRE(out);
  return guarded([&] {
    *out = new tk_chart{trunk::HeightChart(trunk::Rotation4(matrix_from(rotation)), lambda)};
    return TK_OK;
  });
}

tk_status tk_chart_standard(tk_chart** out) {
  TK_REQUIRE(out);
  return guarded([&] {
    *out = new tk_chart{trunk::HeightChart::standard()};
    return TK_OK;
  });
}

tk_status tk_chart_swapped(tk_chart** out) {
  TK_REQUIRE(out);
  return guarded([&] {
    *out = new tk_chart{trunk::HeightChart::swapped()};
    return TK_OK;
  });
}

void tk_chart_free(tk_chart* chart) { delete chart; }

tk_status tk_chart_height(const tk_chart* chart, const double point[4], double* out) {
  TK_REQUIRE(chart);
  TK_REQUIRE(point);
  TK_REQUIRE(out);
  return guarded([&] {
    *out = trunk::chart_height(chart->chart, trunk::PointS3(point[0], point[1], point[2], point[3]));
    return TK_OK;
  });
}

tk_status tk_chart_params(const tk_chart* chart, double rotation[16], double* lambda) {
  TK_REQUIRE(chart);
  return guarded([&] {
    if (rotation) {
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) rotation[4 * r + c] = chart->chart.rotation().matrix()(r, c);
      }
    }
    if (lambda) *lambda = chart->chart.dilation();
    return TK_OK;
  });
}

tk_status tk_knot_torus(int p, int q, double ratio, size_t vertices, tk_knot** out) {
  TK_REQUIRE(out);
  return guarded([&] {
    *out = new tk_knot{trunk::torus_knot(p, q, ratio, vertices)};
    return TK_OK;
  });
}

tk_status tk_knot_from_points(const double* coords, size_t count, int dim, tk_knot** out) {
  TK_REQUIRE(coords);
  TK_REQUIRE(out);
  return guarded([&] {
    if (dim == 3) {
      std::vector<trunk::Vec3> pts;
      for (size_t i = 0; i < count; ++i) pts.emplace_back(coords[3 * i], coords[3 * i + 1], coords[3 * i + 2]);
      *out = new tk_knot{trunk::PLKnot::in_chart(std::move(pts))};
    } else if (dim == 4) {
      std::vector<trunk::PointS3> pts;
      for (size_t i = 0; i < count; ++i) {
        pts.emplace_back(coords[4 * i], coords[4 * i + 1], coords[4 * i + 2], coords[4 * i + 3]);
      }
      *out = new tk_knot{trunk::PLKnot::on_s3(std::move(pts))};
    } else {
      throw trunk::InvalidArgument("dim must be 3 or 4");
    }
    return TK_OK;
  });
}

tk_status tk_knot_read_file(const char* path, tk_knot** out) {
  TK_REQUIRE(path);
  TK_REQUIRE(out);
  return guarded([&] {
    *out = new tk_knot{trunk::read_knot_file(path)};
    return TK_OK;
  });
}

tk_status tk_knot_orbit(const tk_field* field, const double start[4], double duration,
                        double step, tk_knot** out) {
  TK_REQUIRE(field);
  TK_REQUIRE(start);
  TK_REQUIRE(out);
  return guarded([&] {
    const trunk::PointS3 p(start[0], start[1], start[2], start[3]);
    *out = new tk_knot{trunk::orbit_knot(field->spec, p, duration, step)};
    return TK_OK;
  });
}

void tk_knot_free(tk_knot* knot) { delete knot; }

size_t tk_knot_size(const tk_knot* knot) { return knot ? knot->knot.size() : 0; }

tk_status tk_flux_quadrature(const tk_field* field, const tk_chart* chart, double level,
                             int grid_u, int grid_v, double* out) {
  TK_REQUIRE(field);
  TK_REQUIRE(chart);
  TK_REQUIRE(out);
  return guarded([&] {
    *out = trunk::flux_quadrature(field->spec, trunk::LevelSphere(chart->chart, level),
                                  {grid_u, grid_v});
    return TK_OK;
  });
}

tk_status tk_flux_monte_carlo(const tk_field* field, const tk_chart* chart, double level,
                              double epsilon, size_t samples, uint64_t seed, double* estimate,
                              double* std_error) {
  TK_REQUIRE(field);
  TK_REQUIRE(chart);
  TK_REQUIRE(estimate);
  return guarded([&] {
    const auto r = trunk::flux_monte_carlo(field->spec, chart->chart, level, epsilon, samples, seed);
    *estimate = r.estimate;
    if (std_error) *std_error = r.std_error;
    return TK_OK;
  });
}

tk_status tk_flux_profile_max(const tk_field* field, const tk_chart* chart, int n_levels,
                              int grid_u, int grid_v, double* max_value, double* argmax_level) {
  TK_REQUIRE(field);
  TK_REQUIRE(chart);
  TK_REQUIRE(max_value);
  return guarded([&] {
    const auto p = trunk::flux_profile(field->spec, chart->chart, n_levels, {grid_u, grid_v});
    *max_value = p.max_value;
    if (argmax_level) *argmax_level = p.argmax_level;
    return TK_OK;
  });
}

void tk_search_params_default(tk_search_params* params) {
  if (!params) return;
  const trunk::SearchConfig s;
  params->n_levels = s.n_levels;
  params->grid_u = s.grid.nu;
  params->grid_v = s.grid.nv;
  params->budget = s.refine_budget;
  params->starts = s.refine_starts;
  params->plateau_checks = s.plateau_checks;
  params->seed = s.seed;
}

tk_status tk_trunkenness_upper(const tk_field* field, const tk_search_params* params,
                               double* upper_bound, tk_chart** best_chart) {
  TK_REQUIRE(field);
  TK_REQUIRE(upper_bound);
  return guarded([&] {
    const auto r = trunk::trunkenness_upper(field->spec, search_from(params));
    *upper_bound = r.upper_bound;
    if (best_chart) *best_chart = new tk_chart{r.best_chart};
    return TK_OK;
  });
}

tk_status tk_knot_trunk_fixed(const tk_knot* const* link, size_t count, const tk_chart* chart,
                              int* out) {
  TK_REQUIRE(link);
  TK_REQUIRE(chart);
  TK_REQUIRE(out);
  return guarded([&] {
    *out = trunk::knot_trunk_fixed(link_from(link, count), chart->chart);
    return TK_OK;
  });
}

tk_status tk_knot_trunk_upper(const tk_knot* const* link, size_t count,
                              const tk_search_params* params, int* trunk_out,
                              tk_chart** best_chart) {
  TK_REQUIRE(link);
  TK_REQUIRE(trunk_out);
  return guarded([&] {
    const auto r = trunk::knot_trunk_upper(link_from(link, count), search_from(params));
    *trunk_out = r.trunk_upper;
    if (best_chart) *best_chart = new tk_chart{r.best_chart};
    return TK_OK;
  });
}

tk_status tk_linking_number(const tk_knot* a, const tk_knot* b, long* value, double* raw) {
  TK_REQUIRE(a);
  TK_REQUIRE(b);
  TK_REQUIRE(value);
  return guarded([&] {
    const auto r = trunk::linking_number(a->knot, b->knot);
    *value = r.value;
    if (raw) *raw = r.raw;
    return TK_OK;
  });
}

tk_status tk_helicity(const tk_field* field, int pairs, double duration, double step,
                      uint64_t seed, double* estimate, double* spread) {
  TK_REQUIRE(field);
  TK_REQUIRE(estimate);
  return guarded([&] {
    const double h = step > 0.0 ? step : trunk::default_step(field->spec);
    const auto r = trunk::asymptotic_helicity(field->spec, pairs, duration, h, seed);
    *estimate = r.estimate;
    if (spread) *spread = r.spread;
    return TK_OK;
  });
}

tk_status tk_config_check(const char* text, char** echo) {
  TK_REQUIRE(text);
  return guarded([&] {
    const auto config = trunk::parse_config(text);
    if (echo) *echo = copy_string(trunk::echo_config(config));
    return TK_OK;
  });
}

tk_status tk_run_experiment(const char* config_text, const char* out_dir, const char* task,
                            int has_seed, uint64_t seed, char** summary) {
  TK_REQUIRE(config_text);
  TK_REQUIRE(out_dir);
  return guarded([&] {
    auto config = trunk::parse_config(config_text);
    if (task) {
      const auto t = trunk::parse_task(task);
      if (!t) {
        throw trunk::ConfigError({{0, "task", "unknown task '" + std::string(task) + "'"}});
      }
      config.task.task = *t;
    }
    if (has_seed) config.task.seed = seed;
    const auto outcome = trunk::run_experiment(config, out_dir);
    if (summary) *summary = copy_string(outcome.summary);
    if (!outcome.passed) {
      last_error = "some paper-suite criteria failed";
      return TK_ERR_CRITERIA_FAILED;
    }
    return TK_OK;
  });
}

tk_status tk_paper_suite(const int* ids, size_t count, uint64_t seed,
                         void (*on_line)(const char* line, int passed, void* user), void* user,
                         int* failures) {
  return guarded([&] {
    trunk::SuiteOptions options;
    options.seed = seed;
    if (ids) options.only.assign(ids, ids + count);
    int failed = 0;
    trunk::run_paper_suite(options, nullptr, [&](const trunk::CriterionResult& r) {
      if (!r.passed) ++failed;
      if (on_line) on_line(trunk::format_criterion(r).c_str(), r.passed ? 1 : 0, user);
    });
    if (failures) *failures = failed;
    return failed == 0 ? TK_OK : TK_ERR_CRITERIA_FAILED;
  });
}

void tk_string_free(char* text) { std::free(text); }

}  // extern "C"
