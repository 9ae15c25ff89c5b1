#include "trunkenness/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "trunkenness/error.hpp"
#include "trunkenness/flux.hpp"
#include "trunkenness/knot_invariants.hpp"
#include "trunkenness/paper_suite.hpp"

namespace trunk {

namespace {

using nlohmann::json;

std::string fixed(double v, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

class Output {
 public:
  explicit Output(std::string dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory '" + dir_ + "': " + ec.message());
  }

  void write(const std::string& name, const std::string& text) const {
    const auto path = (std::filesystem::path(dir_) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << text;
    if (!out) throw IoError("error while writing '" + path + "'");
  }

 private:
  std::string dir_;
};

std::vector<PLKnot> build_link(const TaskConfig& t) {
  if (t.knot == "file") {
    std::vector<PLKnot> link;
    for (const auto& f : t.knot_files) link.push_back(read_knot_file(f));
    return link;
  }
  if (t.knot == "cable") {
    return torus_cable(t.knot_p, t.knot_q, t.components, t.knot_ratio,
                       static_cast<std::size_t>(t.knot_vertices));
  }
  return {torus_knot(t.knot_p, t.knot_q, t.knot_ratio, static_cast<std::size_t>(t.knot_vertices))};
}

json chart_json(const HeightChart& c) {
  std::vector<double> m;
  for (int r = 0; r < 4; ++r) {
    for (int k = 0; k < 4; ++k) m.push_back(c.rotation().matrix()(r, k));
  }
  return {{"matrix", m}, {"lambda", c.dilation()}};
}

std::string profile_csv(const FluxProfile& p) {
  std::ostringstream out;
  p.write_csv(out);
  return out.str();
}

double step_for(const TaskConfig& t, const FieldSpec& field) {
  return t.step > 0.0 ? t.step : default_step(field);
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& config, const std::string& out_dir,
                                 Executor* pool) {
  Executor& exec = pool ? *pool : Executor::shared();
  const Output out(out_dir);
  const auto& t = config.task;
  json report;
  report["task"] = task_name(t.task);
  report["config"] = echo_config(config);
  std::ostringstream summary;
  ExperimentOutcome outcome;

  const bool needs_field = t.task != Task::KnotTrunk && t.task != Task::Linking &&
                           t.task != Task::PaperSuite;
  const FieldSpec field = needs_field ? build_field(config.field) : FieldSpec::zero();
  if (needs_field) report["field"] = field.describe();

  switch (t.task) {
    case Task::Flux: {
      const auto chart = build_chart(t);
      const double q = flux_quadrature(field, LevelSphere(chart, t.level), {t.grid_u, t.grid_v}, &exec);
      report["flux"] = q;
      report["level"] = t.level;
      report["chart"] = chart_json(chart);
      summary << "flux = " << (q == 0.0 ? std::string("0") : fixed(q, 6)) << "\n";
      if (t.mc_samples > 0) {
        const auto mc = flux_monte_carlo(field, chart, t.level, t.epsilon,
                                         static_cast<std::size_t>(t.mc_samples), t.seed,
                                         t.mc_substeps, &exec);
        report["monte_carlo"] = {{"estimate", mc.estimate}, {"std_error", mc.std_error},
                                 {"epsilon", t.epsilon}, {"samples", t.mc_samples}};
        summary << "monte carlo = " << fixed(mc.estimate, 4) << " +- " << fixed(mc.std_error, 4)
                << "\n";
      }
      break;
    }
    case Task::Profile: {
      const auto chart = build_chart(t);
      const auto p = flux_profile(field, chart, t.n_levels, {t.grid_u, t.grid_v}, &exec);
      report["max_value"] = p.max_value;
      report["argmax_level"] = p.argmax_level;
      report["chart"] = chart_json(chart);
      out.write("profile.csv", profile_csv(p));
      summary << "max flux = " << fixed(p.max_value, 6) << " at t = " << fixed(p.argmax_level, 5)
              << "\n";
      break;
    }
    case Task::Trunkenness: {
      auto search = build_search(t);
      if (config.field.type == "tube" && t.warm_start_core && config.field.rotation_seed == 0) {
        search.warm_start = {knot_trunk_upper({build_core(config.field)}, search, 64, &exec).best_chart};
      }
      const auto r = trunkenness_upper(field, search, &exec);
      std::ostringstream js;
      r.write_json(js);
      report["trunkenness"] = json::parse(js.str());
      report["upper_bound"] = r.upper_bound;
      out.write("profile.csv", profile_csv(r.profile_at_best));
      std::ostringstream trace;
      trace << "index,value,best\n" << std::setprecision(12);
      for (std::size_t i = 0; i < r.trace.size(); ++i) {
        trace << i << "," << r.trace[i].value << "," << r.trace[i].best_so_far << "\n";
      }
      out.write("trace.csv", trace.str());
      summary << "upper_bound ≈ " << fixed(r.upper_bound, 2) << "  (" << fixed(r.upper_bound, 6)
              << ", " << r.evaluations << " chart evaluations"
              << (r.budget_exhausted ? ", refinement budget exhausted" : "") << ")\n";
      break;
    }
    case Task::KnotTrunk: {
      const auto link = build_link(t);
      const auto r = knot_trunk_upper(link, build_search(t), 64, &exec);
      std::ostringstream js;
      r.write_json(js);
      report["knot_trunk"] = json::parse(js.str());
      std::ostringstream trace;
      trace << "index,value,best\n";
      for (std::size_t i = 0; i < r.trace.size(); ++i) {
        trace << i << "," << r.trace[i].value << "," << r.trace[i].best_so_far << "\n";
      }
      out.write("trace.csv", trace.str());
      summary << "trunk <= " << r.trunk_upper << " (" << link.size() << " component"
              << (link.size() == 1 ? "" : "s") << (r.degenerate ? ", degenerate" : "") << ")\n";
      break;
    }
    case Task::Linking: {
      PLKnot a, b;
      if (t.knot == "file") {
        a = read_knot_file(t.knot_files.at(0));
        b = read_knot_file(t.knot_files.at(1));
      } else {
        a = torus_knot(t.knot_p, t.knot_q, t.ratio_a, static_cast<std::size_t>(t.knot_vertices));
        b = torus_knot(t.knot_p, t.knot_q, t.ratio_b, static_cast<std::size_t>(t.knot_vertices));
      }
      const auto lk = linking_number(a, b, &exec);
      report["linking_number"] = lk.value;
      report["raw"] = lk.raw;
      report["residual"] = lk.residual;
      char res[32];
      std::snprintf(res, sizeof res, "%.1e", lk.residual);
      summary << "Lk = " << lk.value << " (residual " << res
              << (lk.residual <= 0.01 ? " <= 0.01" : "") << ")\n";
      break;
    }
    case Task::Helicity: {
      const auto h = asymptotic_helicity(field, t.pairs, t.duration, step_for(t, field), t.seed,
                                         build_closure(t), &exec);
      report["helicity"] = {{"estimate", h.estimate}, {"spread", h.spread}, {"pairs", t.pairs},
                            {"duration", t.duration}};
      std::ostringstream csv;
      csv << "pair,lk_over_t2\n" << std::setprecision(12);
      for (std::size_t i = 0; i < h.samples.size(); ++i) csv << i << "," << h.samples[i] << "\n";
      out.write("samples.csv", csv.str());
      summary << "helicity ≈ " << fixed(h.estimate, 4) << " (spread " << fixed(h.spread, 4)
              << ", " << t.pairs << " pairs)\n";
      break;
    }
    case Task::AsymptoticTrunk: {
      const auto& s = t.start;
      const auto r = asymptotic_trunk(field, PointS3(s[0], s[1], s[2], s[3]), t.durations,
                                      step_for(t, field), build_search(t), t.compare_field,
                                      build_closure(t), &exec);
      json points = json::array();
      std::ostringstream csv;
      csv << "t,trunk,trunk_over_t\n" << std::setprecision(12);
      for (const auto& p : r.points) {
        points.push_back({{"t", p.duration}, {"trunk", p.trunk}, {"normalized", p.normalized},
                          {"degenerate", p.degenerate}});
        csv << p.duration << "," << p.trunk << "," << p.normalized << "\n";
        summary << "t = " << p.duration << ": trunk " << p.trunk << ", trunk/t = "
                << fixed(p.normalized, 4) << "\n";
      }
      out.write("trace.csv", csv.str());
      report["points"] = points;
      if (r.field_trunkenness) {
        report["field_upper_bound"] = r.field_trunkenness->upper_bound;
        summary << "field trunkenness upper bound ≈ " << fixed(r.field_trunkenness->upper_bound, 4)
                << "\n";
      }
      break;
    }
    case Task::PaperSuite: {
      SuiteOptions options;
      options.seed = t.seed;
      json rows = json::array();
      const auto results = run_paper_suite(options, &exec);
      for (const auto& c : results) {
        rows.push_back({{"id", c.id}, {"title", c.title}, {"passed", c.passed},
                        {"detail", c.detail}, {"seconds", c.seconds}});
        summary << format_criterion(c) << "\n";
        outcome.passed &= c.passed;
      }
      report["criteria"] = rows;
      report["passed"] = outcome.passed;
      break;
    }
  }

  out.write("report.json", report.dump(2) + "\n");
  out.write("effective_config.ini", echo_config(config));
  outcome.summary = summary.str();
  out.write("summary.txt", outcome.summary);
  return outcome;
}

}  // namespace trunk
