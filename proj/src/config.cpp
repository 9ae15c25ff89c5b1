#include "trunkenness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "trunkenness/error.hpp"

namespace trunk {

namespace {

constexpr std::pair<Task, const char*> kTaskNames[] = {
    {Task::Flux, "flux"},
    {Task::Profile, "profile"},
    {Task::Trunkenness, "trunkenness"},
    {Task::KnotTrunk, "knot-trunk"},
    {Task::Linking, "linking"},
    {Task::Helicity, "helicity"},
    {Task::AsymptoticTrunk, "asymptotic-trunk"},
    {Task::PaperSuite, "paper-suite"},
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool parse_double(const std::string& s, double& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

template <typename Int>
bool parse_int(const std::string& s, Int& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// A key's setter returns an empty string on success, else the diagnostic.
struct Key {
  std::string section;
  std::string name;
  std::function<std::string(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

using Check = std::function<std::string(double)>;

Check positive(const std::string& name) {
  return [name](double v) { return v > 0.0 ? "" : name + " must be positive"; };
}
Check at_least(const std::string& name, double lo) {
  return [=](double v) {
    return v >= lo ? "" : name + " must be at least " + format_double(lo);
  };
}
Check within(const std::string& name, double lo, double hi) {
  return [=](double v) {
    return v >= lo && v <= hi
               ? ""
               : name + " must lie in [" + format_double(lo) + ", " + format_double(hi) + "]";
  };
}
Check any_value() {
  return [](double) { return std::string(); };
}

template <typename Access>
Key real_key(std::string section, std::string name, Access access, Check check) {
  return {section, name,
          [=](ExperimentConfig& c, const std::string& text) -> std::string {
            double v;
            if (!parse_double(text, v)) return name + " must be a finite number";
            if (auto err = check(v); !err.empty()) return err;
            access(c) = v;
            return {};
          },
          [=](const ExperimentConfig& c) {
            return format_double(access(const_cast<ExperimentConfig&>(c)));
          }};
}

template <typename Access>
Key int_key(std::string section, std::string name, Access access, Check check) {
  return {section, name,
          [=](ExperimentConfig& c, const std::string& text) -> std::string {
            long long v;
            if (!parse_int(text, v)) return name + " must be an integer";
            if (auto err = check(static_cast<double>(v)); !err.empty()) return err;
            access(c) = static_cast<std::remove_reference_t<decltype(access(c))>>(v);
            return {};
          },
          [=](const ExperimentConfig& c) {
            return std::to_string(access(const_cast<ExperimentConfig&>(c)));
          }};
}

template <typename Access>
Key seed_key(std::string section, std::string name, Access access) {
  return {section, name,
          [=](ExperimentConfig& c, const std::string& text) -> std::string {
            std::uint64_t v;
            if (!parse_int(text, v)) return name + " must be a non-negative integer";
            access(c) = v;
            return {};
          },
          [=](const ExperimentConfig& c) {
            return std::to_string(access(const_cast<ExperimentConfig&>(c)));
          }};
}

template <typename Access>
Key bool_key(std::string section, std::string name, Access access) {
  return {section, name,
          [=](ExperimentConfig& c, const std::string& text) -> std::string {
            if (text == "true" || text == "1") access(c) = true;
            else if (text == "false" || text == "0") access(c) = false;
            else return name + " must be true or false";
            return {};
          },
          [=](const ExperimentConfig& c) {
            return std::string(access(const_cast<ExperimentConfig&>(c)) ? "true" : "false");
          }};
}

template <typename Access>
Key choice_key(std::string section, std::string name, Access access,
               std::vector<std::string> choices) {
  return {section, name,
          [=](ExperimentConfig& c, const std::string& text) -> std::string {
            if (std::find(choices.begin(), choices.end(), text) == choices.end()) {
              std::string all;
              for (const auto& ch : choices) all += (all.empty() ? "" : ", ") + ch;
              return name + " must be one of: " + all;
            }
            access(c) = text;
            return {};
          },
          [=](const ExperimentConfig& c) { return access(const_cast<ExperimentConfig&>(c)); }};
}

template <typename Access>
Key text_key(std::string section, std::string name, Access access) {
  return {section, name,
          [=](ExperimentConfig& c, const std::string& text) -> std::string {
            access(c) = text;
            return {};
          },
          [=](const ExperimentConfig& c) { return access(const_cast<ExperimentConfig&>(c)); }};
}

template <typename Access>
Key real_list_key(std::string section, std::string name, Access access, Check check,
                  std::size_t min_items) {
  return {section, name,
          [=](ExperimentConfig& c, const std::string& text) -> std::string {
            std::vector<double> values;
            for (const auto& item : split_list(text)) {
              double v;
              if (!parse_double(item, v)) return name + " must be a comma-separated list of numbers";
              if (auto err = check(v); !err.empty()) return err;
              values.push_back(v);
            }
            if (values.size() < min_items) {
              return name + " needs at least " + std::to_string(min_items) + " entries";
            }
            access(c) = values;
            return {};
          },
          [=](const ExperimentConfig& c) {
            std::string out;
            for (double v : access(const_cast<ExperimentConfig&>(c))) {
              out += (out.empty() ? "" : ", ") + format_double(v);
            }
            return out;
          }};
}

template <typename Access>
Key text_list_key(std::string section, std::string name, Access access) {
  return {section, name,
          [=](ExperimentConfig& c, const std::string& text) -> std::string {
            access(c) = split_list(text);
            return {};
          },
          [=](const ExperimentConfig& c) {
            std::string out;
            for (const auto& v : access(const_cast<ExperimentConfig&>(c))) {
              out += (out.empty() ? "" : ", ") + v;
            }
            return out;
          }};
}

#define F(member) [](ExperimentConfig& c) -> auto& { return c.field.member; }
#define T(member) [](ExperimentConfig& c) -> auto& { return c.task.member; }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    k.push_back(choice_key("field", "type", F(type), {"seifert", "tube", "zero"}));
    k.push_back(real_key("field", "alpha", F(alpha), positive("alpha")));
    k.push_back(real_key("field", "beta", F(beta), positive("beta")));
    k.push_back(real_key("field", "scale", F(scale), any_value()));
    k.push_back(seed_key("field", "rotation_seed", F(rotation_seed)));
    k.push_back(choice_key("field", "core", F(core), {"torus", "circle", "file"}));
    k.push_back(int_key("field", "core_p", F(core_p), at_least("core_p", 1)));
    k.push_back(int_key("field", "core_q", F(core_q), at_least("core_q", 1)));
    k.push_back(real_key("field", "core_ratio", F(core_ratio), positive("core_ratio")));
    k.push_back(real_key("field", "circle_radius", F(circle_radius), positive("circle_radius")));
    k.push_back(text_key("field", "core_file", F(core_file)));
    k.push_back(int_key("field", "core_vertices", F(core_vertices), at_least("core_vertices", 16)));
    k.push_back(real_key("field", "radius", F(radius), positive("radius")));
    k.push_back(real_key("field", "flux", F(flux), any_value()));
    k.push_back(choice_key("field", "profile", F(profile), {"parabolic", "bump"}));

    k.push_back({"task", "name",
                 [](ExperimentConfig& c, const std::string& text) -> std::string {
                   const auto t = parse_task(text);
                   if (!t) return "unknown task '" + text + "'";
                   c.task.task = *t;
                   return {};
                 },
                 [](const ExperimentConfig& c) { return std::string(task_name(c.task.task)); }});
    k.push_back(seed_key("task", "seed", T(seed)));
    k.push_back(choice_key("task", "chart", T(chart), {"standard", "swapped", "random"}));
    k.push_back(real_key("task", "level", T(level), within("level", kLevelFloor, 1.0 - kLevelFloor)));
    k.push_back(int_key("task", "grid_u", T(grid_u), at_least("grid_u", 8)));
    k.push_back(int_key("task", "grid_v", T(grid_v), at_least("grid_v", 8)));
    k.push_back(int_key("task", "mc_samples", T(mc_samples), [](double v) {
      return v == 0.0 || v >= 1000.0 ? "" : "mc_samples must be 0 or at least 1000";
    }));
    k.push_back(real_key("task", "epsilon", T(epsilon), within("epsilon", 1e-4, 0.05)));
    k.push_back(int_key("task", "mc_substeps", T(mc_substeps), at_least("mc_substeps", 4)));
    k.push_back(int_key("task", "n_levels", T(n_levels), at_least("n_levels", 16)));
    k.push_back(int_key("task", "search_grid_u", T(search_grid_u), at_least("search_grid_u", 8)));
    k.push_back(int_key("task", "search_grid_v", T(search_grid_v), at_least("search_grid_v", 8)));
    k.push_back(real_list_key("task", "lambdas", T(lambdas),
                              within("lambdas", HeightChart::kMinDilation, HeightChart::kMaxDilation), 1));
    k.push_back(bool_key("task", "dual_cell", T(dual_cell)));
    k.push_back(int_key("task", "budget", T(budget), at_least("budget", 200)));
    k.push_back(int_key("task", "starts", T(starts), at_least("starts", 1)));
    k.push_back(real_key("task", "simplex_tolerance", T(simplex_tolerance), positive("simplex_tolerance")));
    k.push_back(int_key("task", "plateau_checks", T(plateau_checks), at_least("plateau_checks", 1)));
    k.push_back(bool_key("task", "warm_start_core", T(warm_start_core)));
    k.push_back(choice_key("task", "knot", T(knot), {"torus", "cable", "file"}));
    k.push_back(int_key("task", "knot_p", T(knot_p), at_least("knot_p", 1)));
    k.push_back(int_key("task", "knot_q", T(knot_q), at_least("knot_q", 1)));
    k.push_back(int_key("task", "components", T(components), at_least("components", 1)));
    k.push_back(real_key("task", "knot_ratio", T(knot_ratio), positive("knot_ratio")));
    k.push_back(int_key("task", "knot_vertices", T(knot_vertices), at_least("knot_vertices", 3)));
    k.push_back(text_list_key("task", "knot_files", T(knot_files)));
    k.push_back(real_key("task", "ratio_a", T(ratio_a), positive("ratio_a")));
    k.push_back(real_key("task", "ratio_b", T(ratio_b), positive("ratio_b")));
    k.push_back(int_key("task", "pairs", T(pairs), at_least("pairs", 4)));
    k.push_back(real_key("task", "duration", T(duration), at_least("duration", 1.0)));
    k.push_back(real_key("task", "step", T(step), [](double v) {
      return v >= 0.0 ? "" : "step must be 0 (automatic) or positive";
    }));
    k.push_back(real_list_key("task", "durations", T(durations), positive("durations"), 3));
    k.push_back(real_list_key("task", "start", T(start), any_value(), 4));
    k.push_back(bool_key("task", "compare_field", T(compare_field)));
    k.push_back(choice_key("task", "closure", T(closure), {"geodesic", "chord"}));
    return k;
  }();
  return table;
}

#undef F
#undef T

}  // namespace

const char* task_name(Task task) {
  for (const auto& [t, name] : kTaskNames) {
    if (t == task) return name;
  }
  return "unknown";
}

std::optional<Task> parse_task(const std::string& name) {
  for (const auto& [t, n] : kTaskNames) {
    if (name == n) return t;
  }
  return std::nullopt;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::vector<ConfigIssue> issues;
  std::set<std::string> seen;
  std::map<std::string, int> key_line;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find_first_of("#;"); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back({line_no, "", "malformed section header '" + line + "'"});
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "field" && section != "task") {
        issues.push_back({line_no, section, "unknown section [" + section + "]"});
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back({line_no, "", "expected key = value"});
      continue;
    }
    const std::string name = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      issues.push_back({line_no, name, "key '" + name + "' appears before any section"});
      continue;
    }
    const auto& table = keys();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Key& k) {
      return k.section == section && k.name == name;
    });
    if (it == table.end()) {
      issues.push_back({line_no, name, "unknown key '" + name + "' in [" + section + "]"});
      continue;
    }
    if (!seen.insert(section + "." + name).second) {
      issues.push_back({line_no, name, "duplicate key '" + name + "'"});
      continue;
    }
    key_line[name] = line_no;
    if (auto err = it->set(config, value); !err.empty()) issues.push_back({line_no, name, err});
  }

  // Cross-field checks.
  const auto& f = config.field;
  if (f.type == "tube" && f.core == "file" && f.core_file.empty()) {
    issues.push_back({key_line["core"], "core_file", "core = file requires core_file"});
  }
  if (config.task.knot == "file" && config.task.knot_files.empty() &&
      (config.task.task == Task::KnotTrunk || config.task.task == Task::Linking)) {
    issues.push_back({key_line["knot"], "knot_files", "knot = file requires knot_files"});
  }
  if (config.task.task == Task::Linking && config.task.knot == "file" &&
      config.task.knot_files.size() != 2 && !config.task.knot_files.empty()) {
    issues.push_back({key_line["knot_files"], "knot_files", "linking needs exactly two knot files"});
  }
  if (config.task.start.size() != 4) {
    issues.push_back({key_line["start"], "start", "start must have 4 coordinates"});
  }
  for (std::size_t i = 1; i < config.task.durations.size(); ++i) {
    if (!(config.task.durations[i] > config.task.durations[i - 1])) {
      issues.push_back({key_line["durations"], "durations", "durations must be increasing"});
      break;
    }
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return config;
}

std::string echo_config(const ExperimentConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const auto& k : keys()) {
    if (k.section != section) {
      if (!section.empty()) out << "\n";
      section = k.section;
      out << "[" << section << "]\n";
    }
    out << k.name << " = " << k.get(config) << "\n";
  }
  return out.str();
}

PLKnot build_core(const FieldConfig& c) {
  if (c.core == "circle") return chart_circle(c.circle_radius, static_cast<std::size_t>(c.core_vertices));
  if (c.core == "file") {
    const auto k = read_knot_file(c.core_file);
    return k.space() == PLKnot::Space::Chart ? k : PLKnot::in_chart(k.chart_points());
  }
  const auto k = torus_knot(c.core_p, c.core_q, c.core_ratio, static_cast<std::size_t>(c.core_vertices));
  return PLKnot::in_chart(k.chart_points());
}

FieldSpec build_field(const FieldConfig& c) {
  FieldSpec field;
  if (c.type == "seifert") {
    field = FieldSpec::seifert(c.alpha, c.beta);
  } else if (c.type == "tube") {
    const auto profile = c.profile == "bump" ? TubeProfile::Bump : TubeProfile::Parabolic;
    field = FieldSpec::tubes({TubeSpec{build_core(c), c.radius, c.flux, profile}});
  }
  if (c.scale != 1.0) field = FieldSpec::scaled(c.scale, field);
  if (c.rotation_seed != 0) field = FieldSpec::rotated(Rotation4::random(c.rotation_seed), field);
  return field;
}

SearchConfig build_search(const TaskConfig& c) {
  SearchConfig s;
  s.n_levels = c.n_levels;
  s.grid = {c.search_grid_u, c.search_grid_v};
  s.lambdas = c.lambdas;
  s.dual_cell = c.dual_cell;
  s.refine_budget = c.budget;
  s.refine_starts = c.starts;
  s.simplex_tolerance = c.simplex_tolerance;
  s.plateau_checks = c.plateau_checks;
  s.seed = c.seed;
  return s;
}

HeightChart build_chart(const TaskConfig& c) {
  if (c.chart == "swapped") return HeightChart::swapped();
  if (c.chart == "random") return HeightChart(Rotation4::random(c.seed));
  return HeightChart::standard();
}

Closure build_closure(const TaskConfig& c) {
  return c.closure == "chord" ? Closure::ChartChord : Closure::Geodesic;
}

}  // namespace trunk
