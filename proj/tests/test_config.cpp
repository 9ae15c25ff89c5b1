#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "trunkenness/config.hpp"
#include "trunkenness/error.hpp"
#include "trunkenness/experiment.hpp"

using namespace trunk;
namespace fs = std::filesystem;

namespace {

std::vector<ConfigIssue> issues_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("trunk_config_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("minimal document uses defaults") {
  const auto c = parse_config("[field]\ntype = seifert\nalpha = 1\nbeta = 2\n[task]\nname = trunkenness\n");
  CHECK(c == ExperimentConfig{});
  const auto empty = parse_config("");
  CHECK(empty == ExperimentConfig{});
}

TEST_CASE("comments, whitespace and lists") {
  const auto c = parse_config(
      "# leading comment\n"
      "[field]\n"
      "  type = tube   ; trailing comment\n"
      "radius = 0.05\n"
      "\n"
      "[task]\n"
      "name = asymptotic-trunk\n"
      "durations = 1, 2.5, 4\n"
      "lambdas = 1\n"
      "dual_cell = true\n");
  CHECK(c.field.type == "tube");
  CHECK(c.field.radius == 0.05);
  CHECK(c.task.task == Task::AsymptoticTrunk);
  CHECK(c.task.durations == std::vector<double>{1.0, 2.5, 4.0});
  CHECK(c.task.lambdas == std::vector<double>{1.0});
  CHECK(c.task.dual_cell);
}

TEST_CASE("negative alpha is rejected with its line") {
  const auto issues = issues_of("[field]\ntype = seifert\nalpha = -1\nbeta = 2\n");
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].line == 3);
  CHECK(issues[0].field == "alpha");
  CHECK(issues[0].message == "alpha must be positive");
}

TEST_CASE("unknown keys, sections and malformed lines") {
  auto issues = issues_of("[task]\ngamma = 3\n");
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].line == 2);
  CHECK(issues[0].field == "gamma");
  CHECK(issues[0].message.find("unknown key 'gamma'") == 0);

  issues = issues_of("[solver]\nx = 1\n");
  REQUIRE(!issues.empty());
  CHECK(issues[0].message == "unknown section [solver]");

  issues = issues_of("[field]\nalpha 2\n");
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].line == 2);

  issues = issues_of("[field]\nalpha = 1\nalpha = 2\n");
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].message == "duplicate key 'alpha'");

  issues = issues_of("alpha = 1\n");
  REQUIRE(issues.size() == 1);

  // Every problem is reported, not just the first.
  issues = issues_of("[field]\nalpha = -1\nbeta = x\n[task]\nname = nope\nlevel = 1\n");
  CHECK(issues.size() == 4);
}

TEST_CASE("cross-field checks") {
  CHECK(issues_of("[field]\ntype = tube\ncore = file\n").size() == 1);
  CHECK(issues_of("[task]\nname = linking\nknot = file\nknot_files = a.txt\n").size() == 1);
  CHECK(issues_of("[task]\ndurations = 1, 3, 2\n").size() == 1);
  CHECK(issues_of("[task]\nstart = 1, 0, 0\n").size() == 1);
  CHECK(issues_of("[task]\nbudget = 100\n").size() == 1);
  CHECK(issues_of("[task]\nepsilon = 0.1\n").size() == 1);
  CHECK(issues_of("[task]\nmc_samples = 10\n").size() == 1);
}

TEST_CASE("echo round-trips") {
  ExperimentConfig c;
  c.field.type = "tube";
  c.field.radius = 0.07;
  c.field.rotation_seed = 12345678901ULL;
  c.task.task = Task::Helicity;
  c.task.lambdas = {0.3, 1.0 / 3.0, 7.0};
  c.task.knot_files = {"a.txt", "b.txt"};
  c.task.start = {0.1, -0.2, 0.3, 0.4};
  c.task.compare_field = false;
  const auto text = echo_config(c);
  CHECK(parse_config(text) == c);
  CHECK(echo_config(parse_config(text)) == text);
  CHECK(parse_config(echo_config(ExperimentConfig{})) == ExperimentConfig{});
}

TEST_CASE("task names") {
  for (auto t : {Task::Flux, Task::Profile, Task::Trunkenness, Task::KnotTrunk, Task::Linking,
                 Task::Helicity, Task::AsymptoticTrunk, Task::PaperSuite}) {
    CHECK(parse_task(task_name(t)) == t);
  }
  CHECK_FALSE(parse_task("bogus").has_value());
}

TEST_CASE("builders") {
  ExperimentConfig c;
  c.task.chart = "swapped";
  CHECK(build_chart(c.task).rotation().matrix() == HeightChart::swapped().rotation().matrix());
  c.task.chart = "random";
  CHECK(build_chart(c.task).rotation().matrix() == build_chart(c.task).rotation().matrix());
  CHECK(build_closure(c.task) == Closure::Geodesic);
  c.task.closure = "chord";
  CHECK(build_closure(c.task) == Closure::ChartChord);
  const auto s = build_search(c.task);
  CHECK(s.refine_budget == 200);
  CHECK(s.coarse_size() == 120);
  CHECK(build_field(c.field).describe() == FieldSpec::seifert(1, 2).describe());
  c.field.type = "zero";
  CHECK(build_field(c.field).is_zero());
  c.field.core = "circle";
  c.field.circle_radius = 0.5;
  CHECK(build_core(c.field).size() == 512);
}

TEST_CASE("flux experiment writes reports") {
  const auto dir = scratch("flux");
  auto c = parse_config("[field]\nalpha = 1\nbeta = 2\n[task]\nname = flux\ngrid_u = 64\ngrid_v = 128\n");
  const auto outcome = run_experiment(c, dir.string());
  CHECK(outcome.passed);
  CHECK(outcome.summary.find("flux = 4.00") == 0);
  for (const char* f : {"report.json", "effective_config.ini", "summary.txt"}) {
    CHECK(fs::exists(dir / f));
  }
  CHECK(parse_config(slurp(dir / "effective_config.ini")) == c);
  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  for (const char* key : {"task", "config", "field", "flux", "level", "chart"}) {
    CHECK(report.contains(key));
  }
  CHECK(report["flux"].get<double>() == doctest::Approx(4.0).epsilon(1e-3));
  CHECK(slurp(dir / "summary.txt") == outcome.summary);
  fs::remove_all(dir);

  c.field.type = "zero";
  CHECK(run_experiment(c, dir.string()).summary.find("flux = 0\n") == 0);
  fs::remove_all(dir);
}

TEST_CASE("profile experiments are deterministic") {
  const auto a = scratch("profile_a"), b = scratch("profile_b");
  const auto c = parse_config("[task]\nname = profile\nchart = random\nseed = 5\ngrid_u = 32\ngrid_v = 64\n");
  run_experiment(c, a.string());
  run_experiment(c, b.string());
  const auto csv = slurp(a / "profile.csv");
  CHECK(csv.rfind("t,flux\n", 0) == 0);
  CHECK(csv == slurp(b / "profile.csv"));
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("knot trunk and linking experiments") {
  const auto dir = scratch("knots");
  auto c = parse_config("[task]\nname = knot-trunk\nknot_vertices = 1024\n");
  auto outcome = run_experiment(c, dir.string());
  CHECK(outcome.summary.find("trunk <= 4") == 0);
  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report.contains("knot_trunk"));
  CHECK(fs::exists(dir / "trace.csv"));
  fs::remove_all(dir);

  c = parse_config("[task]\nname = linking\nknot_vertices = 1024\n");
  outcome = run_experiment(c, dir.string());
  CHECK(outcome.summary.find("Lk = 6 (residual") == 0);
  fs::remove_all(dir);
}
