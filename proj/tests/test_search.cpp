#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"
#include "trunkenness/chart_search.hpp"
#include "trunkenness/error.hpp"
#include "trunkenness/nelder_mead.hpp"

using namespace trunk;

TEST_CASE("Nelder-Mead minimizes smooth functions") {
  auto quad = [](const std::vector<double>& x) {
    return std::pow(x[0] - 1.0, 2) + 10 * std::pow(x[1] + 2.0, 2) + std::pow(x[2], 2);
  };
  const auto r = nelder_mead(quad, {0, 0, 0}, 0.5, 2000, 1e-6);
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.x[1] == doctest::Approx(-2.0).epsilon(1e-4));
  CHECK(r.value < 1e-8);

  auto rosen = [](const std::vector<double>& x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  const auto s = nelder_mead(rosen, {-1.2, 1.0}, 0.3, 5000, 1e-8);
  CHECK(s.x[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(s.x[1] == doctest::Approx(1.0).epsilon(1e-3));

  const auto capped = nelder_mead(rosen, {-1.2, 1.0}, 0.3, 20, 1e-12);
  CHECK_FALSE(capped.converged);
  CHECK(capped.evaluations <= 20);
  CHECK_THROWS_AS(nelder_mead(rosen, {}, 0.1, 100, 1e-3), InvalidArgument);
}

TEST_CASE("24-cell grids") {
  const auto c = cell24();
  const auto d = dual_cell24();
  CHECK(c.size() == 24);
  CHECK(d.size() == 24);
  std::set<std::tuple<double, double, double, double>> seen;
  for (const auto* set : {&c, &d}) {
    for (const auto& q : *set) {
      CHECK(q.norm() == doctest::Approx(1.0).epsilon(1e-15));
      seen.insert({q.w(), q.x(), q.y(), q.z()});
    }
  }
  CHECK(seen.size() == 48);
  SearchConfig config;
  CHECK(coarse_charts(config).size() == 120);
  CHECK(config.coarse_size() >= 32);
}

TEST_CASE("search configuration limits") {
  SearchConfig c;
  CHECK_NOTHROW(c.validate());
  c.refine_budget = 199;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = SearchConfig{};
  c.lambdas = {1.0};
  CHECK_THROWS_AS(c.validate(), InvalidArgument);  // 24 coarse charts
  c.dual_cell = true;
  CHECK_NOTHROW(c.validate());  // 48 charts
  c.lambdas = {0.01};
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("perturbed charts") {
  const HeightChart base(Rotation4::random(3), 2.0);
  const auto same = perturb_chart(base, Vec3::Zero(), 0.0);
  CHECK((same.rotation().matrix() - base.rotation().matrix()).norm() < 1e-15);
  const auto moved = perturb_chart(base, Vec3(0.1, 0, 0), std::log(2.0));
  CHECK(moved.dilation() == doctest::Approx(4.0));
  CHECK(perturb_chart(base, Vec3::Zero(), 10.0).dilation() == HeightChart::kMaxDilation);
}

TEST_CASE("trunkenness of Seifert(1,2)") {
  const auto r = trunkenness_upper(FieldSpec::seifert(1, 2), SearchConfig{});
  CHECK(r.upper_bound == doctest::Approx(2.0).epsilon(0.02));
  CHECK(r.upper_bound == r.profile_at_best.max_value);
  CHECK(r.trace.size() == static_cast<std::size_t>(r.evaluations));
  CHECK(r.evaluations >= 120 + 200 - 10);
  double best = 1e300;
  for (const auto& e : r.trace) {
    CHECK(r.upper_bound <= e.value);
    best = std::min(best, e.value);
    CHECK(e.best_so_far == best);
  }

  std::ostringstream out;
  r.write_json(out);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["upper_bound"].get<double>() == r.upper_bound);
  CHECK(j["best_chart"]["matrix"].size() == 16);
  CHECK(j["best_chart"].contains("lambda"));
  CHECK(j["trace"].size() == r.trace.size());
}

TEST_CASE("trunkenness of the zero field is 0") {
  const auto r = trunkenness_upper(FieldSpec::zero(), SearchConfig{});
  CHECK(r.upper_bound == 0.0);
  CHECK_FALSE(r.budget_exhausted);
}

TEST_CASE("trunkenness scales with the field and ignores rotations") {
  const double base = trunkenness_upper(FieldSpec::seifert(1, 2), SearchConfig{}).upper_bound;
  const double scaled =
      trunkenness_upper(FieldSpec::scaled(-3.0, FieldSpec::seifert(1, 2)), SearchConfig{}).upper_bound;
  CHECK(scaled == doctest::Approx(3.0 * base).epsilon(0.02));
  const double rotated =
      trunkenness_upper(FieldSpec::rotated(Rotation4::random(77), FieldSpec::seifert(1, 2)),
                        SearchConfig{})
          .upper_bound;
  CHECK(rotated == doctest::Approx(base).epsilon(0.02));
}

TEST_CASE("warm starts join the coarse grid") {
  SearchConfig c;
  c.warm_start = {HeightChart::swapped()};
  CHECK(coarse_charts(c).size() == 121);
  const auto r = trunkenness_upper(FieldSpec::seifert(3, 1), c);
  CHECK(r.upper_bound == doctest::Approx(2.0).epsilon(0.02));
}
