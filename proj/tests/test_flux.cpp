#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "trunkenness/error.hpp"
#include "trunkenness/flux.hpp"

using namespace trunk;

namespace {
const LevelSphere kMiddle(HeightChart::standard(), 0.5);
}

TEST_CASE("Seifert flux through the middle sphere is 2 beta") {
  for (auto [a, b] : {std::pair{1.0, 1.0}, {1.0, 2.0}, {2.0, 3.0}, {5.0, 0.5}}) {
    const double v = flux_quadrature(FieldSpec::seifert(a, b), kMiddle, {128, 256});
    CHECK(v == doctest::Approx(2 * b).epsilon(0.01));
  }
  // The swapped chart measures the other rotation rate.
  const LevelSphere swapped(HeightChart::swapped(), 0.5);
  CHECK(flux_quadrature(FieldSpec::seifert(2, 3), swapped, {128, 256}) ==
        doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("zero field and grid checks") {
  CHECK(flux_quadrature(FieldSpec::zero(), kMiddle) == 0.0);
  CHECK(flux_quadrature(FieldSpec::scaled(0.0, FieldSpec::seifert(1, 1)), kMiddle) == 0.0);
  CHECK_THROWS_AS(flux_quadrature(FieldSpec::zero(), kMiddle, {7, 64}), InvalidArgument);
  CHECK_THROWS_AS(flux_quadrature(FieldSpec::zero(), kMiddle, {64, 4}), InvalidArgument);
}

TEST_CASE("flux is order-1 homogeneous and orientation blind") {
  const auto x = FieldSpec::seifert(2, 3);
  std::mt19937_64 rng(3);
  for (double lambda : {-4.0, -0.5, 0.25, 3.0}) {
    const LevelSphere s(HeightChart(Rotation4::random(rng()), 1.3), 0.37);
    const double base = flux_quadrature(x, s, {64, 128});
    CHECK(std::abs(flux_quadrature(FieldSpec::scaled(lambda, x), s, {64, 128}) -
                   std::abs(lambda) * base) <= 1e-12 * std::abs(lambda) * base);
    CHECK(flux_quadrature(x, s.reversed(), {64, 128}) == base);
  }
}

TEST_CASE("quadrature converges under refinement") {
  const LevelSphere s(HeightChart(Rotation4::random(8), 0.7), 0.62);
  const auto x = FieldSpec::seifert(1, 2);
  const double fine = flux_quadrature(x, s, {512, 1024});
  const double mid = flux_quadrature(x, s, {128, 256});
  const double coarse = flux_quadrature(x, s, {32, 64});
  CHECK(std::abs(mid - fine) < std::abs(coarse - fine));
  CHECK(std::abs(mid - fine) <= 1e-3 * fine);
}

TEST_CASE("Monte-Carlo flux") {
  const auto mc = flux_monte_carlo(FieldSpec::seifert(1, 1), HeightChart::standard(), 0.5, 0.01,
                                   100000, 5);
  CHECK(std::abs(mc.estimate - 2.0) <= 3 * mc.std_error + 0.05);
  CHECK(mc.std_error > 0.0);

  const auto zero = flux_monte_carlo(FieldSpec::zero(), HeightChart::standard(), 0.5, 0.01, 10000, 5);
  CHECK(zero.estimate <= 1.0 / 10000 / 0.01);

  const auto again = flux_monte_carlo(FieldSpec::seifert(1, 1), HeightChart::standard(), 0.5,
                                      0.01, 100000, 5);
  CHECK(again.estimate == mc.estimate);

  CHECK_THROWS_AS(flux_monte_carlo(FieldSpec::zero(), HeightChart::standard(), 0.5, 0.1, 1000, 1),
                  InvalidArgument);
  CHECK_THROWS_AS(flux_monte_carlo(FieldSpec::zero(), HeightChart::standard(), 0.5, 0.01, 999, 1),
                  InvalidArgument);
}

TEST_CASE("Monte-Carlo agrees with quadrature on random configurations") {
  const auto x = FieldSpec::seifert(2, 3);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uni(0.1, 0.9);
  for (int i = 0; i < 10; ++i) {
    const HeightChart chart(Rotation4::random(rng()));
    const double t = uni(rng);
    const double q = flux_quadrature(x, LevelSphere(chart, t), {128, 256});
    const auto mc = flux_monte_carlo(x, chart, t, 0.01, 100000, rng());
    CHECK(std::abs(q - mc.estimate) <= 3 * mc.std_error + 0.05);
  }
}

TEST_CASE("flux profile of Seifert(1,2) peaks at the middle level") {
  const auto p = flux_profile(FieldSpec::seifert(1, 2), HeightChart::standard(), 32, {128, 256});
  CHECK(p.argmax_level == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(p.max_value == doctest::Approx(4.0).epsilon(0.01));
  CHECK(std::is_sorted(p.levels.begin(), p.levels.end()));
  CHECK(p.levels.size() == p.values.size());
  CHECK(p.levels.size() > 32);  // golden-section evaluations are kept
  CHECK(*std::max_element(p.values.begin(), p.values.end()) == p.max_value);
  const auto at = std::find(p.levels.begin(), p.levels.end(), p.argmax_level);
  REQUIRE(at != p.levels.end());
  CHECK(p.values[at - p.levels.begin()] == p.max_value);
  for (double v : p.values) CHECK(v >= 0.0);
  CHECK(p.levels.front() > kLevelFloor);
  CHECK(p.levels.back() < 1 - kLevelFloor);
}

TEST_CASE("zero field profile and level count check") {
  const auto p = flux_profile(FieldSpec::zero(), HeightChart::standard(), 16, {16, 32});
  for (double v : p.values) CHECK(v == 0.0);
  CHECK(p.max_value == 0.0);
  CHECK_THROWS_AS(flux_profile(FieldSpec::zero(), HeightChart::standard(), 15), InvalidArgument);
}

TEST_CASE("flux decays at the point levels") {
  const auto x = FieldSpec::seifert(2, 3);
  const HeightChart chart(Rotation4::random(6), 1.5);
  for (double t : {kLevelFloor * (1 + 1e-6), 1 - kLevelFloor * (1 + 1e-6)}) {
    const LevelSphere s(chart, t);
    const double bound = x.speed_bound() * s.area() / kS3Volume;
    CHECK(flux_quadrature(x, s, {64, 128}) <= bound * (1 + 1e-3));
    CHECK(bound < 1e-3);
  }
}

TEST_CASE("argmax is stable under level refinement") {
  for (const auto& x : {FieldSpec::seifert(1, 2), FieldSpec::seifert(2, 3)}) {
    const HeightChart chart(Rotation4::random(10), 2.0);
    const double a = flux_profile(x, chart, 64, {64, 128}).max_value;
    const double b = flux_profile(x, chart, 128, {64, 128}).max_value;
    CHECK(std::abs(a - b) <= 0.005 * b);
  }
}

TEST_CASE("horizontal unknot tube has no flux through the centred spheres") {
  const auto f = FieldSpec::tubes({TubeSpec{chart_circle(1.0), 0.1, 1.0, TubeProfile::Parabolic}});
  const auto p = flux_profile(f, HeightChart::standard(), 32, {128, 256});
  CHECK(p.max_value <= 0.02);
}

TEST_CASE("profile CSV") {
  const auto p = flux_profile(FieldSpec::seifert(1, 1), HeightChart::standard(), 16, {16, 32});
  std::ostringstream out;
  p.write_csv(out);
  const std::string csv = out.str();
  CHECK(csv.rfind("t,flux\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == p.levels.size() + 1);
}
