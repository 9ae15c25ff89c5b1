#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "trunkenness/error.hpp"
#include "trunkenness/flow.hpp"
#include "trunkenness/knot_invariants.hpp"

using namespace trunk;

TEST_CASE("periodic Seifert orbits close") {
  const PointS3 p(0.3, 0.4, -0.5, std::sqrt(0.5));
  const auto path = integrate(FieldSpec::seifert(1, 1), p, 1.0, 1e-3);
  CHECK(path.samples.size() == 1001);
  CHECK((path.samples.back().coords() - p.coords()).norm() <= 1e-8);

  const PointS3 q(1, 0, 1, 0);  // |z1/z2| = 1
  const auto path23 = integrate(FieldSpec::seifert(2, 3), q, 1.0, 1e-3);
  CHECK((path23.samples.back().coords() - q.coords()).norm() <= 1e-7);
  for (const auto& s : path23.samples) CHECK(std::abs(s.coords().norm() - 1.0) <= 1e-10);
}

TEST_CASE("sample count and argument checks") {
  const PointS3 p(1, 0, 0, 0);
  CHECK(integrate(FieldSpec::seifert(0.1, 0.1), p, 0.25, 0.1).samples.size() == 3);
  CHECK(integrate(FieldSpec::seifert(1, 1), p, 0.0, 0.1).samples.size() == 1);
  CHECK_THROWS_AS(integrate(FieldSpec::seifert(1, 1), p, -1.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(integrate(FieldSpec::seifert(1, 1), p, 1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(integrate(FieldSpec::seifert(10, 10), p, 1.0, 0.01), StepTooLarge);
}

TEST_CASE("zero field orbits stay put and close to degenerate knots") {
  const PointS3 p(0.5, 0.5, 0.5, 0.5);
  const auto path = integrate(FieldSpec::zero(), p, 2.0, 0.01);
  for (const auto& s : path.samples) CHECK(s.coords() == p.coords());
  const auto k = close_orbit(path);
  CHECK(k.is_degenerate());
  CHECK(knot_trunk_fixed({k}, HeightChart::standard()) == 0);
}

TEST_CASE("RK4 converges with order four") {
  const PointS3 p(0.6, 0.0, 0.8, 0.0);
  std::vector<double> errs;
  for (double h : {4e-3, 2e-3, 1e-3}) {
    const auto path = integrate(FieldSpec::seifert(1, 1), p, 1.0, h);
    errs.push_back((path.samples.back().coords() - p.coords()).norm());
  }
  CHECK(errs[0] / errs[1] >= 12.0);
  CHECK(errs[1] / errs[2] >= 12.0);
}

TEST_CASE("Seifert flows are isometries and reversible") {
  const auto x = FieldSpec::seifert(2, 3);
  const auto pts = haar_sample(20, 4);
  std::vector<PointS3> moved;
  for (const auto& p : pts) moved.push_back(integrate(x, p, 0.7, 1e-3).samples.back());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    CHECK(std::abs(moved[i].dot(moved[i + 1]) - pts[i].dot(pts[i + 1])) <= 1e-8);
  }
  const auto back = FieldSpec::scaled(-1.0, x);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto r = integrate(back, moved[i], 0.7, 1e-3).samples.back();
    CHECK((r.coords() - pts[i].coords()).norm() <= 1e-7);
  }
}

TEST_CASE("orbit closure") {
  const PointS3 p(0.6, 0.0, 0.8, 0.0);
  const auto path = integrate(FieldSpec::seifert(2, 3), p, 1.0, 1e-3);
  const auto k = close_orbit(path);
  const auto pts = k.s3_points();
  // Periodic orbit: the endpoint returns to the start, the closing edge is short.
  CHECK(pts.size() >= 1000);
  CHECK(pts.size() <= 1001);
  CHECK((pts.back().coords() - pts.front().coords()).norm() <= 0.05);
  CHECK(knot_trunk_upper({k}, SearchConfig{}).trunk_upper == 4);

  // Half a great circle closed by a geodesic: an unknot.
  const auto half = orbit_knot(FieldSpec::seifert(1, 1), PointS3(1, 0, 0, 0), 0.5, 1e-3);
  CHECK(knot_trunk_upper({half}, SearchConfig{}).trunk_upper == 2);

  // Generic open orbit: no closing edge is longer than the mean orbit edge.
  const auto open = integrate(FieldSpec::seifert(1, 2), p, 0.3, 1e-3);
  const auto ko = close_orbit(open).s3_points();
  double mean = 0.0;
  for (std::size_t i = 0; i + 1 < open.samples.size(); ++i) {
    mean += (open.samples[i + 1].coords() - open.samples[i].coords()).norm();
  }
  mean /= static_cast<double>(open.samples.size() - 1);
  for (std::size_t i = open.samples.size() - 1; i < ko.size(); ++i) {
    const auto& a = ko[i];
    const auto& b = ko[(i + 1) % ko.size()];
    CHECK(a.distance(b) <= mean * (1 + 1e-9));
  }
}

TEST_CASE("antipodal closure is deterministic") {
  // Seifert(1,1) for half a period sends p to -p.
  const PointS3 p(0.6, 0.0, 0.8, 0.0);
  const auto a = orbit_knot(FieldSpec::seifert(1, 1), p, 0.5, 1e-3);
  const auto b = orbit_knot(FieldSpec::seifert(1, 1), p, 0.5, 1e-3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.s3_points()[i].coords() == b.s3_points()[i].coords());
  }
  CHECK(knot_trunk_upper({a}, SearchConfig{}).trunk_upper == 2);
  const auto c = orbit_knot(FieldSpec::seifert(1, 1), p, 0.5, 1e-3, Closure::ChartChord);
  CHECK(knot_trunk_upper({c}, SearchConfig{}).trunk_upper == 2);
}

TEST_CASE("crossing membership") {
  const auto chart = HeightChart::standard();
  const PointS3 on = from_chart(Vec3(1, 0, 0));  // level 1/2
  CHECK(crossing_membership(FieldSpec::seifert(1, 1), on, chart, 0.5, 0.01, 16));
  CHECK_FALSE(crossing_membership(FieldSpec::zero(), from_chart(Vec3(0.9, 0, 0)), chart, 0.5, 0.01, 16));
  CHECK_THROWS_AS(crossing_membership(FieldSpec::zero(), on, chart, 0.5, 0.01, 3), InvalidArgument);

  // Agreement with a 64x finer discretization on random points.
  const auto x = FieldSpec::seifert(1, 1);
  const auto pts = haar_sample(4000, 31);
  int agree = 0;
  for (const auto& p : pts) {
    agree += crossing_membership(x, p, chart, 0.5, 0.01, 16) ==
             crossing_membership(x, p, chart, 0.5, 0.01, 16 * 64);
  }
  CHECK(agree >= 0.99 * pts.size());
}

TEST_CASE("default steps respect the stability guard") {
  CHECK(default_step(FieldSpec::seifert(1, 8)) == doctest::Approx(1.25e-4));
  CHECK(default_step(FieldSpec::seifert(0.5, 0.5)) == doctest::Approx(1e-3));
  for (const auto& f : {FieldSpec::seifert(3, 7), FieldSpec::scaled(10, FieldSpec::seifert(1, 1))}) {
    CHECK(default_step(f) * f.speed_bound() <= 0.1);
  }
}

TEST_CASE("orbit export") {
  const auto path = integrate(FieldSpec::seifert(1, 2), PointS3(1, 0, 1, 0), 0.01, 1e-3);
  std::stringstream out;
  write_orbit(out, path);
  const std::string text = out.str();
  CHECK(text.find("# field seifert(1,2)") != std::string::npos);
  CHECK(text.find("# duration 0.01") != std::string::npos);
  const auto k = read_knot(out);
  CHECK(k.size() == path.samples.size());
}
