#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "support.hpp"
#include "trunkenness/error.hpp"
#include "trunkenness/geometry.hpp"

using namespace trunk;

namespace {

PointS3 with_chart_radius(double r) {
  // A point whose stereographic image has norm r, on the x axis.
  return from_chart(Vec3(r, 0.0, 0.0));
}

}  // namespace

TEST_CASE("standard height at the foci and on the unit chart sphere") {
  CHECK(standard_height(PointS3::origin()) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(standard_height(PointS3::infinity()) == 1.0);
  CHECK(standard_height(with_chart_radius(1.0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(standard_height(from_chart(Vec3(0.3, -0.4, 0.0))) ==
        doctest::Approx(1.0 - 1.0 / 1.25).epsilon(1e-14));
}

TEST_CASE("chart height examples") {
  CHECK(chart_height(HeightChart::standard(), PointS3::origin()) == doctest::Approx(0.0));
  const HeightChart dilated(Rotation4(), 2.0);
  CHECK(chart_height(dilated, with_chart_radius(0.5)) == doctest::Approx(0.5).epsilon(1e-14));
  const PointS3 e1(1, 0, 0, 0);
  CHECK(chart_height(HeightChart::swapped(), e1) == standard_height(PointS3(0, 0, 1, 0)));
}

TEST_CASE("dilation range is enforced") {
  CHECK_THROWS_AS(HeightChart(Rotation4(), 0.01), InvalidArgument);
  CHECK_THROWS_AS(HeightChart(Rotation4(), 25.0), InvalidArgument);
  CHECK_NOTHROW(HeightChart(Rotation4(), 0.05));
  CHECK_NOTHROW(HeightChart(Rotation4(), 20.0));
}

TEST_CASE("points are normalized and zero vectors rejected") {
  const PointS3 p(3, 0, 4, 0);
  CHECK(p.coords().norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p[0] == doctest::Approx(0.6));
  CHECK_THROWS_AS(PointS3(0, 0, 0, 0), InvalidArgument);
  CHECK(PointS3::origin().distance(PointS3::infinity()) == doctest::Approx(kPi));
}

TEST_CASE("rotation validation and construction") {
  Mat4 m = Mat4::Identity();
  m(0, 0) = -1.0;  // orthogonal, det -1
  CHECK_THROWS_AS(Rotation4{m}, InvalidArgument);
  Mat4 s = 1.01 * Mat4::Identity();
  CHECK_THROWS_AS(Rotation4{s}, InvalidArgument);

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = Rotation4::random(seed);
    const Mat4& a = r.matrix();
    CHECK((a.transpose() * a - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(a.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(Rotation4::random(5).matrix() == Rotation4::random(5).matrix());

  const auto sw = Rotation4::swap();
  const auto q = sw.apply(PointS3(1, 2, 3, 4));
  CHECK((q.coords() - PointS3(3, 4, 1, 2).coords()).norm() < 1e-15);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto p = haar_sample(1, 100 + seed).front();
    const auto g = Rotation4::sending_to_origin(p);
    CHECK((g.apply(p).coords() - PointS3::origin().coords()).norm() < 1e-12);
  }
}

TEST_CASE("quaternion pair action is p -> a p conj(b)") {
  const Quat a = Quat(1, 2, 3, 4).normalized();
  const Quat b = Quat(-2, 1, 0.5, 3).normalized();
  const Vec4 p = PointS3(0.3, -0.1, 0.7, 0.2).coords();
  const Vec4 expect = from_quaternion(a * to_quaternion(p) * b.conjugate());
  const Vec4 got = Rotation4::from_quaternions(a, b).apply(p);
  CHECK((expect - got).norm() < 1e-14);
}

TEST_CASE("stereographic projection round trip and tangent maps") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int i = 0; i < 100; ++i) {
    const Vec3 x(n(rng), n(rng), n(rng));
    CHECK((to_chart(from_chart(x)) - x).norm() < 1e-12 * (1 + x.squaredNorm()));
    const Vec3 y(n(rng), n(rng), n(rng));
    const Vec4 v = chart_vector_to_s3(x, y);
    CHECK(std::abs(v.dot(from_chart(x).coords())) < 1e-12 * v.norm());
    CHECK((s3_vector_to_chart(from_chart(x), v) - y).norm() < 1e-10 * y.norm());
    // Derivative check of the pushforward.
    const double h = 1e-6;
    const Vec4 fd = (from_chart(x + h * y).coords() - from_chart(x - h * y).coords()) / (2 * h);
    CHECK((fd - v).norm() < 1e-7);
  }
}

TEST_CASE("equivariance of chart heights") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const HeightChart chart(Rotation4::random(rng()), 0.5 + 0.1 * (i % 10));
    const auto g = Rotation4::random(rng());
    const auto p = haar_sample(1, rng()).front();
    CHECK(chart_height(chart.precomposed(g), p) ==
          doctest::Approx(chart_height(chart, g.apply(p))).epsilon(1e-12));
  }
}

TEST_CASE("foci of a chart") {
  const HeightChart chart(Rotation4::random(9), 3.0);
  CHECK(chart_height(chart, chart.low_focus()) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(chart_height(chart, chart.high_focus()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("level spheres lie on their level with orthonormal normals") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const HeightChart chart(Rotation4::random(rng()), 0.25 + 3.0 * uni(rng));
    const auto p = haar_sample(1, rng()).front();
    const double t = chart_height(chart, p);
    if (t <= 1e-4 || t >= 1 - 1e-4) continue;
    const LevelSphere s(chart, t);
    const double u = 0.05 + 3.0 * uni(rng), v = 2 * kPi * uni(rng);
    const Vec4 x = s.point(u, v);
    CHECK(std::abs(chart_height(chart, PointS3(x)) - t) <= 1e-10);
    const Vec4 n = s.normal(u, v);
    // Richardson-extrapolated central differences for the parametric tangents.
    auto tangent = [&](double du, double dv) {
      auto d = [&](double h) {
        return Vec4((s.point(u + h * du, v + h * dv) - s.point(u - h * du, v - h * dv)) / (2 * h));
      };
      return Vec4((4.0 * d(5e-4) - d(1e-3)) / 3.0);
    };
    CHECK(std::abs(n.norm() - 1.0) <= 1e-10);
    CHECK(std::abs(n.dot(x)) <= 1e-10);
    CHECK(std::abs(n.dot(tangent(1, 0))) <= 1e-10);
    CHECK(std::abs(n.dot(tangent(0, 1))) <= 1e-10);
    // The normal points toward increasing level.
    CHECK(chart_height(chart, PointS3(x + 1e-6 * n)) > t);
  }
}

TEST_CASE("level sphere area matches the closed form") {
  for (double t : {0.01, 0.3, 0.5, 0.77, 0.99}) {
    const LevelSphere s(HeightChart(Rotation4::random(2), 1.7), t);
    const int nu = 4000, nv = 16;
    double area = 0.0;
    for (int i = 0; i < nu; ++i) {
      for (int j = 0; j < nv; ++j) {
        area += s.area_element((i + 0.5) * kPi / nu, (j + 0.5) * 2 * kPi / nv);
      }
    }
    area *= (kPi / nu) * (2 * kPi / nv);
    const double r = s.intrinsic_radius();
    const double exact = 4 * kPi * std::sin(r) * std::sin(r);
    CHECK(std::abs(area - exact) <= 1e-6 * exact);
    CHECK(s.area() == doctest::Approx(exact).epsilon(1e-12));
  }
  const LevelSphere tiny(HeightChart::standard(), 1.1e-6);
  CHECK(tiny.area() < 1e-4);
}

TEST_CASE("level range is open") {
  CHECK_THROWS_AS(LevelSphere(HeightChart::standard(), 0.0), LevelOutOfRange);
  CHECK_THROWS_AS(LevelSphere(HeightChart::standard(), 1.0), LevelOutOfRange);
  CHECK_THROWS_AS(LevelSphere(HeightChart::standard(), 5e-7), LevelOutOfRange);
  CHECK_THROWS_AS(LevelSphere(HeightChart::standard(), 1 - 5e-7), LevelOutOfRange);
  CHECK_NOTHROW(LevelSphere(HeightChart::standard(), 2e-6));
}

TEST_CASE("rotated level is the preimage of the standard level") {
  const auto g = Rotation4::random(42);
  const LevelSphere base(HeightChart::standard(), 0.3);
  const LevelSphere moved(HeightChart(g), 0.3);
  for (double u : {0.3, 1.2, 2.9}) {
    for (double v : {0.1, 2.0, 5.0}) {
      const Vec4 expect = g.inverse().apply(base.point(u, v));
      CHECK((moved.point(u, v) - expect).norm() < 1e-12);
    }
  }
}

TEST_CASE("haar sampling") {
  const std::size_t n = 100000;
  const auto pts = haar_sample(n, 17);
  Vec4 mean = Vec4::Zero();
  for (const auto& p : pts) mean += p.coords();
  mean /= static_cast<double>(n);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(mean[k]) <= 3.0 / std::sqrt(double(n)));

  // Cap mass {h < 0.3} against the 1-D integral of the geodesic sphere area.
  const double t = 0.3;
  const double R = LevelSphere(HeightChart::standard(), t).intrinsic_radius();
  const int m = 2000;
  double mass = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double r = R * i / m;
    const double w = (i == 0 || i == m) ? 1 : (i % 2 ? 4 : 2);
    mass += w * 4 * kPi * std::sin(r) * std::sin(r);
  }
  mass *= R / (3.0 * m) / kS3Volume;
  std::size_t inside = 0;
  for (const auto& p : pts) inside += standard_height(p) < t;
  const double frac = static_cast<double>(inside) / n;
  const double se = std::sqrt(mass * (1 - mass) / n);
  CHECK(std::abs(frac - mass) <= 3 * se);

  const auto one = haar_sample(1, 99);
  CHECK(one.front().coords() == haar_sample(1, 99).front().coords());
  CHECK(std::abs(one.front().coords().norm() - 1.0) <= 1e-12);
}
