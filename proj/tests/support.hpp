#pragma once

// Small numerical oracles shared by the unit tests.

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "trunkenness/geometry.hpp"

namespace testing {

using trunk::PointS3;
using trunk::Vec4;

/// Orthonormal basis of the tangent space of S^3 at p.
inline std::vector<Vec4> tangent_basis(const Vec4& p) {
  std::vector<Vec4> basis;
  for (int k = 0; k < 4 && basis.size() < 3; ++k) {
    Vec4 e = Vec4::Unit(k) - p[k] * p;
    for (const auto& b : basis) e -= e.dot(b) * b;
    if (e.norm() > 1e-3) basis.push_back(e.normalized());
  }
  return basis;
}

/// Riemannian divergence on S^3 by central differences along great circles.
inline double sphere_divergence(const std::function<Vec4(const PointS3&)>& field, const Vec4& p,
                                double h) {
  double div = 0.0;
  for (const auto& e : tangent_basis(p)) {
    const PointS3 plus(std::cos(h) * p + std::sin(h) * e);
    const PointS3 minus(std::cos(h) * p - std::sin(h) * e);
    // Transport the tangent direction along the circle to read the component.
    const Vec4 e_plus = -std::sin(h) * p + std::cos(h) * e;
    const Vec4 e_minus = std::sin(h) * p + std::cos(h) * e;
    div += (field(plus).dot(e_plus) - field(minus).dot(e_minus)) / (2.0 * h);
  }
  return div;
}

/// Gauss-Legendre nodes and weights on [a, b].
inline std::vector<std::pair<double, double>> gauss_legendre(int n, double a, double b) {
  std::vector<std::pair<double, double>> out;
  for (int i = 1; i <= n; ++i) {
    double x = std::cos(trunk::kPi * (i - 0.25) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    out.emplace_back(0.5 * (a + b) + 0.5 * (b - a) * x, 0.5 * (b - a) * w);
  }
  return out;
}

}  // namespace testing
