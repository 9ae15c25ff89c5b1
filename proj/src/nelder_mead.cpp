#include "trunkenness/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trunkenness/error.hpp"

namespace trunk {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, double step, int budget, double tolerance) {
  const std::size_t n = x0.size();
  if (n == 0) throw InvalidArgument("nelder_mead needs at least one parameter");
  if (budget < static_cast<int>(n) + 1) throw InvalidArgument("budget smaller than the simplex");
  using Point = std::vector<double>;

  NelderMeadResult out;
  auto eval = [&](const Point& x) {
    ++out.evaluations;
    return f(x);
  };

  std::vector<Point> simplex(n + 1, x0);
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  auto combine = [&](const Point& a, const Point& b, double w) {
    Point r(n);
    for (std::size_t k = 0; k < n; ++k) r[k] = a[k] + w * (b[k] - a[k]);
    return r;
  };
  auto diameter = [&](std::size_t best) {
    double d = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += std::pow(simplex[i][k] - simplex[best][k], 2);
      d = std::max(d, std::sqrt(s));
    }
    return d;
  };

  std::vector<std::size_t> order(n + 1);
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    if (diameter(best) < tolerance) {
      out.converged = true;
      break;
    }
    if (out.evaluations >= budget) break;

    Point centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);
    }
    const Point reflected = combine(centroid, simplex[worst], -1.0);
    const double fr = eval(reflected);
    if (fr < values[best]) {
      const Point expanded = combine(centroid, simplex[worst], -2.0);
      const double fe = out.evaluations < budget ? eval(expanded) : fr + 1.0;
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    // Contraction, outside or inside depending on the reflected value.
    const bool outside = fr < values[worst];
    const Point contracted =
        outside ? combine(centroid, reflected, 0.5) : combine(centroid, simplex[worst], 0.5);
    if (out.evaluations >= budget) break;
    const double fc = eval(contracted);
    if (fc < std::min(fr, values[worst])) {
      simplex[worst] = contracted;
      values[worst] = fc;
      continue;
    }
    if (outside && fr < values[worst]) {
      simplex[worst] = reflected;
      values[worst] = fr;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      if (out.evaluations >= budget) break;
      simplex[i] = combine(simplex[best], simplex[i], 0.5);
      values[i] = eval(simplex[i]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) -
                                             values.begin());
  out.x = simplex[best];
  out.value = values[best];
  return out;
}

}  // namespace trunk
