#include "trunkenness/paper_suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

#include "trunkenness/chart_search.hpp"
#include "trunkenness/error.hpp"
#include "trunkenness/flow.hpp"
#include "trunkenness/flux.hpp"
#include "trunkenness/knot_invariants.hpp"

namespace trunk {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool rel_close(double value, double target, double tol) {
  return std::abs(value - target) <= tol * std::abs(target);
}

class Suite {
 public:
  Suite(const SuiteOptions& options, Executor& pool) : options_(options), pool_(pool) {}

  CriterionResult run(int id) {
    CriterionResult r;
    r.id = id;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      switch (id) {
        case 1: seifert_flux(r); break;
        case 2: seifert_trunkenness(r); break;
        case 3: helicity(r); break;
        case 4: independence(r); break;
        case 5: knot_trunk_golden(r); break;
        case 6: cabling(r); break;
        case 7: asymptotic(r); break;
        case 8: trefoil_tube(r); break;
        case 9: unknot_tube(r); break;
        case 10: invariance(r); break;
        case 11: properties(r); break;
        default: throw InvalidArgument("no criterion " + std::to_string(id));
      }
    } catch (const Error& e) {
      r.passed = false;
      r.detail += std::string(r.detail.empty() ? "" : "; ") + e.kind() + ": " + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }

 private:
  SearchConfig search() const {
    SearchConfig s;
    s.seed = options_.seed;
    return s;
  }

  const TrunkennessReport& seifert_tr(double a, double b) {
    const auto key = std::make_pair(a, b);
    auto it = tr_cache_.find(key);
    if (it == tr_cache_.end()) {
      it = tr_cache_.emplace(key, trunkenness_upper(FieldSpec::seifert(a, b), search(), &pool_)).first;
    }
    return it->second;
  }

  const HelicityEstimate& seifert_hel(double a, double b) {
    const auto key = std::make_pair(a, b);
    auto it = hel_cache_.find(key);
    if (it == hel_cache_.end()) {
      const auto h = asymptotic_helicity(FieldSpec::seifert(a, b), 8, 1.0, 1e-3, options_.seed,
                                         Closure::Geodesic, &pool_);
      it = hel_cache_.emplace(key, h).first;
    }
    return it->second;
  }

  void seifert_flux(CriterionResult& r) {
    r.title = "Seifert flux through the middle sphere = 2 beta (1%)";
    r.passed = true;
    for (auto [a, b] : {std::pair{1.0, 1.0}, {1.0, 2.0}, {2.0, 3.0}}) {
      const double v = flux_quadrature(FieldSpec::seifert(a, b),
                                       LevelSphere(HeightChart::standard(), 0.5), {128, 256}, &pool_);
      r.passed &= rel_close(v, 2.0 * b, 0.01);
      r.detail += fmt("(%g,", a) + fmt("%g)=", b) + fmt("%.5f ", v);
    }
  }

  void seifert_trunkenness(CriterionResult& r) {
    r.title = "Seifert trunkenness = 2 min(alpha, beta) (2%)";
    r.passed = true;
    for (auto [a, b] : {std::pair{1.0, 2.0}, {2.0, 3.0}, {2.0, 4.0}, {1.0, 8.0}}) {
      const double v = seifert_tr(a, b).upper_bound;
      r.passed &= rel_close(v, 2.0 * std::min(a, b), 0.02);
      r.detail += fmt("(%g,", a) + fmt("%g)=", b) + fmt("%.5f ", v);
    }
  }

  void helicity(CriterionResult& r) {
    r.title = "asymptotic helicity of Seifert(p,q) = pq";
    r.passed = true;
    for (auto [a, b, tol] : {std::tuple{2.0, 3.0, 0.1}, {1.0, 8.0, 0.2}, {2.0, 4.0, 0.2}}) {
      const auto& h = seifert_hel(a, b);
      r.passed &= std::abs(h.estimate - a * b) <= tol;
      r.detail += fmt("(%g,", a) + fmt("%g)=", b) + fmt("%.5f ", h.estimate);
    }
  }

  void independence(CriterionResult& r) {
    r.title = "equal helicity, different trunkenness: Seifert(1,8) vs (2,4)";
    const double h18 = seifert_hel(1, 8).estimate, h24 = seifert_hel(2, 4).estimate;
    const double t18 = seifert_tr(1, 8).upper_bound, t24 = seifert_tr(2, 4).upper_bound;
    r.passed = std::abs(h18 - 8) <= 0.2 && std::abs(h24 - 8) <= 0.2 && rel_close(t18, 2, 0.02) &&
               rel_close(t24, 4, 0.02);
    r.detail = fmt("Hel %.4f", h18) + fmt(" vs %.4f, ", h24) + fmt("Tr %.4f", t18) +
               fmt(" vs %.4f", t24);
  }

  void knot_trunk_golden(CriterionResult& r) {
    r.title = "knot trunk: T(2,3)=4, T(2,5)=4, T(3,4)=6, unknot=2";
    r.passed = true;
    for (auto [p, q, want] : {std::tuple{2, 3, 4}, {2, 5, 4}, {3, 4, 6}, {1, 2, 2}}) {
      const int got = knot_trunk_upper({torus_knot(p, q, 1.0)}, search(), 64, &pool_).trunk_upper;
      r.passed &= got == want;
      r.detail += "T(" + std::to_string(p) + "," + std::to_string(q) + ")=" + std::to_string(got) + " ";
    }
    const int circle = knot_trunk_upper({chart_circle(1.0)}, search(), 64, &pool_).trunk_upper;
    r.passed &= circle == 2;
    r.detail += "circle=" + std::to_string(circle);
  }

  void cabling(CriterionResult& r) {
    r.title = "n parallel Seifert(2,3) orbits have trunk 4n";
    r.passed = true;
    for (int n : {2, 3}) {
      const int got = knot_trunk_upper(torus_cable(2, 3, n, 1.0), search(), 64, &pool_).trunk_upper;
      r.passed &= got == 4 * n;
      r.detail += "n=" + std::to_string(n) + ":" + std::to_string(got) + " ";
    }
  }

  void asymptotic(CriterionResult& r) {
    r.title = "asymptotic trunk of Seifert(2,3) = {4,4,4} and matches Tr";
    const auto field = FieldSpec::seifert(2, 3);
    const auto rep = asymptotic_trunk(field, PointS3(1, 0, 1, 0), {1, 2, 3}, 1e-3, search(), false,
                                      Closure::Geodesic, &pool_);
    r.passed = true;
    for (const auto& p : rep.points) {
      r.passed &= p.trunk == static_cast<int>(std::lround(4 * p.duration)) && p.normalized == 4.0;
      r.detail += fmt("t=%g:", p.duration) + fmt("%g ", p.normalized);
    }
    const double tr = seifert_tr(2, 3).upper_bound;
    r.passed &= rel_close(tr, 4, 0.02);
    r.detail += fmt("Tr=%.5f", tr);
  }

  static TubeSpec trefoil_tube_spec() {
    const auto k = torus_knot(2, 3, 1.0, 512);
    return TubeSpec{PLKnot::in_chart(k.chart_points()), 0.1, 1.0, TubeProfile::Parabolic};
  }

  void trefoil_tube(CriterionResult& r) {
    r.title = "trefoil tube (F=1, r=0.1): Tr <= 4.2 and profile max >= 3.8";
    const auto spec = trefoil_tube_spec();
    auto s = search();
    s.warm_start = {knot_trunk_upper({spec.core}, s, 64, &pool_).best_chart};
    const auto rep = trunkenness_upper(FieldSpec::tubes({spec}), s, &pool_);
    r.passed = rep.upper_bound <= 4.0 * 1.05 && rep.profile_at_best.max_value >= 4.0 * 0.95;
    r.detail = fmt("upper %.4f", rep.upper_bound) +
               fmt(", max at best chart %.4f", rep.profile_at_best.max_value);
  }

  void unknot_tube(CriterionResult& r) {
    r.title = "horizontal round unknot tube: Tr <= 0.02 F";
    const auto field =
        FieldSpec::tubes({TubeSpec{chart_circle(1.0), 0.1, 1.0, TubeProfile::Parabolic}});
    const auto rep = trunkenness_upper(field, search(), &pool_);
    r.passed = rep.upper_bound <= 0.02;
    r.detail = fmt("upper %.3e", rep.upper_bound);
  }

  void invariance(CriterionResult& r) {
    r.title = "Tr(Rotated(g, Seifert(1,2))) = Tr(Seifert(1,2)) (2%), 5 rotations";
    const double base = seifert_tr(1, 2).upper_bound;
    r.passed = true;
    r.detail = fmt("base %.5f:", base);
    for (int k = 1; k <= 5; ++k) {
      const auto g = Rotation4::random(options_.seed * 7919 + static_cast<std::uint64_t>(k));
      const double v =
          trunkenness_upper(FieldSpec::rotated(g, FieldSpec::seifert(1, 2)), search(), &pool_)
              .upper_bound;
      r.passed &= rel_close(v, base, 0.02);
      r.detail += fmt(" %.5f", v);
    }
  }

  void properties(CriterionResult& r) {
    r.title = "property suites";
    r.passed = true;
    auto note = [&](const std::string& name, bool ok, const std::string& what) {
      r.passed &= ok;
      r.detail += name + (ok ? " ok" : " FAILED") + " (" + what + "); ";
    };
    std::mt19937_64 rng(options_.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Homogeneity of order 1.
    {
      double worst = 0.0;
      const auto x = FieldSpec::seifert(2, 3);
      for (double lambda : {-3.0, 0.5, 2.0, 7.25}) {
        const LevelSphere s(HeightChart(Rotation4::random(rng())), 0.1 + 0.8 * unit(rng));
        const double a = flux_quadrature(FieldSpec::scaled(lambda, x), s, {64, 128}, &pool_);
        const double b = std::abs(lambda) * flux_quadrature(x, s, {64, 128}, &pool_);
        worst = std::max(worst, std::abs(a - b) / b);
      }
      note("homogeneity", worst <= 1e-12, fmt("rel %.1e", worst));
    }

    // Even parity of every intersection count.
    {
      bool even = true;
      std::vector<std::vector<PLKnot>> links = {{torus_knot(2, 3, 1.0)}, {torus_knot(3, 4, 0.7)},
                                                torus_cable(2, 3, 3, 1.0), {chart_circle(0.8)}};
      for (const auto& link : links) {
        for (int c = 0; c < 10; ++c) {
          const HeightChart chart(Rotation4::random(rng()));
          for (const auto& [lo, count] : sweep_levels(link, chart).intervals) even &= count % 2 == 0;
          for (const auto& k : link) {
            const double t = 0.05 + 0.9 * unit(rng);
            even &= static_cast<long>(knot_measure_flux({k, 1.0, false}, LevelSphere(chart, t))) % 2 == 0;
          }
        }
      }
      note("parity", even, "4 links x 10 charts");
    }

    // Quadrature against Monte Carlo on 10 random configurations.
    {
      const auto x = FieldSpec::seifert(2, 3);
      double worst = -1e9;
      for (int c = 0; c < 10; ++c) {
        const HeightChart chart(Rotation4::random(rng()));
        const double t = 0.1 + 0.8 * unit(rng);
        const double q = flux_quadrature(x, LevelSphere(chart, t), {128, 256}, &pool_);
        const auto mc = flux_monte_carlo(x, chart, t, 0.01, 100000, rng(), 16, &pool_);
        worst = std::max(worst, std::abs(q - mc.estimate) - (3.0 * mc.std_error + 0.05));
      }
      note("quadrature-vs-MC", worst <= 0.0, fmt("worst margin %.3f", worst));
    }

    // Integer residual of the Gauss sum.
    {
      double worst = 0.0;
      const auto c23 = torus_cable(2, 3, 2, 1.0);
      const std::vector<std::pair<PLKnot, PLKnot>> pairs = {
          {torus_knot(1, 1, 0.5), torus_knot(1, 1, 2.0)}, {c23[0], c23[1]},
          {torus_knot(2, 3, 0.5), torus_knot(2, 3, 3.0)}};
      for (const auto& [a, b] : pairs) worst = std::max(worst, linking_number(a, b, &pool_).residual);
      note("gauss-residual", worst <= 0.01, fmt("max %.1e", worst));
    }

    // Dirac flux against the sweep count.
    {
      bool agree = true;
      for (const auto& k : {torus_knot(2, 3, 1.0), torus_knot(2, 5, 1.3), torus_knot(1, 2, 0.8)}) {
        for (int c = 0; c < 5; ++c) {
          const HeightChart chart(Rotation4::random(rng()));
          const auto sweep = sweep_levels({k}, chart);
          int best = 0;
          for (std::size_t i = 0; i + 1 < sweep.intervals.size(); ++i) {
            const double t = 0.5 * (sweep.intervals[i].first + sweep.intervals[i + 1].first);
            if (t <= kLevelFloor || t >= 1.0 - kLevelFloor) continue;
            best = std::max(best, static_cast<int>(knot_measure_flux({k, 1.0, false}, LevelSphere(chart, t))));
          }
          agree &= best == sweep.max_count;
        }
      }
      note("dirac-vs-trunk", agree, "3 knots x 5 charts");
    }

    // RK4 convergence order.
    {
      const auto x = FieldSpec::seifert(1, 1);
      const PointS3 p(0.6, 0.0, 0.8, 0.0);
      std::vector<double> errs;
      for (double h : {4e-3, 2e-3, 1e-3}) {
        const auto path = integrate(x, p, 1.0, h);
        errs.push_back((path.samples.back().coords() - p.coords()).norm());
      }
      const double ratio = std::min(errs[0] / errs[1], errs[1] / errs[2]);
      note("rk4-order", ratio >= 12.0, fmt("min ratio %.2f", ratio));
    }
  }

  SuiteOptions options_;
  Executor& pool_;
  std::map<std::pair<double, double>, TrunkennessReport> tr_cache_;
  std::map<std::pair<double, double>, HelicityEstimate> hel_cache_;
};

}  // namespace

std::vector<CriterionResult> run_paper_suite(
    const SuiteOptions& options, Executor* pool,
    const std::function<void(const CriterionResult&)>& on_result) {
  Suite suite(options, pool ? *pool : Executor::shared());
  std::vector<int> ids = options.only;
  if (ids.empty()) {
    for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
  }
  std::vector<CriterionResult> out;
  for (int id : ids) {
    out.push_back(suite.run(id));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_criterion(const CriterionResult& r) {
  char head[32];
  std::snprintf(head, sizeof head, "criterion %2d  %s  ", r.id, r.passed ? "PASS" : "FAIL");
  std::ostringstream out;
  out << head << r.title << "  [" << r.detail << "]" << fmt("  %.1fs", r.seconds);
  return out.str();
}

}  // namespace trunk
