#include "trunkenness/knot.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "trunkenness/error.hpp"

namespace trunk {

namespace {

constexpr double kMinEdge = 1e-12;

template <typename V, typename Dist>
void validate_loop(const std::vector<V>& v, Dist dist) {
  if (v.size() < 3) throw InvalidArgument("a knot needs at least 3 vertices");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(dist(v[i], v[(i + 1) % v.size()]) > kMinEdge)) {
      throw InvalidArgument("consecutive knot vertices " + std::to_string(i) +
                            " coincide");
    }
  }
}

}  // namespace

PLKnot PLKnot::on_s3(std::vector<PointS3> vertices) {
  validate_loop(vertices, [](const PointS3& a, const PointS3& b) {
    return (a.coords() - b.coords()).norm();
  });
  PLKnot k;
  k.space_ = Space::S3;
  k.s3_ = std::move(vertices);
  return k;
}

PLKnot PLKnot::in_chart(std::vector<Vec3> vertices) {
  validate_loop(vertices, [](const Vec3& a, const Vec3& b) { return (a - b).norm(); });
  PLKnot k;
  k.space_ = Space::Chart;
  k.chart_ = std::move(vertices);
  return k;
}

PLKnot PLKnot::degenerate(const PointS3& where) {
  PLKnot k;
  k.space_ = Space::S3;
  k.degenerate_ = true;
  k.s3_ = {where};
  return k;
}

std::size_t PLKnot::size() const noexcept {
  return space_ == Space::S3 ? s3_.size() : chart_.size();
}

std::vector<PointS3> PLKnot::s3_points() const {
  if (space_ == Space::S3) return s3_;
  std::vector<PointS3> out;
  out.reserve(chart_.size());
  for (const auto& x : chart_) out.push_back(from_chart(x));
  return out;
}

std::vector<Vec3> PLKnot::chart_points() const {
  if (space_ == Space::Chart) return chart_;
  std::vector<Vec3> out;
  out.reserve(s3_.size());
  for (const auto& p : s3_) out.push_back(to_chart(p));
  return out;
}

PLKnot PLKnot::subdivided() const {
  if (degenerate_) return *this;
  if (space_ == Space::S3) {
    std::vector<PointS3> out;
    out.reserve(2 * s3_.size());
    for (std::size_t i = 0; i < s3_.size(); ++i) {
      const auto& a = s3_[i];
      const auto& b = s3_[(i + 1) % s3_.size()];
      out.push_back(a);
      out.emplace_back(a.coords() + b.coords());
    }
    return on_s3(std::move(out));
  }
  std::vector<Vec3> out;
  out.reserve(2 * chart_.size());
  for (std::size_t i = 0; i < chart_.size(); ++i) {
    out.push_back(chart_[i]);
    out.push_back(0.5 * (chart_[i] + chart_[(i + 1) % chart_.size()]));
  }
  return in_chart(std::move(out));
}

double PLKnot::length() const {
  if (degenerate_) return 0.0;
  double total = 0.0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    if (space_ == Space::S3) {
      total += (s3_[(i + 1) % n].coords() - s3_[i].coords()).norm();
    } else {
      total += (chart_[(i + 1) % n] - chart_[i]).norm();
    }
  }
  return total;
}

PLKnot torus_knot(int p, int q, double ratio, std::size_t vertices) {
  if (p < 1 || q < 1) throw InvalidArgument("torus knot indices must be >= 1");
  if (std::gcd(p, q) != 1) {
    throw NotCoprime("torus knot (" + std::to_string(p) + "," + std::to_string(q) +
                     ") needs coprime indices");
  }
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw InvalidArgument("torus ratio |z1/z2| must be positive");
  }
  if (vertices < 3) throw InvalidArgument("a knot needs at least 3 vertices");
  return torus_cable(p, q, 1, ratio, vertices).front();
}

std::vector<PLKnot> torus_cable(int p, int q, int components, double ratio,
                                std::size_t vertices) {
  if (p < 1 || q < 1) throw InvalidArgument("torus knot indices must be >= 1");
  if (std::gcd(p, q) != 1) throw NotCoprime("cable of a torus knot needs coprime indices");
  if (components < 1) throw InvalidArgument("cable needs at least one component");
  if (!(ratio > 0.0)) throw InvalidArgument("torus ratio |z1/z2| must be positive");
  const double b = 1.0 / std::sqrt(1.0 + ratio * ratio);
  const double a = ratio * b;
  std::vector<PLKnot> out;
  for (int k = 0; k < components; ++k) {
    // Starting phases 2 pi k / (q n) hit n different orbits.
    const double phase = 2.0 * kPi * k / (static_cast<double>(q) * components);
    std::vector<PointS3> pts;
    pts.reserve(vertices);
    for (std::size_t i = 0; i < vertices; ++i) {
      const double tau = static_cast<double>(i) / static_cast<double>(vertices);
      const double u = phase + 2.0 * kPi * p * tau;
      const double w = 2.0 * kPi * q * tau;
      pts.emplace_back(a * std::cos(u), a * std::sin(u), b * std::cos(w), b * std::sin(w));
    }
    out.push_back(PLKnot::on_s3(std::move(pts)));
  }
  return out;
}

PLKnot chart_circle(double radius, std::size_t vertices, double height) {
  if (!(radius > 0.0)) throw InvalidArgument("circle radius must be positive");
  std::vector<Vec3> pts;
  pts.reserve(vertices);
  for (std::size_t i = 0; i < vertices; ++i) {
    const double s = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(vertices);
    pts.emplace_back(radius * std::cos(s), radius * std::sin(s), height);
  }
  return PLKnot::in_chart(std::move(pts));
}

std::vector<double> vertex_heights(const PLKnot& knot, const HeightChart& chart) {
  std::vector<double> h;
  const auto pts = knot.s3_points();
  h.reserve(pts.size());
  for (const auto& p : pts) h.push_back(chart_height(chart, p));
  return h;
}

long count_level_crossings(const std::vector<double>& heights, double t) {
  const std::size_t n = heights.size();
  long count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = heights[i] - t;
    if (std::abs(a) <= 1e-12) return -1;
    const double b = heights[(i + 1) % n] - t;
    if ((a < 0.0) != (b < 0.0)) ++count;
  }
  return count;
}

double knot_measure_flux(const KnotMeasure& measure, const LevelSphere& sphere) {
  if (!(measure.period > 0.0)) throw InvalidArgument("knot period must be positive");
  if (measure.knot.is_degenerate()) return 0.0;
  const auto heights = vertex_heights(measure.knot, sphere.chart());
  // Seeded from the level so repeated calls agree.
  std::mt19937_64 rng(std::hash<double>{}(sphere.level()));
  std::uniform_real_distribution<double> nudge(1e-9, 1e-8);
  double t = sphere.level();
  for (int attempt = 0; attempt <= 5; ++attempt) {
    const long count = count_level_crossings(heights, t);
    if (count >= 0) {
      const double scale = measure.normalized ? 1.0 / measure.period : 1.0;
      return static_cast<double>(count) * scale;
    }
    t = sphere.level() + nudge(rng);
  }
  throw DegenerateIntersection("a knot vertex lies on level " +
                               std::to_string(sphere.level()) + " after 5 retries");
}

PLKnot read_knot(std::istream& in) {
  std::string line;
  int declared = 0;  // 3 or 4 once known
  std::vector<Vec3> chart;
  std::vector<PointS3> s3;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream hs(line.substr(first + 1));
      std::string key, value;
      hs >> key >> value;
      if (key == "chart") {
        if (value == "r3") declared = 3;
        else if (value == "s3") declared = 4;
        else throw IoError("line " + std::to_string(line_no) + ": unknown chart '" + value + "'");
      }
      continue;
    }
    std::istringstream ls(line);
    std::vector<double> vals;
    double v;
    while (ls >> v) vals.push_back(v);
    if (!ls.eof()) throw IoError("line " + std::to_string(line_no) + ": malformed number");
    const int dim = declared != 0 ? declared : static_cast<int>(vals.size());
    if (declared == 0) declared = dim;
    if (static_cast<int>(vals.size()) != dim || (dim != 3 && dim != 4)) {
      throw IoError("line " + std::to_string(line_no) + ": expected " +
                    std::to_string(dim == 4 ? 4 : 3) + " coordinates");
    }
    if (dim == 3) chart.emplace_back(vals[0], vals[1], vals[2]);
    else s3.emplace_back(vals[0], vals[1], vals[2], vals[3]);
  }
  if (declared == 3) return PLKnot::in_chart(std::move(chart));
  return PLKnot::on_s3(std::move(s3));
}

PLKnot read_knot_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open knot file '" + path + "'");
  return read_knot(in);
}

void write_knot(std::ostream& out, const PLKnot& knot, const std::vector<std::string>& header_lines) {
  for (const auto& h : header_lines) out << "# " << h << "\n";
  const bool chart = knot.space() == PLKnot::Space::Chart;
  out << "#chart " << (chart ? "r3" : "s3") << "\n";
  out << std::setprecision(17);
  if (chart) {
    for (const auto& x : knot.chart_points()) out << x[0] << " " << x[1] << " " << x[2] << "\n";
  } else {
    for (const auto& p : knot.s3_points()) {
      out << p[0] << " " << p[1] << " " << p[2] << " " << p[3] << "\n";
    }
  }
}

void write_knot_file(const std::string& path, const PLKnot& knot,
                     const std::vector<std::string>& header_lines) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write knot file '" + path + "'");
  write_knot(out, knot, header_lines);
  if (!out) throw IoError("error while writing '" + path + "'");
}

}  // namespace trunk
