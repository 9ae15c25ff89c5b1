#include "trunkenness/fields.hpp"

#include <cmath>
#include <sstream>

#include "trunkenness/error.hpp"

namespace trunk {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

FieldSpec FieldSpec::seifert(double alpha, double beta) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be positive");
  return FieldSpec(Seifert{alpha, beta});
}

FieldSpec FieldSpec::tubes(std::vector<TubeSpec> specs) {
  if (specs.empty()) throw InvalidArgument("a tube field needs at least one tube");
  Tubes t;
  for (auto& s : specs) t.tubes.push_back(std::make_shared<const TubeField>(std::move(s)));
  return FieldSpec(std::move(t));
}

FieldSpec FieldSpec::scaled(double factor, FieldSpec inner) {
  if (!std::isfinite(factor)) throw InvalidArgument("scale factor must be finite");
  return FieldSpec(Scaled{factor, std::make_shared<const FieldSpec>(std::move(inner))});
}

FieldSpec FieldSpec::rotated(Rotation4 g, FieldSpec inner) {
  return FieldSpec(Rotated{std::move(g), std::make_shared<const FieldSpec>(std::move(inner))});
}

Vec4 FieldSpec::operator()(const PointS3& p) const {
  return std::visit(
      overloaded{
          [&](const Seifert& s) {
            const Vec4& x = p.coords();
            const double a = 2.0 * kPi * s.alpha;
            const double b = 2.0 * kPi * s.beta;
            return Vec4(-a * x[1], a * x[0], -b * x[3], b * x[2]);
          },
          [&](const Tubes& t) {
            Vec4 sum = Vec4::Zero();
            for (const auto& tube : t.tubes) sum += (*tube)(p);
            return sum;
          },
          [&](const Scaled& s) { return Vec4(s.factor * (*s.inner)(p)); },
          [&](const Rotated& r) {
            const Mat4& g = r.rotation.matrix();
            const PointS3 back(g.transpose() * p.coords());
            return Vec4(g * (*r.inner)(back));
          },
          [](const Zero&) { return Vec4(Vec4::Zero()); },
      },
      *node_);
}

double FieldSpec::speed_bound() const {
  return std::visit(
      overloaded{
          [](const Seifert& s) { return 2.0 * kPi * std::max(s.alpha, s.beta); },
          [](const Tubes& t) {
            // Largest chart speed times the largest chart-to-S^3 factor,
            // estimated on the core where the profile peaks.
            double bound = 0.0;
            for (const auto& tube : t.tubes) {
              const std::size_t n = 512;
              for (std::size_t i = 0; i < n; ++i) {
                const double s = 2.0 * kPi * static_cast<double>(i) / n;
                const auto f = tube->frame(s);
                for (double a : {-0.9, 0.0, 0.9}) {
                  for (double b : {-0.9, 0.0, 0.9}) {
                    const Vec3 x = f.point + tube->spec().radius * (a * f.normal + b * f.binormal);
                    const Vec4 v = (*tube)(from_chart(x));
                    bound = std::max(bound, v.norm());
                  }
                }
              }
            }
            return 1.5 * bound;
          },
          [](const Scaled& s) { return std::abs(s.factor) * s.inner->speed_bound(); },
          [](const Rotated& r) { return r.inner->speed_bound(); },
          [](const Zero&) { return 0.0; },
      },
      *node_);
}

std::string FieldSpec::describe() const {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const Seifert& s) { out << "seifert(" << s.alpha << "," << s.beta << ")"; },
                 [&](const Tubes& t) {
                   out << "tubes(";
                   for (std::size_t i = 0; i < t.tubes.size(); ++i) {
                     const auto& spec = t.tubes[i]->spec();
                     if (i) out << ";";
                     out << "r=" << spec.radius << ",F=" << spec.flux
                         << ",n=" << spec.core.size();
                   }
                   out << ")";
                 },
                 [&](const Scaled& s) { out << s.factor << "*" << s.inner->describe(); },
                 [&](const Rotated& r) { out << "rotated(" << r.inner->describe() << ")"; },
                 [&](const Zero&) { out << "zero"; },
             },
             *node_);
  return out.str();
}

}  // namespace trunk
