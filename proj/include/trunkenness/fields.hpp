#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "trunkenness/geometry.hpp"
#include "trunkenness/tube.hpp"

namespace trunk {

/// Volume-preserving vector field on S^3, built from a small set of
/// variants. Immutable and cheap to copy (shared representation).
class FieldSpec {
 public:
  struct Seifert {
    double alpha, beta;
  };
  struct Tubes {
    std::vector<std::shared_ptr<const TubeField>> tubes;
  };
  struct Scaled {
    double factor;
    std::shared_ptr<const FieldSpec> inner;
  };
  struct Rotated {
    Rotation4 rotation;
    std::shared_ptr<const FieldSpec> inner;
  };
  struct Zero {};
  using Variant = std::variant<Seifert, Tubes, Scaled, Rotated, Zero>;

  FieldSpec() : node_(std::make_shared<const Variant>(Zero{})) {}

  /// X(z1,z2) = (i 2 pi alpha z1, i 2 pi beta z2); alpha, beta > 0.
  static FieldSpec seifert(double alpha, double beta);
  static FieldSpec tubes(std::vector<TubeSpec> specs);
  static FieldSpec scaled(double factor, FieldSpec inner);
  /// (g_* X)(p) = g X(g^{-1} p).
  static FieldSpec rotated(Rotation4 g, FieldSpec inner);
  static FieldSpec zero() { return FieldSpec(); }

  const Variant& variant() const noexcept { return *node_; }
  bool is_zero() const { return std::holds_alternative<Zero>(*node_); }

  Vec4 operator()(const PointS3& p) const;

  /// Upper bound on |X| over S^3 (exact for Seifert, sampled for tubes).
  double speed_bound() const;
  std::string describe() const;

 private:
  explicit FieldSpec(Variant v) : node_(std::make_shared<const Variant>(std::move(v))) {}
  std::shared_ptr<const Variant> node_;
};

inline Vec4 eval_field(const FieldSpec& spec, const PointS3& p) { return spec(p); }

inline Vec4 tube_field(const TubeField& tube, const PointS3& p) { return tube(p); }

}  // namespace trunk
