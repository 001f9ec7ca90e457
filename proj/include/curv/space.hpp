#pragma once

#include <string>
#include <variant>

#include "curv/errors.hpp"
#include "curv/point.hpp"

namespace curv {

/// Weight function for the weighted-interval space.
struct Weight {
  enum class Kind { constant, sin_pow };
  Kind kind = Kind::constant;
  double power = 1.0;  // sin_pow: w(x) = sin(x)^power
  double scale = 1.0;

  double operator()(double x) const;
};

struct Euclidean {
  int dim = 2;  // 1..3
};

/// Interval [a,b] with the standard metric and measure w(x) dx.
struct WeightedInterval {
  double a = 0.0;
  double b = 1.0;
  Weight weight;
};

/// Round sphere of the given radius, chart = (polar angle, azimuth).
struct Sphere {
  int dim = 2;  // only the 2-sphere is implemented
  double radius = 1.0;
  double antipode_cap = 0.1;  // chart excludes points within this angle of the south pole
};

/// Hyperbolic plane, hyperboloid model, chart = (radial distance, azimuth).
struct Hyperbolic {
  int dim = 2;  // only the hyperbolic plane is implemented
};

using SpaceKind = std::variant<Euclidean, WeightedInterval, Sphere, Hyperbolic>;

/// A geodesic metric measure space with closed-form distance, unique-geodesic
/// evaluation and reference density. Curved spaces are handled in chart
/// coordinates for discretization and in ambient coordinates for geometry.
class ModelSpace {
 public:
  explicit ModelSpace(SpaceKind kind, double k_ref = 0.0, double n_ref = 0.0);

  int ambient_dim() const { return ambient_dim_; }
  int chart_dim() const { return chart_dim_; }
  bool is_euclidean() const;  // true also for weighted intervals (flat metric)
  const SpaceKind& kind() const { return kind_; }
  std::string kind_name() const;

  /// Reference curvature/dimension tags, for reporting only.
  double k_ref() const { return k_ref_; }
  double n_ref() const { return n_ref_; }

  double distance(const Point& p, const Point& q) const;

  /// Point at parameter t on the unique constant-speed geodesic from p to q.
  /// t = 0 and t = 1 return p and q exactly. Throws GeodesicError when the
  /// geodesic is not unique (antipodal pairs on the sphere).
  Point geodesic_point(const Point& p, const Point& q, double t) const;

  Point chart_to_point(const Point& chart) const;
  Point point_to_chart(const Point& p) const;

  /// Reference density times the metric volume element, in chart coordinates.
  double chart_density(const Point& chart) const;

  /// Checks the point constraints (sphere radius, hyperboloid normalization)
  /// within 1e-10 relative; throws DomainError on violation.
  void validate_point(const Point& p) const;

 private:
  SpaceKind kind_;
  int ambient_dim_;
  int chart_dim_;
  double k_ref_;
  double n_ref_;
};

}  // namespace curv
