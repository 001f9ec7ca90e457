#include "curv/space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace curv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAntipodalTol = 1e-8;

double clamp01(double x) { return std::clamp(x, -1.0, 1.0); }

double wrap_angle(double phi) {
  // into [0, 2*pi)
  double w = std::fmod(phi, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  return w;
}

Point cross(const Point& a, const Point& b) {
  return Point(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
               a[0] * b[1] - a[1] * b[0]);
}

double minkowski(const Point& a, const Point& b) {
  return a[0] * b[0] - a[1] * b[1] - a[2] * b[2];
}

}  // namespace

double Weight::operator()(double x) const {
  switch (kind) {
    case Kind::constant:
      return scale;
    case Kind::sin_pow:
      return scale * std::pow(std::sin(x), power);
  }
  return scale;
}

ModelSpace::ModelSpace(SpaceKind kind, double k_ref, double n_ref)
    : kind_(std::move(kind)), k_ref_(k_ref), n_ref_(n_ref) {
  if (const auto* e = std::get_if<Euclidean>(&kind_)) {
    if (e->dim < 1 || e->dim > 3) throw DomainError("Euclidean dimension must be 1..3");
    ambient_dim_ = chart_dim_ = e->dim;
  } else if (const auto* w = std::get_if<WeightedInterval>(&kind_)) {
    if (!(w->a < w->b)) throw DomainError("weighted interval needs a < b");
    ambient_dim_ = chart_dim_ = 1;
  } else if (const auto* s = std::get_if<Sphere>(&kind_)) {
    if (s->dim != 2) throw DomainError("only the 2-sphere is implemented");
    if (!(s->radius > 0.0)) throw DomainError("sphere radius must be positive");
    ambient_dim_ = 3;
    chart_dim_ = 2;
  } else {
    const auto& h = std::get<Hyperbolic>(kind_);
    if (h.dim != 2) throw DomainError("only the hyperbolic plane is implemented");
    ambient_dim_ = 3;
    chart_dim_ = 2;
  }
}

bool ModelSpace::is_euclidean() const {
  return std::holds_alternative<Euclidean>(kind_) ||
         std::holds_alternative<WeightedInterval>(kind_);
}

std::string ModelSpace::kind_name() const {
  if (std::holds_alternative<Euclidean>(kind_)) return "euclidean";
  if (std::holds_alternative<WeightedInterval>(kind_)) return "weighted_interval";
  if (std::holds_alternative<Sphere>(kind_)) return "sphere";
  return "hyperbolic";
}

double ModelSpace::distance(const Point& p, const Point& q) const {
  if (p.dim() != ambient_dim_ || q.dim() != ambient_dim_)
    throw DomainError("distance: point dimension mismatch");
  if (is_euclidean()) return euclidean_dist(p, q);
  if (const auto* s = std::get_if<Sphere>(&kind_)) {
    // atan2 form is stable near 0 and pi
    const Point c = cross(p, q);
    const double angle = std::atan2(norm(c), dot(p, q));
    return s->radius * angle;
  }
  // 2*asinh(sqrt(-<p-q, p-q>_M)/2) avoids the acosh cancellation near d = 0
  const Point d(p[0] - q[0], p[1] - q[1], p[2] - q[2]);
  const double s2 = std::max(0.0, -minkowski(d, d));
  return 2.0 * std::asinh(0.5 * std::sqrt(s2));
}

Point ModelSpace::geodesic_point(const Point& p, const Point& q, double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("geodesic_point: t must lie in [0,1]");
  if (t == 0.0) return p;
  if (t == 1.0) return q;
  if (is_euclidean()) {
    Point r = p;
    for (int i = 0; i < p.dim(); ++i) r[i] = std::fma(t, q[i] - p[i], p[i]);
    return r;
  }
  if (const auto* s = std::get_if<Sphere>(&kind_)) {
    const Point c = cross(p, q);
    const double angle = std::atan2(norm(c), dot(p, q));
    if (angle >= kPi - kAntipodalTol)
      throw GeodesicError("geodesic between antipodal sphere points is not unique");
    if (angle < 1e-15) return p;
    const double sa = std::sin(angle);
    const double wp = std::sin((1.0 - t) * angle) / sa;
    const double wq = std::sin(t * angle) / sa;
    Point r(wp * p[0] + wq * q[0], wp * p[1] + wq * q[1], wp * p[2] + wq * q[2]);
    const double scale = s->radius / norm(r);
    for (int i = 0; i < 3; ++i) r[i] *= scale;
    return r;
  }
  const double d = distance(p, q);
  if (d < 1e-15) return p;
  const double sd = std::sinh(d);
  const double wp = std::sinh((1.0 - t) * d) / sd;
  const double wq = std::sinh(t * d) / sd;
  Point r(wp * p[0] + wq * q[0], wp * p[1] + wq * q[1], wp * p[2] + wq * q[2]);
  // re-project onto the hyperboloid to cancel rounding drift
  const double norm2 = minkowski(r, r);
  if (norm2 > 0.0) {
    const double scale = 1.0 / std::sqrt(norm2);
    for (int i = 0; i < 3; ++i) r[i] *= scale;
  }
  return r;
}

Point ModelSpace::chart_to_point(const Point& chart) const {
  if (chart.dim() != chart_dim_) throw DomainError("chart_to_point: dimension mismatch");
  if (is_euclidean()) return chart;
  if (const auto* s = std::get_if<Sphere>(&kind_)) {
    const double theta = chart[0], phi = chart[1];
    const double st = std::sin(theta);
    return Point(s->radius * st * std::cos(phi), s->radius * st * std::sin(phi),
                 s->radius * std::cos(theta));
  }
  const double rho = chart[0], phi = chart[1];
  return Point(std::cosh(rho), std::sinh(rho) * std::cos(phi),
               std::sinh(rho) * std::sin(phi));
}

Point ModelSpace::point_to_chart(const Point& p) const {
  if (p.dim() != ambient_dim_) throw DomainError("point_to_chart: dimension mismatch");
  if (is_euclidean()) return p;
  if (const auto* s = std::get_if<Sphere>(&kind_)) {
    const double theta = std::acos(clamp01(p[2] / s->radius));
    const double phi = wrap_angle(std::atan2(p[1], p[0]));
    return Point(theta, phi);
  }
  const double rho = std::acosh(std::max(1.0, p[0]));
  const double phi = wrap_angle(std::atan2(p[2], p[1]));
  return Point(rho, phi);
}

double ModelSpace::chart_density(const Point& chart) const {
  if (const auto* w = std::get_if<WeightedInterval>(&kind_)) return w->weight(chart[0]);
  if (const auto* s = std::get_if<Sphere>(&kind_))
    return s->radius * s->radius * std::sin(chart[0]);
  if (std::holds_alternative<Hyperbolic>(kind_)) return std::sinh(chart[0]);
  return 1.0;
}

void ModelSpace::validate_point(const Point& p) const {
  if (p.dim() != ambient_dim_) throw DomainError("point dimension mismatch");
  if (const auto* s = std::get_if<Sphere>(&kind_)) {
    if (std::abs(norm(p) - s->radius) > 1e-10 * s->radius)
      throw DomainError("point does not lie on the sphere");
  } else if (std::holds_alternative<Hyperbolic>(kind_)) {
    if (std::abs(minkowski(p, p) - 1.0) > 1e-10 || p[0] <= 0.0)
      throw DomainError("point does not lie on the hyperboloid");
  } else if (const auto* w = std::get_if<WeightedInterval>(&kind_)) {
    if (p[0] < w->a - 1e-12 || p[0] > w->b + 1e-12)
      throw DomainError("point outside the interval");
  }
}

}  // namespace curv
