#include "circlelab/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "circlelab/errors.hpp"

namespace circlelab {

namespace {

constexpr double kPi = std::numbers::pi;

double orient(Complex a, Complex b, Complex c) {
  return (b.real() - a.real()) * (c.imag() - a.imag()) - (b.imag() - a.imag()) * (c.real() - a.real());
}

bool on_segment(Complex a, Complex b, Complex p) {
  return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
         std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

double triangle_area(const Vec3& o, const Vec3& a, const Vec3& b) {
  return 2.0 * std::atan2(o.dot(a.cross(b)), 1.0 + o.dot(a) + a.dot(b) + b.dot(o));
}

}  // namespace

double Vec3::norm() const { return std::sqrt(dot(*this)); }

Vec3 Vec3::normalized() const {
  const double n = norm();
  return n > 0.0 ? (*this) * (1.0 / n) : *this;
}

SpherePoint SpherePoint::infinity() {
  SpherePoint p;
  p.infinite_ = true;
  return p;
}

SpherePoint SpherePoint::from_unit_vector(const Vec3& v) {
  const Vec3 u = v.normalized();
  if (u.z <= 0.0) return SpherePoint(Complex(u.x, u.y) / (1.0 - u.z));
  const double rho2 = u.x * u.x + u.y * u.y;
  if (rho2 == 0.0) return infinity();
  return SpherePoint(Complex(u.x, u.y) * (1.0 + u.z) / rho2);
}

Complex SpherePoint::value() const {
  if (infinite_) throw DomainError("chart value requested at infinity");
  return value_;
}

Vec3 SpherePoint::to_unit_vector() const {
  if (infinite_) return {0.0, 0.0, 1.0};
  const double n2 = std::norm(value_);
  const double s = 1.0 / (1.0 + n2);
  return {2.0 * value_.real() * s, 2.0 * value_.imag() * s, (n2 - 1.0) * s};
}

double spherical_distance(const SpherePoint& a, const SpherePoint& b) {
  if (a.is_infinity() && b.is_infinity()) return 0.0;
  if (a.is_infinity()) return 2.0 * std::atan2(1.0, std::abs(b.value()));
  if (b.is_infinity()) return 2.0 * std::atan2(1.0, std::abs(a.value()));
  const Complex za = a.value(), zb = b.value();
  return 2.0 * std::atan2(std::abs(za - zb), std::abs(1.0 + za * std::conj(zb)));
}

double chordal_distance(const SpherePoint& a, const SpherePoint& b) {
  if (a.is_infinity() && b.is_infinity()) return 0.0;
  if (a.is_infinity()) return 2.0 / std::sqrt(1.0 + std::norm(b.value()));
  if (b.is_infinity()) return 2.0 / std::sqrt(1.0 + std::norm(a.value()));
  const Complex za = a.value(), zb = b.value();
  return 2.0 * std::abs(za - zb) / std::sqrt((1.0 + std::norm(za)) * (1.0 + std::norm(zb)));
}

double conformal_factor(Complex z) { return 2.0 / (1.0 + std::norm(z)); }

double area_density(Complex z) {
  const double l = conformal_factor(z);
  return l * l;
}

double spherical_segment_length(Complex p, Complex q) {
  const Complex d = q - p;
  const double a = std::norm(d);
  if (a == 0.0) return 0.0;
  const double b = 2.0 * (p.real() * d.real() + p.imag() * d.imag());
  const double c = 1.0 + std::norm(p);
  const double s = std::sqrt(std::max(4.0 * a * c - b * b, 0.0));
  return 2.0 * std::sqrt(a) * 2.0 / s * (std::atan((2.0 * a + b) / s) - std::atan(b / s));
}

double spherical_cap_area(double radius) { return 2.0 * kPi * (1.0 - std::cos(radius)); }

bool cap_contains(const Cap& cap, const SpherePoint& p, double slack) {
  return spherical_distance(cap.center, p) <= cap.radius + slack;
}

Cap cap_from_circle(const Circle& circle) {
  if (!(circle.radius > 0.0)) throw DomainError("circle radius must be positive");
  const double m = std::abs(circle.center);
  const Complex dir = m > 0.0 ? circle.center / m : Complex(1.0);
  const double a1 = std::atan(m - circle.radius);
  const double a2 = std::atan(m + circle.radius);
  const double center_half = 0.5 * (a1 + a2);
  return {SpherePoint(std::tan(center_half) * dir), a2 - a1};
}

std::optional<Circle> circle_from_cap(const Cap& cap) {
  if (cap.center.is_infinity()) return std::nullopt;
  const Complex c = cap.center.value();
  const double m = std::abs(c);
  const double phi = 2.0 * std::atan(m);
  if (phi + cap.radius >= kPi) return std::nullopt;
  const Complex dir = m > 0.0 ? c / m : Complex(1.0);
  const double t1 = std::tan(0.5 * (phi - cap.radius));
  const double t2 = std::tan(0.5 * (phi + cap.radius));
  return Circle{0.5 * (t1 + t2) * dir, 0.5 * (t2 - t1)};
}

double signed_chart_area(std::span<const Complex> v) {
  double s = 0.0;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex a = v[i], b = v[(i + 1) % n];
    s += a.real() * b.imag() - a.imag() * b.real();
  }
  return 0.5 * s;
}

bool segments_intersect(Complex a, Complex b, Complex c, Complex d) {
  const double o1 = orient(a, b, c), o2 = orient(a, b, d);
  const double o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

bool polygon_is_simple(std::span<const Complex> v) {
  const std::size_t n = v.size();
  if (n < 3) return false;
  if (signed_chart_area(v) == 0.0) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] == v[(i + 1) % n]) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return false;
    }
  }
  return true;
}

double point_segment_distance(Complex p, Complex a, Complex b) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

bool polygon_contains(std::span<const Complex> v, Complex z) {
  const std::size_t n = v.size();
  double scale = 0.0;
  for (const Complex& p : v) scale = std::max(scale, std::abs(p));
  const double eps = 1e-14 * std::max(scale, 1.0);
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Complex a = v[j], b = v[i];
    if (point_segment_distance(z, a, b) <= eps) return true;
    if ((b.imag() > z.imag()) != (a.imag() > z.imag())) {
      const double x = a.real() + (z.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
      if (z.real() < x) inside = !inside;
    }
  }
  return inside;
}

double signed_geodesic_polygon_area(std::span<const Vec3> v) {
  Vec3 o;
  for (const Vec3& p : v) o = o + p;
  if (o.norm() < 1e-8) o = v.front();
  o = o.normalized();
  double s = 0.0;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) s += triangle_area(o, v[i], v[(i + 1) % n]);
  return s;
}

double spherical_polygon_area(std::span<const Complex> chart_vertices, double tol) {
  if (!polygon_is_simple(chart_vertices)) throw DomainError("polygon is not simple");
  const double orientation = signed_chart_area(chart_vertices) > 0.0 ? 1.0 : -1.0;
  const std::size_t n = chart_vertices.size();
  auto area_at = [&](int level) {
    const std::size_t pieces = std::size_t{1} << level;
    std::vector<Vec3> pts;
    pts.reserve(n * pieces);
    for (std::size_t i = 0; i < n; ++i) {
      const Complex a = chart_vertices[i], b = chart_vertices[(i + 1) % n];
      for (std::size_t k = 0; k < pieces; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(pieces);
        pts.push_back(SpherePoint(a + t * (b - a)).to_unit_vector());
      }
    }
    // The chart is orientation reversing with respect to the outward normal.
    double area = -orientation * signed_geodesic_polygon_area(pts);
    if (area < 0.0) area += 4.0 * kPi;
    return area;
  };
  double prev = area_at(1);
  double prev_extrap = prev;
  for (int level = 2; level <= 16; ++level) {
    const double cur = area_at(level);
    const double extrap = (4.0 * cur - prev) / 3.0;
    if (level >= 3 && std::abs(extrap - prev_extrap) <= tol * std::max(1.0, std::abs(extrap))) return extrap;
    prev = cur;
    prev_extrap = extrap;
  }
  return prev_extrap;
}

MobiusTransform::MobiusTransform(Complex a, Complex b, Complex c, Complex d) {
  const Complex det = a * d - b * c;
  if (!(std::abs(det) > 1e-300) || !std::isfinite(std::abs(det))) throw DomainError("degenerate Mobius transform");
  const Complex s = std::sqrt(det);
  a_ = a / s;
  b_ = b / s;
  c_ = c / s;
  d_ = d / s;
}

MobiusTransform MobiusTransform::from_normalized(Complex a, Complex b, Complex c, Complex d) {
  if (!(std::abs(a * d - b * c - 1.0) < 1e-6)) throw DomainError("Mobius coefficients are not normalized");
  MobiusTransform t;
  t.a_ = a;
  t.b_ = b;
  t.c_ = c;
  t.d_ = d;
  return t;
}

MobiusTransform MobiusTransform::rotation_to(const SpherePoint& target) {
  if (target.is_infinity()) return inversion();
  const Complex c = target.value();
  return {1.0, c, -std::conj(c), 1.0};
}

MobiusTransform MobiusTransform::inversion() { return {0.0, -1.0, 1.0, 0.0}; }

SpherePoint MobiusTransform::operator()(const SpherePoint& z) const {
  if (z.is_infinity()) {
    if (c_ == Complex(0.0)) return SpherePoint::infinity();
    return SpherePoint(a_ / c_);
  }
  const Complex w = z.value();
  const Complex den = c_ * w + d_;
  if (den == Complex(0.0)) return SpherePoint::infinity();
  return SpherePoint((a_ * w + b_) / den);
}

Complex MobiusTransform::derivative(Complex z) const {
  const Complex den = c_ * z + d_;
  return 1.0 / (den * den);
}

double MobiusTransform::spherical_derivative(const SpherePoint& z) const {
  if (z.is_infinity()) return 1.0 / (std::norm(a_) + std::norm(c_));
  const Complex w = z.value();
  return (1.0 + std::norm(w)) / (std::norm(a_ * w + b_) + std::norm(c_ * w + d_));
}

MobiusTransform MobiusTransform::inverse() const { return {d_, -b_, -c_, a_}; }

MobiusTransform MobiusTransform::compose(const MobiusTransform& in) const {
  return {a_ * in.a_ + b_ * in.c_, a_ * in.b_ + b_ * in.d_, c_ * in.a_ + d_ * in.c_, c_ * in.b_ + d_ * in.d_};
}

SpherePoint MobiusTransform::pole() const {
  if (c_ == Complex(0.0)) return SpherePoint::infinity();
  return SpherePoint(-d_ / c_);
}

MobiusTransform mobius_normalize(const SpherePoint& zinf, const SpherePoint& z0, const SpherePoint& z1) {
  constexpr double kMin = 1e-12;
  if (spherical_distance(zinf, z0) < kMin || spherical_distance(zinf, z1) < kMin ||
      spherical_distance(z0, z1) < kMin)
    throw DomainError("normalization points must be distinct");
  if (zinf.is_infinity()) return {1.0, -z0.value(), 0.0, z1.value() - z0.value()};
  if (z0.is_infinity()) return {0.0, z1.value() - zinf.value(), 1.0, -zinf.value()};
  if (z1.is_infinity()) return {1.0, -z0.value(), 1.0, -zinf.value()};
  const Complex k1 = z1.value() - zinf.value();
  const Complex k2 = z1.value() - z0.value();
  return {k1, -z0.value() * k1, k2, -zinf.value() * k2};
}

double spherical_derivative(Complex z, Complex fz, Complex dfz) {
  return (1.0 + std::norm(z)) * std::abs(dfz) / (1.0 + std::norm(fz));
}

}  // namespace circlelab
