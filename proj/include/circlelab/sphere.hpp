#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace circlelab {

using Complex = std::complex<double>;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const { return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x}; }
  double norm() const;
  Vec3 normalized() const;
};

// A point of the Riemann sphere, stored as a chart value or the point at
// infinity. The chart is the stereographic projection from the north pole.
class SpherePoint {
 public:
  SpherePoint() = default;
  SpherePoint(Complex z) : value_(z) {}  // NOLINT: implicit by intent

  static SpherePoint infinity();
  static SpherePoint from_unit_vector(const Vec3& v);

  bool is_infinity() const { return infinite_; }
  // Chart value; throws DomainError at infinity.
  Complex value() const;
  Vec3 to_unit_vector() const;

  bool operator==(const SpherePoint& o) const {
    return infinite_ == o.infinite_ && (infinite_ || value_ == o.value_);
  }

 private:
  Complex value_{};
  bool infinite_ = false;
};

// Geodesic distance on the unit sphere, in [0, pi].
double spherical_distance(const SpherePoint& a, const SpherePoint& b);
// Chordal distance |P(a) - P(b)| in R^3, in [0, 2].
double chordal_distance(const SpherePoint& a, const SpherePoint& b);

// Length element of the spherical metric in the chart: 2 / (1 + |z|^2).
double conformal_factor(Complex z);
double area_density(Complex z);

// Spherical length of the chart segment [a, b] (Gauss-Legendre).
double spherical_segment_length(Complex a, Complex b);

// Closed cap {x : sigma(x, center) <= radius}.
struct Cap {
  SpherePoint center;
  double radius = 0.0;
};

// Euclidean circle in the chart.
struct Circle {
  Complex center;
  double radius = 0.0;
};

double spherical_cap_area(double radius);
bool cap_contains(const Cap& cap, const SpherePoint& p, double slack = 0.0);

// The cap whose chart image is the closed disk bounded by `circle`.
Cap cap_from_circle(const Circle& circle);
// Chart disk of a cap, or nothing when the cap contains infinity.
std::optional<Circle> circle_from_cap(const Cap& cap);

// Area of the region bounded by a simple chart polygon with straight chart
// edges. Throws DomainError when the polygon self-intersects.
double spherical_polygon_area(std::span<const Complex> chart_vertices, double tol = 1e-13);

// Spherical area of a geodesic polygon given by unit vectors, with the sign
// taken relative to the outward normal.
double signed_geodesic_polygon_area(std::span<const Vec3> vertices);

// Simple-polygon helpers in the chart.
double signed_chart_area(std::span<const Complex> vertices);
bool polygon_is_simple(std::span<const Complex> vertices);
bool segments_intersect(Complex a, Complex b, Complex c, Complex d);
// Closed point-in-polygon test.
bool polygon_contains(std::span<const Complex> vertices, Complex z);
double point_segment_distance(Complex p, Complex a, Complex b);

// Linear fractional map z -> (a z + b)/(c z + d), stored with ad - bc = 1.
class MobiusTransform {
 public:
  MobiusTransform() = default;
  MobiusTransform(Complex a, Complex b, Complex c, Complex d);

  static MobiusTransform identity() { return {}; }
  // Coefficients already normalized to ad - bc = 1, stored as given.
  static MobiusTransform from_normalized(Complex a, Complex b, Complex c, Complex d);
  // Rotation of the sphere taking 0 to `target`.
  static MobiusTransform rotation_to(const SpherePoint& target);
  // w -> -1/w composed as needed: a rotation swapping 0 and infinity.
  static MobiusTransform inversion();

  SpherePoint operator()(const SpherePoint& z) const;
  // Complex derivative at a finite non-pole point.
  Complex derivative(Complex z) const;
  double spherical_derivative(const SpherePoint& z) const;

  MobiusTransform inverse() const;
  // (*this) o inner
  MobiusTransform compose(const MobiusTransform& inner) const;

  Complex a() const { return a_; }
  Complex b() const { return b_; }
  Complex c() const { return c_; }
  Complex d() const { return d_; }
  // Preimage of infinity.
  SpherePoint pole() const;

 private:
  Complex a_{1.0}, b_{0.0}, c_{0.0}, d_{1.0};
};

// Map sending zeta_inf -> infinity, zeta_0 -> 0, zeta_1 -> 1.
MobiusTransform mobius_normalize(const SpherePoint& zeta_inf, const SpherePoint& zeta_0,
                                 const SpherePoint& zeta_1);

// |Df|(z) = (1 + |z|^2) |f'(z)| / (1 + |f(z)|^2).
double spherical_derivative(Complex z, Complex fz, Complex dfz);

}  // namespace circlelab
