#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "circlelab/random.hpp"
#include "circlelab/sphere.hpp"

namespace testsupport {

using circlelab::Complex;
using circlelab::Rng;
using circlelab::SpherePoint;
using circlelab::Vec3;

inline constexpr double kPi = std::numbers::pi;

inline SpherePoint random_sphere_point(Rng& rng) {
  return SpherePoint::from_unit_vector({rng.normal(), rng.normal(), rng.normal()});
}

inline Complex random_disk_point(Rng& rng, double radius) {
  return std::polar(radius * std::sqrt(rng.uniform()), 2.0 * kPi * rng.uniform());
}

// Composite Simpson rule, n even.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Spherical area of a chart rectangle by tensor Simpson quadrature.
inline double rectangle_area(double x0, double y0, double x1, double y1, int n = 400) {
  return simpson(
      [&](double x) {
        return simpson([&](double y) { return 4.0 / std::pow(1.0 + x * x + y * y, 2); }, y0, y1, n);
      },
      x0, x1, n);
}

// Angle between unit vectors of two finite chart points.
inline double angle_oracle(Complex a, Complex b) {
  auto v = [](Complex z) {
    const double n = std::norm(z);
    return Vec3{2 * z.real() / (1 + n), 2 * z.imag() / (1 + n), (n - 1) / (1 + n)};
  };
  const Vec3 p = v(a), q = v(b);
  return std::atan2(p.cross(q).norm(), p.dot(q));
}

}  // namespace testsupport
