#pragma once

#include <span>
#include <vector>

#include "circlelab/sphere.hpp"

namespace circlelab {

// Geodesic zipper map of the exterior of the closed curve through `samples`
// onto the exterior of the circle |w| = capacity(), with S(z) = z + O(1) at
// infinity. The curve is interpolated by hyperbolic geodesics of the
// intermediate half planes, so corners need no special treatment.
class ZipperMap {
 public:
  ZipperMap() = default;
  // Throws DomainError for fewer than 4 samples and NumericalError when a
  // sample leaves the half plane during zipping.
  explicit ZipperMap(std::span<const Complex> samples);

  SpherePoint operator()(const SpherePoint& z) const;
  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;
  SpherePoint inverse(const SpherePoint& w) const;
  Complex inverse(Complex w) const;

  double capacity() const;
  // Counterclockwise samples the map was built from.
  const std::vector<Complex>& samples() const { return samples_; }

 private:
  struct Slit {
    double a = 0.0, b = 0.0;
  };
  Complex open(Complex z) const;
  Complex close(Complex v) const;

  std::vector<Complex> samples_;
  std::vector<Slit> slits_;
  double zeta0_ = 0.0;
  bool zeta0_infinite_ = true;
  Complex q_{};      // image of infinity before the final Mobius step
  Complex scale_{};  // A with S = M / A
  int side_ = 1;
};

}  // namespace circlelab
