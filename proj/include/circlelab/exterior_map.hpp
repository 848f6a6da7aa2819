#pragma once

#include <span>
#include <vector>

#include "circlelab/sphere.hpp"

namespace circlelab {

struct CircleFit {
  Circle circle;
  // max | |w - c| - r | / r over the samples
  double residual = 0.0;
};

// Algebraic (Kasa) fit refined by Gauss-Newton on the geometric distance.
CircleFit fit_circle(std::span<const Complex> points);

struct ExteriorMapConfig {
  int degree = 32;
  double max_condition = 1e12;
};

// Conformal map of the exterior of a Jordan curve onto the exterior of the
// circle |w| = capacity(), normalized by phi(z) = z + O(1) at infinity:
//
//   phi(z) = (z - c) exp(sum_k g_k (rho / (z - c))^k).
//
// Only meaningful outside the curve.
class ExteriorMap {
 public:
  ExteriorMap() = default;
  ExteriorMap(Complex center, double scale, std::vector<Complex> g, double capacity);

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;
  // Damped Newton; throws NumericalError on failure.
  Complex inverse(Complex w) const;

  Complex center() const { return center_; }
  double scale() const { return scale_; }
  double capacity() const { return capacity_; }
  const std::vector<Complex>& log_coefficients() const { return g_; }
  int degree() const { return static_cast<int>(g_.size()); }

  // First `count` coefficients of phi(z) = a_1 z + a_0 + a_{-1}/z + ...,
  // returned as {a_1, a_0, a_{-1}, ...}, expanded around z = 0.
  std::vector<Complex> laurent_coefficients(int count) const;

  // Diagnostics of the fit, zero for a map built from coefficients.
  double fit_residual = 0.0;
  double condition = 0.0;

 private:
  Complex center_{};
  double scale_ = 1.0;
  std::vector<Complex> g_;
  double capacity_ = 1.0;
};

// Least-squares fit from ordered samples of a closed curve. Requires
// samples.size() >= 4 * degree. Throws DomainError for degenerate curves and
// NumericalError when the system is ill conditioned.
ExteriorMap fit_exterior_map(std::span<const Complex> samples, const ExteriorMapConfig& config = {});

// A point inside the closed polygon through the samples, far from its boundary.
Complex interior_point(std::span<const Complex> samples);

}  // namespace circlelab
