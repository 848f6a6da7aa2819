#pragma once

#include "circlelab/circle_domain.hpp"

namespace circlelab {

// Both sides of  ∫_{f(E)} |Dg|^2 dΣ = Σ(E)  for g = f^{-1}.
struct ConformalityResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  long evaluations = 0;
};

// E = a cap inside the domain. f(E) is integrated in polar coordinates about
// f(center): Gauss-Legendre in the radius, trapezoid in the angle, with the
// boundary radius found by bisection on the inverse map.
ConformalityResult conformality_disk_check(const CircleDomainMap& m, const Cap& e, int radial_nodes = 24,
                                           int angular_nodes = 96, Exec exec = Exec::parallel);

struct DomainQuadratureConfig {
  // Base lat-long grid in (cos theta, phi), where dΣ = du dphi.
  int base_u = 8;
  int base_phi = 16;
  int max_depth = 4;
  // Absolute error target for the whole sphere.
  double tolerance = 1e-4;
};

// E = the whole domain. The left side integrates over the sphere minus the
// output disks with cells refined near the output circles and wherever the
// integrand is rough.
ConformalityResult conformality_domain_check(const CircleDomainMap& m, const DomainQuadratureConfig& config = {},
                                             Exec exec = Exec::parallel);

// Σ of the domain: 4π minus the areas of the input continua.
double domain_area(const Packing& p);

}  // namespace circlelab
