#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "circlelab/packing.hpp"
#include "circlelab/sphere.hpp"

namespace circlelab {

// Spherical area of the intersection of two caps.
double cap_intersection_area(const Cap& a, const Cap& b);

// Spherical area of (chart polygon) ∩ (closed chart disk), exact up to
// Gauss-Legendre quadrature on the circular arcs.
double polygon_disk_area(std::span<const Complex> polygon, const Circle& disk);

// Spherical area of the region bounded by a simple chart polygon (Green's
// formula with exact edge integrals).
double polygon_area_green(std::span<const Complex> polygon);

// Σ(B(x, r) ∩ K) for the open geodesic ball of radius r.
double ball_intersection_area(const PeripheralContinuum& k, const SpherePoint& x, double r);

// H^1{s in (0, r) : K meets the geodesic circle S(x, s)} for connected K.
double radial_hit_measure(const PeripheralContinuum& k, const SpherePoint& x, double r);

// Piecewise-constant density sum_j values[j] * 1_{caps[j]} and the
// L-Lipschitz function psi = L * sigma(., x0).
struct CoareaInstance {
  SpherePoint x0;
  double lipschitz = 1.0;
  std::vector<Cap> caps;
  std::vector<double> values;
};

struct CoareaResult {
  double lhs = 0.0;       // integral over t of the density integrated on psi^{-1}(t)
  double integral = 0.0;  // integral of the density against Σ
  double bound = 0.0;     // (4L/pi) * integral
  bool holds = false;
};

CoareaInstance random_coarea_instance(std::uint64_t seed, int caps = 6);
CoareaResult coarea_check(const CoareaInstance& instance, int panels = 4096);

// ||sum a_j 1_{balls_j}||_2 / ||sum a_j 1_{cores_j}||_2 for disjoint cores.
double ball_core_ratio(std::span<const Cap> balls, std::span<const Cap> cores, std::span<const double> weights);

}  // namespace circlelab
