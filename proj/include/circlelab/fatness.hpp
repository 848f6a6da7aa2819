#pragma once

#include <cstdint>

#include "circlelab/kernels.hpp"
#include "circlelab/packing.hpp"
#include "circlelab/random.hpp"

namespace circlelab {

struct FatnessConfig {
  int boundary_samples = 48;
  int interior_samples = 16;
  int radii_per_octave = 2;
  int octaves = 10;
};

struct FatnessEstimate {
  // +inf for points, which are fat for every constant.
  double tau_hat = 0.0;
  bool degenerate = false;
  int x_samples = 0;
  int r_samples = 0;
  int evaluations = 0;
  SpherePoint witness_x;
  double witness_r = 0.0;
};

// Minimum of Σ(B(x,r) ∩ K) / r^2 over sampled x in K and radii r on a
// geometric grid below the farthest-point distance, so that B(x, r) never
// contains K. The minimum is an upper bound for the fatness constant.
FatnessEstimate estimate_fatness(const PeripheralContinuum& k, const FatnessConfig& config = {},
                                 Exec exec = Exec::parallel);

// Points of K used as ball centers by estimate_fatness.
std::vector<SpherePoint> fatness_centers(const PeripheralContinuum& k, const FatnessConfig& config);

// Random Mobius map whose coefficients have modulus at most `bound`, with
// determinant bounded away from zero.
MobiusTransform random_mobius(Rng& rng, double bound = 2.0);

struct MobiusFatnessSurvey {
  int maps = 0;
  int rejected = 0;
  double min_tau = 0.0;
  std::vector<double> taus;
};

// Fatness of T(k) for `maps` random Mobius maps. Maps whose pole lies within
// spherical distance `pole_margin` of k, or whose image has diameter close to
// pi, are redrawn.
MobiusFatnessSurvey mobius_fatness_survey(const PeripheralContinuum& k, std::uint64_t seed, int maps,
                                          const FatnessConfig& config = {}, double pole_margin = 0.3,
                                          Exec exec = Exec::parallel);

}  // namespace circlelab
