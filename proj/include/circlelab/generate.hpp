#pragma once

#include <cstdint>

#include "circlelab/packing.hpp"

namespace circlelab {

// Sierpinski carpet holes in the unit square through `level`, ordered by
// level and then row-major. With `punctures` > 0 the centers of the first
// level+1 holes are appended as point continua.
Packing carpet(int level, int punctures = 0);

// Number of holes of carpet(level).
std::size_t carpet_count(int level);

struct RandomPackingConfig {
  double first_diameter = 0.25;
  // Centers are placed in the chart disk of this radius.
  double region_radius = 1.5;
  // Minimal gap between enclosing circles, relative to the smaller radius.
  double gap = 0.15;
  int max_retries = 20000;
};

// Squares and disks with Euclidean diameter first_diameter * i^(-s).
Packing random_l2(std::uint64_t seed, double s, int count, const RandomPackingConfig& config = {});

// Random disks with diameters first_diameter * i^(-1).
Packing round_packing(std::uint64_t seed, int count, const RandomPackingConfig& config = {});

}  // namespace circlelab
