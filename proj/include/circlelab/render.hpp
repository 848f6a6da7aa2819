#pragma once

#include <string>
#include <vector>

#include "circlelab/circle_domain.hpp"
#include "circlelab/modulus.hpp"
#include "circlelab/sequence.hpp"

namespace circlelab {

struct RenderConfig {
  // Panel width in pixels; the height follows the view aspect.
  int panel_width = 480;
  // Relative margin around the finite parts of the drawn continua.
  double margin = 0.1;
};

// Chart box of the finite parts of all given continua with margin, or
// [-1, 1]^2 when there are none.
Window view_of(const std::vector<const std::vector<PeripheralContinuum>*>& sets, double margin = 0.1);

// Single panel: frame, filled disks and polygons, punctures as crosses.
std::string render_svg(const std::vector<PeripheralContinuum>& continua, const Window& view,
                       const RenderConfig& config = {});
// Input packing and circle domain side by side.
std::string render_map_svg(const CircleDomainMap& m, const RenderConfig& config = {});
// One side-by-side figure per stage with shared views, written as
// <stem>_n<NNN>.svg next to `stem`. Returns the paths in stage order.
std::vector<std::string> render_sequence(const SequenceReport& r, const std::string& stem,
                                         const RenderConfig& config = {});

}  // namespace circlelab
