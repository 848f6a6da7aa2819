#pragma once

#include <array>
#include <cstddef>
#include <variant>
#include <vector>

#include "circlelab/errors.hpp"
#include "circlelab/exterior_map.hpp"
#include "circlelab/kernels.hpp"
#include "circlelab/packing.hpp"
#include "circlelab/zipper.hpp"

namespace circlelab {

struct KoebeConfig {
  // Starting Laurent degree, doubled while the fit residual exceeds
  // tolerance / 4 and 4 * degree <= samples.
  int degree = 32;
  int samples = 256;
  // Sample grading toward polygon vertices.
  double grading = 2.0;
  double tolerance = 1e-6;
  int max_sweeps = 80;
  std::size_t component_cap = 64;
  // First visit of a polygon uses the zipper instead of a Laurent fit.
  bool zipper_for_polygons = true;
  Exec exec = Exec::parallel;
};

struct KoebeIterationReport {
  // Max circularity residual after each sweep.
  std::vector<double> residuals;
  int sweeps = 0;
  bool converged = false;
  double tolerance = 0.0;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, KoebeIterationReport report)
      : NumericalError(what), report_(std::move(report)) {}
  const KoebeIterationReport& report() const { return report_; }

 private:
  KoebeIterationReport report_;
};

using StageMap = std::variant<MobiusTransform, ExteriorMap, ZipperMap>;

// One elementary map of the chain. component is -1 for normalization maps.
struct Stage {
  int component = -1;
  StageMap map;
};

SpherePoint apply_stage(const StageMap& s, const SpherePoint& z);
SpherePoint invert_stage(const StageMap& s, const SpherePoint& w);
double stage_spherical_derivative(const StageMap& s, const SpherePoint& z);
// Same, with the image fz of z already known.
double stage_spherical_derivative(const StageMap& s, const SpherePoint& z, const SpherePoint& fz);

// The normalized conformal map f : Y -> X from the complement of a packing
// onto a circle domain, stored as a chain of elementary maps.
class CircleDomainMap {
 public:
  CircleDomainMap() = default;
  CircleDomainMap(Packing input, std::array<SpherePoint, 3> normalization, std::vector<Stage> stages,
                  std::vector<PeripheralContinuum> outputs, KoebeIterationReport report);

  // The map given by a single Mobius transform; outputs are the images of
  // the input continua.
  static CircleDomainMap from_mobius(const Packing& input, const MobiusTransform& t);

  // Throws DomainError for points in the interior of an input continuum
  // (resp. an output disk).
  SpherePoint operator()(const SpherePoint& z) const;
  SpherePoint inverse(const SpherePoint& w) const;
  // |Df|(z), the product of the stage derivatives.
  double spherical_derivative(const SpherePoint& z) const;
  // |Dg|(w) for g = f^{-1}.
  double inverse_spherical_derivative(const SpherePoint& w) const;

  // Chain evaluation without the domain checks.
  SpherePoint evaluate_unchecked(const SpherePoint& z) const;
  SpherePoint inverse_unchecked(const SpherePoint& w) const;
  double inverse_spherical_derivative_unchecked(const SpherePoint& w) const;

  bool in_domain(const SpherePoint& z) const;
  bool in_image(const SpherePoint& w) const;

  const Packing& input() const { return input_; }
  const std::vector<PeripheralContinuum>& outputs() const { return outputs_; }
  Packing output_packing() const;
  const std::vector<Stage>& stages() const { return stages_; }
  const std::array<SpherePoint, 3>& normalization() const { return normalization_; }
  const KoebeIterationReport& report() const { return report_; }

 private:
  Packing input_;
  std::array<SpherePoint, 3> normalization_;
  std::vector<Stage> stages_;
  std::vector<PeripheralContinuum> outputs_;
  KoebeIterationReport report_;
};

// Koebe iteration on the first n continua of P, normalized by
// f(zeta_inf) = inf, f(zeta_0) = 0, f(zeta_1) = 1. Components are visited in
// index order; point components are carried as punctures. Throws
// ConvergenceError after max_sweeps and NumericalError on collisions.
CircleDomainMap koebe_iterate(const Packing& p, std::size_t n, const SpherePoint& zeta_inf,
                              const SpherePoint& zeta_0, const SpherePoint& zeta_1, const KoebeConfig& config = {});

// Image set of E: images of the samples outside the continua, plus the
// output circles of the touched components.
struct PushedSet {
  std::vector<SpherePoint> points;
  std::vector<int> components;  // indices into CircleDomainMap::outputs()
};
PushedSet pushforward_set(const CircleDomainMap& m, const std::vector<SpherePoint>& samples,
                          const std::vector<int>& touched);
// Spherical diameter of a pushed set, with circles sampled at `circle_samples` points.
double pushed_diameter(const CircleDomainMap& m, const PushedSet& s, int circle_samples = 256);

}  // namespace circlelab
