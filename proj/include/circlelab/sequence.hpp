#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "circlelab/circle_domain.hpp"
#include "circlelab/conformality.hpp"
#include "circlelab/fatness.hpp"

namespace circlelab {

struct SequenceConfig {
  std::vector<std::size_t> ns{1, 5, 10, 20, 40};
  // zeta_inf, zeta_0, zeta_1.
  std::array<SpherePoint, 3> normalization{SpherePoint::infinity(), SpherePoint(Complex(0.0, 0.0)),
                                           SpherePoint(Complex(1.0, 0.0))};
  KoebeConfig koebe;
  FatnessConfig fatness;
  DomainQuadratureConfig quadrature{.max_depth = 3, .tolerance = 1e-3};
  // Seed of the upper-gradient probe curves.
  std::uint64_t seed = 1;
  int curves = 50;
  // Relative quadrature tolerance of the upper-gradient checks.
  double curve_tolerance = 0.02;
  // Chart diameters of the equicontinuity table, decreasing by halves.
  std::vector<double> deltas{0.4, 0.2, 0.1, 0.05};
  Exec exec = Exec::parallel;
};

// One sampled transboundary upper-gradient inequality
//   σ(g(γ(a)), g(γ(b))) <= ∫_γ |Dg| ds + Σ_{i touched} diam(q_i)
// for a chart polyline γ in the circle domain.
struct UpperGradientCheck {
  double lhs = 0.0;
  double length = 0.0;  // ∫_γ |Dg| ds over the part outside the disks
  double jumps = 0.0;   // Σ diam(q_i) over the disks γ meets
  double rhs = 0.0;
  std::vector<int> touched;
  bool pass = false;
  bool skipped = false;
  std::string note;
};

// ε(δ): the largest image diameter of a grid square of chart diameter δ.
struct EquicontinuityRow {
  double delta = 0.0;
  double epsilon = 0.0;
  int sets = 0;
};

struct SequenceStage {
  std::size_t n = 0;
  bool converged = false;
  std::string error;
  int sweeps = 0;
  double residual = 0.0;
  // Output continua p_{i,n}, i < n.
  std::vector<PeripheralContinuum> outputs;
  // Minimum spherical distance over pairs of disks, all and among the first
  // `fixed_count` indices.
  double min_distance = 0.0;
  double min_distance_fixed = 0.0;
  // tau_hat per output (+inf for points) and of the cap of the same radius
  // centered at 0.
  std::vector<double> fatness;
  std::vector<double> fatness_baseline;
  bool points_match = false;
  // (Σ diam(p_{i,n})^2)^(1/2), spherical.
  double l2_diameters = 0.0;
  // ∫ |Dg_n|^2 dΣ over the circle domain and Σ(Y_n).
  double derivative_l2 = 0.0;
  double domain_area = 0.0;
  std::vector<UpperGradientCheck> checks;
  std::vector<EquicontinuityRow> equicontinuity;
};

struct SequenceReport {
  Packing input;
  SequenceConfig config;
  std::vector<SequenceStage> stages;
  // The maps, absent for stages that failed.
  std::vector<std::optional<CircleDomainMap>> maps;
  // hausdorff[i][a][b] = d_H(p_{i,n_a}, p_{i,n_b}), NaN unless both exist.
  std::vector<std::vector<std::vector<double>>> hausdorff;
  // deviation[i][a] = sup_{b > a} hausdorff[i][a][b], NaN without data.
  std::vector<std::vector<double>> deviation;
  std::size_t fixed_count = 0;
  std::string caveat =
      "finitely many n: full-sequence and subsequential convergence cannot be distinguished";
};

// Runs koebe_iterate for every n and collects the diagnostics. Failures are
// recorded per stage; only bad arguments throw.
SequenceReport run_sequence(const Packing& p, const SequenceConfig& config = {});

// Upper-gradient checks of the map along chart polylines of its circle domain.
std::vector<UpperGradientCheck> upper_gradient_spot_check(const CircleDomainMap& m,
                                                          const std::vector<std::vector<Complex>>& curves,
                                                          double tolerance = 0.02, int steps_per_unit = 50,
                                                          Exec exec = Exec::parallel);

// Seeded polylines with endpoints in the circle domain: straight chords,
// bent chords and one constant curve.
std::vector<std::vector<Complex>> random_curves(const CircleDomainMap& m, std::uint64_t seed, int count);

struct NondegeneracyTable {
  std::vector<std::size_t> n;
  std::vector<double> diameter;
  double minimum = 0.0;
  std::size_t witness_n = 0;
};

// diam f_n^*(E) for a set E given by samples and touched input indices, over
// the converged stages whose map is defined on all of them.
NondegeneracyTable nondegeneracy_table(const SequenceReport& r, const std::vector<SpherePoint>& samples,
                                       const std::vector<int>& touched);
// E = q_i: diam p_{i,n} over the converged stages with n > i.
NondegeneracyTable nondegeneracy_table(const SequenceReport& r, std::size_t i);

// max over probes x of #{i : x in the closed continuum i}.
int clustering_count(const std::vector<PeripheralContinuum>& continua, const std::vector<SpherePoint>& probes);
// Lat-long probe grid with `rows` latitude rows.
std::vector<SpherePoint> probe_grid(int rows);
// Centers and boundary samples of the continua.
std::vector<SpherePoint> vertex_probes(const std::vector<PeripheralContinuum>& continua, int per_continuum = 16);

// ε(δ) on nested grids over the chart box around the input continua.
std::vector<EquicontinuityRow> equicontinuity_table(const CircleDomainMap& m, const std::vector<double>& deltas,
                                                    Exec exec = Exec::parallel);

}  // namespace circlelab
