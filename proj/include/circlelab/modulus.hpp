#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "circlelab/circle_domain.hpp"
#include "circlelab/kernels.hpp"
#include "circlelab/packing.hpp"

namespace circlelab {

enum class ModulusMode { plain, transboundary };

const char* mode_name(ModulusMode mode);

// Axis-parallel rectangle in the chart.
struct Window {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool contains(Complex z) const { return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1; }
};

// Cell labels. Non-negative labels are super-node indices.
inline constexpr int kFreeCell = -1;
inline constexpr int kSourceCell = -2;
inline constexpr int kSinkCell = -3;
inline constexpr int kBlockedCell = -4;

// The curve family Γ(E, F; Ω) in the complement of a packing: curves in the
// window joining E to F and avoiding the forbidden continua.
struct ModulusInstance {
  Window window;
  Packing packing;
  std::vector<PeripheralContinuum> e;
  std::vector<PeripheralContinuum> f;
  // Packing indices the curves must avoid.
  std::vector<std::size_t> forbidden;
  ModulusMode mode = ModulusMode::transboundary;

  // Label of a point: kBlockedCell, kSourceCell, kSinkCell, a packing index,
  // or kFreeCell, by that priority. Point continua and, in plain mode, all
  // continua classify as free.
  int classify(const SpherePoint& z) const;
};

struct DiscretizeConfig {
  // Moves are the primitive lattice vectors of max-norm <= stencil;
  // stencil 0 gives the four axis moves.
  int stencil = 3;
  Exec exec = Exec::parallel;
};

// Point classifier returning kBlockedCell, kSourceCell, kSinkCell, kFreeCell
// or a continuum key >= 0.
using CellClassifier = std::function<int(const SpherePoint&)>;

class ModulusProblem {
 public:
  Window window;
  int nx = 0, ny = 0;
  double hx = 0.0, hy = 0.0;
  ModulusMode mode = ModulusMode::transboundary;
  int stencil = 3;
  // Row-major cell labels (index j * nx + i).
  std::vector<int> label;
  // Continuum key of each super-node.
  std::vector<int> super_key;
  // Spherical conformal factor at the cell center times h = sqrt(hx hy).
  std::vector<double> length_weight;
  // Square of the conformal factor times hx hy.
  std::vector<double> area_weight;
  // For a labelled cell c and stencil offset o (index c * offsets + o): the
  // parameter along the segment to the neighbouring cell center at which it
  // leaves the label. Zero where unused.
  std::vector<double> exit_fraction;

  std::size_t cell_count() const { return label.size(); }
  std::size_t super_node_count() const { return super_key.size(); }
  std::size_t cell_index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  Complex cell_center(std::size_t c) const;
  std::vector<std::size_t> cells_with_label(int l) const;
  // Free cells sharing an edge with a cell of super-node k.
  std::vector<std::size_t> boundary_cells(std::size_t k) const;
  // FNV-1a over the grid geometry and labels.
  std::uint64_t hash() const;
};

// Throws DomainError when E or F has no cells, when E and F share a cell or
// when a continuum meeting the window covers fewer than two cells.
ModulusProblem discretize(const ModulusInstance& instance, double h, const DiscretizeConfig& config = {});
ModulusProblem discretize_with(const Window& window, double h, ModulusMode mode, const CellClassifier& classify,
                               const DiscretizeConfig& config = {});

struct ModulusConfig {
  // Relative duality gap.
  double tolerance = 1e-3;
  int max_rounds = 4000;
  int paths_per_round = 256;
  // Inner dual sweeps per round, stopped early once the active paths are
  // tight to tolerance / 8.
  int max_sweeps = 50;
  // Over-relaxation factor of the dual coordinate steps, in (0, 2).
  double relaxation = 1.5;
  // Sweeps a zero-multiplier path may stay slack before it is dropped.
  int prune_after = 30;
};

enum class ModulusStatus {
  converged,
  // No curve joins E to F; the modulus of the empty family is 0.
  disconnected,
  // Some curve has zero length for every density; the modulus is +inf.
  unbounded
};

const char* status_name(ModulusStatus s);

struct ModulusResult {
  ModulusStatus status = ModulusStatus::converged;
  // Mass of the admissible density below; equals upper_bound.
  double value = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double gap = 0.0;
  // Admissible density per cell (0 off free cells) and per super-node.
  std::vector<double> cell_density;
  std::vector<double> super_density;
  // Paths with positive multiplier, as cell indices; super-node k is -1 - k.
  std::vector<std::vector<long>> active_paths;
  int iterations = 0;
  std::size_t constraints = 0;
};

// Cutting-plane solve with a shortest-path separation oracle. Throws
// NumericalError when max_rounds is reached.
ModulusResult compute_modulus(const ModulusProblem& problem, const ModulusConfig& config = {});

// Length of the shortest E-F path for a density, with the path.
struct ShortestPath {
  double length = 0.0;
  std::vector<long> nodes;
};
ShortestPath shortest_path(const ModulusProblem& problem, const std::vector<double>& cell_density,
                           const std::vector<double>& super_density);

struct InvarianceResult {
  ModulusResult source;
  ModulusResult image;
  ModulusProblem image_problem;
  double ratio = 0.0;
};

// md of the instance against md of its image family. The image grid is
// classified by pulling back cell centers and has about as many cells as
// the source grid.
InvarianceResult modulus_invariance_check(const ModulusInstance& instance, const MobiusTransform& t, double h,
                                          const ModulusConfig& config = {}, const DiscretizeConfig& disc = {});
// The map must be built from the first n continua of instance.packing, and
// those continua must be all of instance.packing.
InvarianceResult modulus_invariance_check(const ModulusInstance& instance, const CircleDomainMap& m, double h,
                                          const ModulusConfig& config = {}, const DiscretizeConfig& disc = {});

struct ProbeConfig {
  Window window{-0.25, -0.25, 1.25, 1.25};
  double h = 1.5 / 64.0;
  std::vector<std::size_t> ns{1, 5, 10};
  // Sizes 0..max_j0 of the avoided set J0.
  int max_j0 = 2;
  ModulusConfig modulus{.tolerance = 1e-2};
  DiscretizeConfig discretize;
  Exec exec = Exec::parallel;
};

struct ProbeEntry {
  std::size_t n = 0;
  int probe = 0;
  std::vector<std::size_t> j0;
  double value = 0.0;
  ModulusStatus status = ModulusStatus::converged;
};

struct ProbeTable {
  std::vector<ProbeEntry> entries;
  // Minimum over the entries with the same n, in the order of ns.
  std::vector<double> min_per_n;
  double minimum = 0.0;
  // Distances between probes and E are taken in the chart metric after
  // contracting E.
  const char* metric_proxy = "chart metric, E contracted";
};

// md_Y Γ(E, F_k minus J0; Y_n minus J0) for every n, probe k and J0, where
// J0 of size s is the s continua of Y_n nearest to F_k (ties by index).
ProbeTable nondegeneracy_probe(const Packing& p, const PeripheralContinuum& e,
                               const std::vector<PeripheralContinuum>& probes, const ProbeConfig& config = {});

}  // namespace circlelab
