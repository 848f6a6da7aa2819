#include "circlelab/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <utility>

#include "circlelab/errors.hpp"
#include "circlelab/hash.hpp"
#include "detail.hpp"

namespace circlelab {

const char* mode_name(ModulusMode mode) { return mode == ModulusMode::plain ? "plain" : "transboundary"; }

const char* status_name(ModulusStatus s) {
  switch (s) {
    case ModulusStatus::converged:
      return "converged";
    case ModulusStatus::disconnected:
      return "disconnected";
    case ModulusStatus::unbounded:
      return "unbounded";
  }
  return "unknown";
}

int ModulusInstance::classify(const SpherePoint& z) const {
  for (std::size_t k : forbidden)
    if (k < packing.size() && !packing.continua[k].is_point() && packing.continua[k].contains(z)) return kBlockedCell;
  const bool in_e = std::any_of(e.begin(), e.end(), [&](const PeripheralContinuum& k) { return k.contains(z); });
  const bool in_f = std::any_of(f.begin(), f.end(), [&](const PeripheralContinuum& k) { return k.contains(z); });
  if (in_e && in_f) throw DomainError("terminal sets E and F meet");
  if (in_e) return kSourceCell;
  if (in_f) return kSinkCell;
  if (mode == ModulusMode::transboundary)
    for (std::size_t k = 0; k < packing.size(); ++k)
      if (!packing.continua[k].is_point() && packing.continua[k].contains(z)) return static_cast<int>(k);
  return kFreeCell;
}

Complex ModulusProblem::cell_center(std::size_t c) const {
  const auto i = static_cast<double>(c % static_cast<std::size_t>(nx));
  const auto j = static_cast<double>(c / static_cast<std::size_t>(nx));
  return {window.x0 + (i + 0.5) * hx, window.y0 + (j + 0.5) * hy};
}

std::vector<std::size_t> ModulusProblem::cells_with_label(int l) const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < label.size(); ++c)
    if (label[c] == l) out.push_back(c);
  return out;
}

std::vector<std::size_t> ModulusProblem::boundary_cells(std::size_t k) const {
  std::vector<std::size_t> out;
  const int key = static_cast<int>(k);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const std::size_t c = cell_index(i, j);
      if (label[c] != kFreeCell) continue;
      const bool touches = (i > 0 && label[c - 1] == key) || (i + 1 < nx && label[c + 1] == key) ||
                           (j > 0 && label[c - nx] == key) || (j + 1 < ny && label[c + nx] == key);
      if (touches) out.push_back(c);
    }
  return out;
}

std::uint64_t ModulusProblem::hash() const {
  Fnv1a h;
  h.add(window.x0);
  h.add(window.y0);
  h.add(window.x1);
  h.add(window.y1);
  h.add(static_cast<std::int64_t>(nx));
  h.add(static_cast<std::int64_t>(ny));
  h.add(static_cast<std::int64_t>(stencil));
  h.add(static_cast<std::int64_t>(mode == ModulusMode::plain ? 0 : 1));
  for (int l : label) h.add(static_cast<std::int64_t>(l));
  for (int k : super_key) h.add(static_cast<std::int64_t>(k));
  for (double t : exit_fraction) h.add(t);
  return h.value();
}

namespace {

struct Piece {
  int di, dj;
  double t0, t1;   // parameter range along the segment
  double length;  // Euclidean
};

std::vector<std::pair<int, int>> stencil_offsets(int s) {
  std::vector<std::pair<int, int>> out;
  if (s == 0) return {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int q = -s; q <= s; ++q)
    for (int p = -s; p <= s; ++p)
      if ((p != 0 || q != 0) && std::gcd(std::abs(p), std::abs(q)) == 1) out.emplace_back(p, q);
  return out;
}

// Cells crossed by the segment between the centers of cell (0, 0) and cell
// (p, q), with the Euclidean length inside each. Corner touches are dropped.
std::vector<Piece> crossing(int p, int q, double hx, double hy) {
  std::vector<double> ts{0.0, 1.0};
  for (int k = 1; k <= std::abs(p); ++k) ts.push_back((k - 0.5) / std::abs(p));
  for (int k = 1; k <= std::abs(q); ++k) ts.push_back((k - 0.5) / std::abs(q));
  std::sort(ts.begin(), ts.end());
  const double total = std::hypot(p * hx, q * hy);
  std::vector<Piece> out;
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    const double dt = ts[k + 1] - ts[k];
    if (dt <= 1e-12) continue;
    const double tm = 0.5 * (ts[k] + ts[k + 1]);
    const int di = static_cast<int>(std::floor(0.5 + p * tm));
    const int dj = static_cast<int>(std::floor(0.5 + q * tm));
    if (!out.empty() && out.back().di == di && out.back().dj == dj) {
      out.back().t1 = ts[k + 1];
      out.back().length += dt * total;
    } else {
      out.push_back({di, dj, ts[k], ts[k + 1], dt * total});
    }
  }
  return out;
}

}  // namespace

constexpr int kExitBisections = 20;

ModulusProblem discretize_with(const Window& window, double h, ModulusMode mode, const CellClassifier& classify,
                               const DiscretizeConfig& config) {
  if (!(h > 0.0) || !(window.width() > 0.0) || !(window.height() > 0.0))
    throw DomainError("modulus grid needs a positive window and resolution");
  if (config.stencil < 0 || config.stencil > 8) throw DomainError("stencil must be in [0, 8]");
  ModulusProblem p;
  p.window = window;
  p.mode = mode;
  p.stencil = config.stencil;
  p.nx = std::max(1, static_cast<int>(std::lround(window.width() / h)));
  p.ny = std::max(1, static_cast<int>(std::lround(window.height() / h)));
  p.hx = window.width() / p.nx;
  p.hy = window.height() / p.ny;
  const std::size_t cells = static_cast<std::size_t>(p.nx) * static_cast<std::size_t>(p.ny);
  std::vector<int> raw(cells);
  p.length_weight.resize(cells);
  p.area_weight.resize(cells);
  const double hm = std::sqrt(p.hx * p.hy);
  for_each_index(config.exec, cells, [&](std::size_t c) {
    const Complex z = p.cell_center(c);
    raw[c] = classify(SpherePoint(z));
    const double lam = conformal_factor(z);
    p.length_weight[c] = lam * hm;
    p.area_weight[c] = lam * lam * p.hx * p.hy;
  });
  std::map<int, std::size_t> counts;
  bool has_e = false, has_f = false;
  for (int l : raw) {
    if (l >= 0) ++counts[l];
    has_e = has_e || l == kSourceCell;
    has_f = has_f || l == kSinkCell;
  }
  if (!has_e) throw DomainError("terminal set E covers no cell");
  if (!has_f) throw DomainError("terminal set F covers no cell");
  std::map<int, int> super_of;
  for (const auto& [key, count] : counts) {
    if (count < 2)
      throw DomainError("resolution too coarse: continuum " + std::to_string(key) + " spans fewer than two cells");
    super_of[key] = static_cast<int>(p.super_key.size());
    p.super_key.push_back(key);
  }
  p.label.resize(cells);
  for (std::size_t c = 0; c < cells; ++c) p.label[c] = raw[c] >= 0 ? super_of[raw[c]] : raw[c];

  // Where each move out of a labelled cell leaves the label, by bisection
  // along the segment between the cell centers.
  const auto offsets = stencil_offsets(p.stencil);
  const std::size_t no = offsets.size();
  p.exit_fraction.assign(cells * no, 0.0);
  for_each_index(config.exec, cells, [&](std::size_t c) {
    const int l = raw[c];
    if (l == kFreeCell || l == kBlockedCell) return;
    const int ci = static_cast<int>(c % static_cast<std::size_t>(p.nx));
    const int cj = static_cast<int>(c / static_cast<std::size_t>(p.nx));
    const Complex z0 = p.cell_center(c);
    for (std::size_t o = 0; o < no; ++o) {
      const int ti = ci + offsets[o].first, tj = cj + offsets[o].second;
      if (ti < 0 || tj < 0 || ti >= p.nx || tj >= p.ny) continue;
      const std::size_t t = p.cell_index(ti, tj);
      if (raw[t] == l || raw[t] == kBlockedCell) continue;
      const Complex d = p.cell_center(t) - z0;
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < kExitBisections; ++it) {
        const double mid = 0.5 * (lo + hi);
        (classify(SpherePoint(z0 + mid * d)) == l ? lo : hi) = mid;
      }
      p.exit_fraction[c * no + o] = 0.5 * (lo + hi);
    }
  });
  return p;
}

ModulusProblem discretize(const ModulusInstance& instance, double h, const DiscretizeConfig& config) {
  if (instance.e.empty() || instance.f.empty()) throw DomainError("terminal sets must be nonempty");
  ModulusProblem p = discretize_with(
      instance.window, h, instance.mode, [&](const SpherePoint& z) { return instance.classify(z); }, config);
  // Every continuum that matters and meets the window (by boundary samples)
  // must cover two cells.
  for (std::size_t k = 0; k < instance.packing.size(); ++k) {
    const auto& c = instance.packing.continua[k];
    const bool forbidden = std::find(instance.forbidden.begin(), instance.forbidden.end(), k) != instance.forbidden.end();
    if (c.is_point() || (instance.mode == ModulusMode::plain && !forbidden)) continue;
    const auto samples = c.boundary_points(256);
    const bool meets = std::any_of(samples.begin(), samples.end(), [&](const SpherePoint& z) {
      return !z.is_infinity() && instance.window.contains(z.value());
    });
    if (!meets) continue;
    int covered = 0;
    for (std::size_t cell = 0; cell < p.cell_count() && covered < 2; ++cell)
      if (c.contains(SpherePoint(p.cell_center(cell)))) ++covered;
    if (covered < 2)
      throw DomainError("resolution too coarse: continuum " + std::to_string(k) + " spans fewer than two cells");
  }
  return p;
}

namespace {

struct Coef {
  long var;
  double value;
};

struct Move {
  long target;
  std::size_t begin, end;  // range in Graph::coefs
};

// Contracted move graph. Nodes are cells (free and sink), then the
// super-nodes, then the source. Variables are the free cells in order, then
// the super-nodes.
struct Graph {
  std::size_t cells = 0, supers = 0;
  long source = 0;
  std::vector<long> var_of_cell;
  std::vector<std::size_t> cell_of_var;
  std::size_t vars = 0;
  std::vector<std::size_t> node_begin;
  std::vector<Move> moves;
  std::vector<Coef> coefs;
  std::vector<double> weight;  // mass weight per variable

  bool is_sink(const ModulusProblem& p, long node) const {
    return node < static_cast<long>(cells) && p.label[static_cast<std::size_t>(node)] == kSinkCell;
  }
};

Graph build_graph(const ModulusProblem& p) {
  Graph g;
  g.cells = p.cell_count();
  g.supers = p.super_node_count();
  g.source = static_cast<long>(g.cells + g.supers);
  g.var_of_cell.assign(g.cells, -1);
  for (std::size_t c = 0; c < g.cells; ++c)
    if (p.label[c] == kFreeCell) {
      g.var_of_cell[c] = static_cast<long>(g.cell_of_var.size());
      g.cell_of_var.push_back(c);
      g.weight.push_back(p.area_weight[c]);
    }
  g.vars = g.cell_of_var.size() + g.supers;
  g.weight.resize(g.vars, 1.0);

  const auto offsets = stencil_offsets(p.stencil);
  std::vector<std::vector<Piece>> pieces;
  for (const auto& [dx, dy] : offsets) pieces.push_back(crossing(dx, dy, p.hx, p.hy));
  const std::size_t no = offsets.size();
  std::vector<std::size_t> opposite(no);
  for (std::size_t o = 0; o < no; ++o)
    for (std::size_t k = 0; k < no; ++k)
      if (offsets[k].first == -offsets[o].first && offsets[k].second == -offsets[o].second) opposite[o] = k;

  // Origin cells of every node, in node order.
  const std::size_t nodes = g.cells + g.supers + 1;
  std::vector<std::vector<std::size_t>> origins(nodes);
  for (std::size_t c = 0; c < g.cells; ++c) {
    const int l = p.label[c];
    if (l == kFreeCell) origins[c].push_back(c);
    if (l >= 0) origins[g.cells + static_cast<std::size_t>(l)].push_back(c);
    if (l == kSourceCell) origins[static_cast<std::size_t>(g.source)].push_back(c);
  }
  g.node_begin.assign(nodes + 1, 0);
  for (std::size_t n = 0; n < nodes; ++n) {
    g.node_begin[n] = g.moves.size();
    for (std::size_t c : origins[n]) {
      const int ci = static_cast<int>(c % static_cast<std::size_t>(p.nx));
      const int cj = static_cast<int>(c / static_cast<std::size_t>(p.nx));
      const int lc = p.label[c];
      for (std::size_t o = 0; o < offsets.size(); ++o) {
        const int ti = ci + offsets[o].first, tj = cj + offsets[o].second;
        if (ti < 0 || tj < 0 || ti >= p.nx || tj >= p.ny) continue;
        const std::size_t t = p.cell_index(ti, tj);
        const int lt = p.label[t];
        if (lt == kBlockedCell || lt == kSourceCell) continue;
        if (lc != kFreeCell && lt == lc) continue;
        // Only the part of the segment between leaving the start label and
        // entering the target label is charged. Charged length inside a
        // labelled end cell goes to the nearest free piece.
        const double lo = lc == kFreeCell ? 0.0 : p.exit_fraction[c * no + o];
        const double hi = lt == kFreeCell ? 1.0 : 1.0 - p.exit_fraction[t * no + opposite[o]];
        const auto& pcs = pieces[o];
        bool ok = true;
        std::vector<long> var(pcs.size(), -1);
        for (std::size_t k = 0; k < pcs.size() && ok; ++k) {
          const int lx = p.label[p.cell_index(ci + pcs[k].di, cj + pcs[k].dj)];
          if (lx == kFreeCell)
            var[k] = static_cast<long>(k);
          else
            ok = lx == lc || lx == lt;
        }
        if (!ok) continue;
        const std::size_t begin = g.coefs.size();
        for (std::size_t k = 0; k < pcs.size(); ++k) {
          const double part = std::max(0.0, std::min(pcs[k].t1, hi) - std::max(pcs[k].t0, lo)) / (pcs[k].t1 - pcs[k].t0);
          if (part <= 0.0) continue;
          long owner = -1;
          for (std::size_t d = 0; d < pcs.size() && owner < 0; ++d) {
            if (k >= d && var[k - d] >= 0) owner = var[k - d];
            else if (k + d < pcs.size() && var[k + d] >= 0) owner = var[k + d];
          }
          if (owner < 0) continue;
          const std::size_t x = p.cell_index(ci + pcs[static_cast<std::size_t>(owner)].di, cj + pcs[static_cast<std::size_t>(owner)].dj);
          g.coefs.push_back({g.var_of_cell[x], part * pcs[k].length * p.length_weight[x] / std::sqrt(p.hx * p.hy)});
        }
        long target = static_cast<long>(t);
        if (lt >= 0) {
          target = static_cast<long>(g.cells) + lt;
          if (p.mode == ModulusMode::transboundary)
            g.coefs.push_back({static_cast<long>(g.cell_of_var.size()) + lt, 1.0});
        }
        g.moves.push_back({target, begin, g.coefs.size()});
      }
    }
  }
  g.node_begin[nodes] = g.moves.size();
  return g;
}

struct Tree {
  std::vector<double> dist;
  std::vector<long> pred_node;
  std::vector<long> pred_move;
};

double move_cost(const Graph& g, const Move& m, const std::vector<double>& rho) {
  double s = 0.0;
  for (std::size_t k = m.begin; k < m.end; ++k) s += g.coefs[k].value * rho[static_cast<std::size_t>(g.coefs[k].var)];
  return s;
}

// Multi-source Dijkstra over an adjacency (node_begin, moves); ties are
// broken by node id. Nodes flagged in `stop` are reached but not expanded.
Tree dijkstra(const std::vector<std::size_t>& node_begin, const std::vector<Move>& moves, const Graph& g,
              const std::vector<long>& starts, const std::vector<char>& stop, const std::vector<double>& rho) {
  const std::size_t nodes = node_begin.size() - 1;
  Tree t;
  t.dist.assign(nodes, std::numeric_limits<double>::infinity());
  t.pred_node.assign(nodes, -1);
  t.pred_move.assign(nodes, -1);
  using Item = std::pair<double, long>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (long s : starts) {
    t.dist[static_cast<std::size_t>(s)] = 0.0;
    heap.emplace(0.0, s);
  }
  std::vector<char> done(nodes, 0);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    const auto uu = static_cast<std::size_t>(u);
    if (done[uu]) continue;
    done[uu] = 1;
    if (stop[uu]) continue;
    for (std::size_t mi = node_begin[uu]; mi < node_begin[uu + 1]; ++mi) {
      const Move& m = moves[mi];
      const auto v = static_cast<std::size_t>(m.target);
      if (done[v]) continue;
      const double nd = d + move_cost(g, m, rho);
      if (nd < t.dist[v] || (nd == t.dist[v] && u < t.pred_node[v])) {
        t.dist[v] = nd;
        t.pred_node[v] = u;
        t.pred_move[v] = static_cast<long>(mi);
        heap.emplace(nd, m.target);
      }
    }
  }
  return t;
}

// Forward search from the source; sink cells are not expanded.
struct Search {
  const Graph& g;
  std::vector<char> stop;
  std::vector<long> sinks;

  Search(const ModulusProblem& p, const Graph& graph) : g(graph) {
    stop.assign(g.node_begin.size() - 1, 0);
    for (std::size_t c = 0; c < g.cells; ++c)
      if (p.label[c] == kSinkCell) {
        stop[c] = 1;
        sinks.push_back(static_cast<long>(c));
      }
  }

  Tree forward(const std::vector<double>& rho) const {
    return dijkstra(g.node_begin, g.moves, g, {g.source}, stop, rho);
  }
};

struct Path {
  std::vector<Coef> coef;  // sorted by var, merged
  std::vector<long> nodes;
  double q = 0.0;  // sum a^2 / (2 w)
  double lambda = 0.0;
  int idle = 0;  // consecutive sweeps slack
};

long external_node(const Graph& g, long v) {
  return v < static_cast<long>(g.cells) ? v : -1 - (v - static_cast<long>(g.cells));
}

Path extract_path(const Search& s, const Tree& fw, long sink) {
  const Graph& g = s.g;
  Path path;
  std::map<long, double> acc;
  for (long u = sink; u != g.source;) {
    const auto uu = static_cast<std::size_t>(u);
    const Move& m = g.moves[static_cast<std::size_t>(fw.pred_move[uu])];
    for (std::size_t k = m.begin; k < m.end; ++k) acc[g.coefs[k].var] += g.coefs[k].value;
    path.nodes.push_back(external_node(g, u));
    u = fw.pred_node[uu];
  }
  std::reverse(path.nodes.begin(), path.nodes.end());
  for (const auto& [var, a] : acc)
    if (a > 0.0) {
      path.coef.push_back({var, a});
      path.q += a * a / (2.0 * g.weight[static_cast<std::size_t>(var)]);
    }
  return path;
}

std::uint64_t path_key(const Path& path) {
  Fnv1a h;
  for (const Coef& c : path.coef) {
    h.add(static_cast<std::int64_t>(c.var));
    h.add(c.value);
  }
  return h.value();
}

double mass(const Graph& g, const std::vector<double>& rho) {
  double m = 0.0;
  for (std::size_t j = 0; j < g.vars; ++j) m += g.weight[j] * rho[j] * rho[j];
  return m;
}

// Nearest sink of the forward tree, ties by node id.
long nearest_sink(const Search& s, const Tree& fw) {
  long best = -1;
  for (long c : s.sinks)
    if (std::isfinite(fw.dist[static_cast<std::size_t>(c)]) &&
        (best < 0 || fw.dist[static_cast<std::size_t>(c)] < fw.dist[static_cast<std::size_t>(best)]))
      best = c;
  return best;
}

void fill_densities(const Graph& g, const std::vector<double>& rho, double scale, ModulusResult& r) {
  r.cell_density.assign(g.cells, 0.0);
  for (std::size_t v = 0; v < g.cell_of_var.size(); ++v) r.cell_density[g.cell_of_var[v]] = rho[v] * scale;
  r.super_density.assign(g.supers, 0.0);
  for (std::size_t k = 0; k < g.supers; ++k) r.super_density[k] = rho[g.cell_of_var.size() + k] * scale;
}

}  // namespace

ModulusResult compute_modulus(const ModulusProblem& problem, const ModulusConfig& config) {
  if (!(config.tolerance > 0.0) || config.paths_per_round < 1 || config.max_sweeps < 1 ||
      !(config.relaxation > 0.0 && config.relaxation < 2.0))
    throw DomainError("invalid modulus solver configuration");
  const Graph g = build_graph(problem);
  std::vector<double> rho(g.vars, 0.0);
  std::vector<double> seed(g.vars, 0.0);
  for (std::size_t v = 0; v < g.cell_of_var.size(); ++v) seed[v] = 1.0 / problem.length_weight[g.cell_of_var[v]];
  std::vector<Path> paths;
  std::set<std::uint64_t> seen;
  ModulusResult r;
  double lambda_sum = 0.0;
  const Search search(problem, g);
  for (int round = 1; round <= config.max_rounds; ++round) {
    r.iterations = round;
    // The first round seeds the constraints with the shortest paths of the
    // chart metric.
    const std::vector<double>& metric = round == 1 ? seed : rho;
    const Tree fw = search.forward(metric);
    const long nearest = nearest_sink(search, fw);
    if (nearest < 0) {
      r.status = ModulusStatus::disconnected;
      fill_densities(g, rho, 0.0, r);
      return r;
    }
    const double lmin = round == 1 ? 0.0 : fw.dist[static_cast<std::size_t>(nearest)];
    const double m = mass(g, rho);
    const double lower = std::max(0.0, lambda_sum - m);
    if (lmin > 0.0) {
      const double upper = m / (lmin * lmin);
      if (upper - lower <= config.tolerance * upper) {
        r.status = ModulusStatus::converged;
        r.value = r.upper_bound = upper;
        r.lower_bound = lower;
        r.gap = (upper - lower) / upper;
        r.constraints = paths.size();
        fill_densities(g, rho, 1.0 / lmin, r);
        for (const Path& pa : paths)
          if (pa.lambda > 0.0) r.active_paths.push_back(pa.nodes);
        return r;
      }
    }
    std::vector<long> order;
    for (long c : search.sinks)
      if (std::isfinite(fw.dist[static_cast<std::size_t>(c)])) order.push_back(c);
    std::sort(order.begin(), order.end(), [&](long x, long y) {
      const double dx = fw.dist[static_cast<std::size_t>(x)], dy = fw.dist[static_cast<std::size_t>(y)];
      return dx < dy || (dx == dy && x < y);
    });
    int added = 0;
    for (long c : order) {
      if (added >= config.paths_per_round) break;
      if (round > 1 && fw.dist[static_cast<std::size_t>(c)] >= 1.0 - 0.25 * config.tolerance) break;
      Path pa = extract_path(search, fw, c);
      if (pa.coef.empty()) {
        r.status = ModulusStatus::unbounded;
        r.value = r.upper_bound = r.lower_bound = std::numeric_limits<double>::infinity();
        r.active_paths.push_back(pa.nodes);
        fill_densities(g, rho, 0.0, r);
        return r;
      }
      if (seen.insert(path_key(pa)).second) {
        paths.push_back(std::move(pa));
        ++added;
      }
    }
    // Hildreth coordinate ascent on the dual of min sum w rho^2 s.t. a.rho >= 1,
    // over-relaxed, until the active constraints are tight.
    for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
      double worst = 0.0;
      for (Path& pa : paths) {
        double len = 0.0;
        for (const Coef& c : pa.coef) len += c.value * rho[static_cast<std::size_t>(c.var)];
        if (pa.lambda > 0.0 || len < 1.0) worst = std::max(worst, std::abs(1.0 - len));
        const double next = std::max(0.0, pa.lambda + config.relaxation * (1.0 - len) / pa.q);
        const double step = next - pa.lambda;
        if (len > 1.0 + config.tolerance) ++pa.idle; else pa.idle = 0;
        if (step == 0.0) continue;
        pa.lambda = next;
        lambda_sum += step;
        for (const Coef& c : pa.coef) {
          const auto j = static_cast<std::size_t>(c.var);
          rho[j] += step * c.value / (2.0 * g.weight[j]);
        }
      }
      if (worst <= 0.125 * config.tolerance) break;
    }
    // Drop constraints that have been slack with a zero multiplier for a while.
    const auto keep_end = std::stable_partition(paths.begin(), paths.end(), [&](const Path& pa) {
      return pa.lambda > 0.0 || pa.idle < config.prune_after;
    });
    for (auto it = keep_end; it != paths.end(); ++it) seen.erase(path_key(*it));
    paths.erase(keep_end, paths.end());
  }
  throw NumericalError("modulus solver reached " + std::to_string(config.max_rounds) + " rounds");
}

ShortestPath shortest_path(const ModulusProblem& problem, const std::vector<double>& cell_density,
                           const std::vector<double>& super_density) {
  const Graph g = build_graph(problem);
  if (cell_density.size() != g.cells || super_density.size() != g.supers)
    throw DomainError("density size does not match the problem");
  std::vector<double> rho(g.vars, 0.0);
  for (std::size_t v = 0; v < g.cell_of_var.size(); ++v) rho[v] = cell_density[g.cell_of_var[v]];
  for (std::size_t k = 0; k < g.supers; ++k) rho[g.cell_of_var.size() + k] = super_density[k];
  const Search search(problem, g);
  const Tree fw = search.forward(rho);
  const long nearest = nearest_sink(search, fw);
  ShortestPath out;
  if (nearest < 0) {
    out.length = std::numeric_limits<double>::infinity();
    return out;
  }
  out.length = fw.dist[static_cast<std::size_t>(nearest)];
  out.nodes = extract_path(search, fw, nearest).nodes;
  return out;
}

namespace {

// Bounding window of the images of samples on the source window boundary.
// `forward` returns the chart points to include for one sample.
Window image_window(const Window& w, const std::function<std::vector<Complex>(Complex)>& forward) {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
  constexpr int kSide = 512;
  const Complex corners[4] = {{w.x0, w.y0}, {w.x1, w.y0}, {w.x1, w.y1}, {w.x0, w.y1}};
  for (int s = 0; s < 4; ++s)
    for (int k = 0; k < kSide; ++k) {
      const Complex z = corners[s] + (corners[(s + 1) % 4] - corners[s]) * (static_cast<double>(k) / kSide);
      for (Complex fz : forward(z)) {
        x0 = std::min(x0, fz.real());
        x1 = std::max(x1, fz.real());
        y0 = std::min(y0, fz.imag());
        y1 = std::max(y1, fz.imag());
      }
    }
  if (!(x1 > x0) || !(y1 > y0)) throw DomainError("image of the window is degenerate");
  return {x0, y0, x1, y1};
}

std::vector<Complex> finite_image(const SpherePoint& w) {
  if (w.is_infinity()) throw DomainError("image of the window is unbounded");
  return {w.value()};
}

double matched_resolution(const Window& source, const Window& image, double h) {
  return h * std::sqrt((image.width() * image.height()) / (source.width() * source.height()));
}

Window pad(const Window& w, double margin) { return {w.x0 - margin, w.y0 - margin, w.x1 + margin, w.y1 + margin}; }

InvarianceResult finish_invariance(const ModulusProblem& source, ModulusProblem image, const ModulusConfig& config) {
  InvarianceResult out;
  out.source = compute_modulus(source, config);
  out.image = compute_modulus(image, config);
  out.image_problem = std::move(image);
  out.ratio = out.source.value / out.image.value;
  return out;
}

}  // namespace

InvarianceResult modulus_invariance_check(const ModulusInstance& instance, const MobiusTransform& t, double h,
                                          const ModulusConfig& config, const DiscretizeConfig& disc) {
  const ModulusProblem source = discretize(instance, h, disc);
  const MobiusTransform inv = t.inverse();
  Window w = image_window(instance.window, [&](Complex z) { return finite_image(t(z)); });
  const double hi = matched_resolution(instance.window, w, h);
  w = pad(w, 2.0 * hi);
  auto classify = [&](const SpherePoint& x) {
    const SpherePoint z = inv(x);
    if (z.is_infinity() || !instance.window.contains(z.value())) return kBlockedCell;
    return instance.classify(z);
  };
  return finish_invariance(source, discretize_with(w, hi, instance.mode, classify, disc), config);
}

InvarianceResult modulus_invariance_check(const ModulusInstance& instance, const CircleDomainMap& m, double h,
                                          const ModulusConfig& config, const DiscretizeConfig& disc) {
  if (m.input().size() != instance.packing.size())
    throw DomainError("the map must uniformize every continuum of the instance");
  const ModulusProblem source = discretize(instance, h, disc);
  std::vector<Cap> disks;
  std::vector<std::size_t> disk_index;
  for (std::size_t k = 0; k < m.outputs().size(); ++k)
    if (m.outputs()[k].is_disk()) {
      disks.push_back(m.outputs()[k].disk_cap());
      disk_index.push_back(k);
    }
  // Samples inside a continuum contribute the box of its output disk.
  auto forward = [&](Complex z) -> std::vector<Complex> {
    if (m.in_domain(z)) return finite_image(m.evaluate_unchecked(z));
    for (std::size_t k = 0; k < instance.packing.size(); ++k)
      if (instance.packing.continua[k].contains(z) && m.outputs()[k].is_disk()) {
        const auto c = circle_from_cap(m.outputs()[k].disk_cap());
        if (!c) throw DomainError("image of the window is unbounded");
        return {c->center - Complex(c->radius, c->radius), c->center + Complex(c->radius, c->radius)};
      }
    return {};
  };
  Window w = image_window(instance.window, forward);
  const double hi = matched_resolution(instance.window, w, h);
  w = pad(w, 2.0 * hi);
  // Points inside output disk k take the label of an interior point of
  // continuum k.
  std::vector<int> disk_label(disks.size());
  for (std::size_t d = 0; d < disks.size(); ++d) {
    const auto& c = instance.packing.continua[disk_index[d]];
    SpherePoint rep = c.is_disk() ? c.disk_cap().center : SpherePoint(c.polygon_vertices().front());
    if (c.is_polygon()) {
      const auto& v = c.polygon_vertices();
      Complex mean = 0.0;
      for (Complex z : v) mean += z;
      mean /= static_cast<double>(v.size());
      if (polygon_contains(v, mean)) rep = mean;
    }
    disk_label[d] = instance.classify(rep);
  }
  auto classify = [&](const SpherePoint& x) {
    for (std::size_t d = 0; d < disks.size(); ++d)
      if (cap_contains(disks[d], x)) return disk_label[d];
    const SpherePoint z = m.inverse_unchecked(x);
    if (z.is_infinity() || !instance.window.contains(z.value())) return kBlockedCell;
    return instance.classify(z);
  };
  return finish_invariance(source, discretize_with(w, hi, instance.mode, classify, disc), config);
}

ProbeTable nondegeneracy_probe(const Packing& p, const PeripheralContinuum& e,
                               const std::vector<PeripheralContinuum>& probes, const ProbeConfig& config) {
  if (probes.empty()) throw DomainError("nondegeneracy probe needs probe continua");
  std::vector<ProbeEntry> entries;
  std::vector<ModulusInstance> instances;
  for (std::size_t n : config.ns) {
    if (n > p.size()) throw DomainError("probe n exceeds the packing size");
    const Packing pn = p.prefix(n);
    for (std::size_t k = 0; k < probes.size(); ++k) {
      std::vector<std::pair<double, std::size_t>> near;
      for (std::size_t i = 0; i < n; ++i)
        if (!pn.continua[i].is_point()) near.emplace_back(set_distance(probes[k], pn.continua[i], Metric::euclidean), i);
      std::sort(near.begin(), near.end());
      for (int s = 0; s <= config.max_j0 && static_cast<std::size_t>(s) <= near.size(); ++s) {
        ModulusInstance inst;
        inst.window = config.window;
        inst.packing = pn;
        inst.e = {e};
        inst.f = {probes[k]};
        for (int a = 0; a < s; ++a) inst.forbidden.push_back(near[static_cast<std::size_t>(a)].second);
        ProbeEntry entry;
        entry.n = n;
        entry.probe = static_cast<int>(k);
        entry.j0 = inst.forbidden;
        std::sort(entry.j0.begin(), entry.j0.end());
        entries.push_back(entry);
        instances.push_back(std::move(inst));
      }
    }
  }
  DiscretizeConfig disc = config.discretize;
  disc.exec = Exec::serial;
  for_each_index(config.exec, entries.size(), [&](std::size_t q) {
    const ModulusResult r = compute_modulus(discretize(instances[q], config.h, disc), config.modulus);
    entries[q].value = r.value;
    entries[q].status = r.status;
  });
  ProbeTable table;
  table.minimum = std::numeric_limits<double>::infinity();
  for (std::size_t n : config.ns) {
    double lo = std::numeric_limits<double>::infinity();
    for (const ProbeEntry& en : entries)
      if (en.n == n) lo = std::min(lo, en.value);
    table.min_per_n.push_back(lo);
    table.minimum = std::min(table.minimum, lo);
  }
  table.entries = std::move(entries);
  return table;
}

}  // namespace circlelab
