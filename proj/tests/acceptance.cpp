// Acceptance run: one PASS/FAIL line per criterion. Criteria can be
// selected by number on the command line.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "circlelab/conformality.hpp"
#include "circlelab/fatness.hpp"
#include "circlelab/generate.hpp"
#include "circlelab/measure.hpp"
#include "circlelab/modulus.hpp"
#include "circlelab/sequence.hpp"
#include "circlelab/serialize.hpp"
#include "grid_oracle.hpp"

using namespace circlelab;

namespace {

constexpr double kPi = std::numbers::pi;
const SpherePoint kInf = SpherePoint::infinity();

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok) { pass = pass && ok; }
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

PeripheralContinuum rect(int id, double x0, double y0, double x1, double y1) {
  return PeripheralContinuum::polygon(id, {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

ModulusInstance strip_instance(const Window& w, ModulusMode mode) {
  ModulusInstance in;
  in.window = w;
  in.mode = mode;
  in.e = {rect(-1, w.x0 - 1.0, w.y0 - 1.0, 0.0, w.y1 + 1.0)};
  in.f = {rect(-2, 1.0, w.y0 - 1.0, w.x1 + 1.0, w.y1 + 1.0)};
  return in;
}

Packing three_squares() {
  Packing p;
  p.continua.push_back(rect(1, 0.0, 0.0, 1.0, 1.0));
  p.continua.push_back(rect(2, 1.5, 0.2, 2.1, 0.8));
  p.continua.push_back(rect(3, 0.3, 1.4, 0.9, 2.0));
  return p;
}

// Inversive distance of two disjoint caps; arccosh of it is the modulus of
// the separating ring.
double inversive_distance(const Cap& a, const Cap& b) {
  const double theta = spherical_distance(a.center, b.center);
  return (std::cos(a.radius) * std::cos(b.radius) - std::cos(theta)) / (std::sin(a.radius) * std::sin(b.radius));
}

bool nonincreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k] > v[k - 1]) return false;
  return true;
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return (*hi - *lo) / *hi;
}

void criterion1(Outcome& o) {
  auto t0 = Clock::now();
  const double hs = 1.0 / 48;
  const ModulusResult sq =
      compute_modulus(discretize(strip_instance({-hs, 0.0, 1.0 + hs, 1.0}, ModulusMode::plain), hs));
  const double t_sq = since(t0);
  o.require(sq.status == ModulusStatus::converged && std::abs(sq.value - 1.0) <= 0.02 && t_sq < 30.0);
  o.detail << "square " << sq.value << " (" << t_sq << " s)";

  t0 = Clock::now();
  const double e = std::numbers::e, ha = 2.0 * e / 96;
  ModulusInstance an;
  an.window = {-e - 2 * ha, -e - 2 * ha, e + 2 * ha, e + 2 * ha};
  an.mode = ModulusMode::plain;
  an.e = {PeripheralContinuum::chart_disk(1, {0.0, 0.0}, 1.0)};
  an.f = {PeripheralContinuum::disk(2, Cap{kInf, 2.0 * std::atan(1.0 / e)})};
  const ModulusResult ar = compute_modulus(discretize(an, ha));
  const double t_an = since(t0);
  o.require(std::abs(ar.value / (2.0 * kPi) - 1.0) <= 0.02 && t_an < 30.0);
  o.detail << ", annulus/2pi " << ar.value / (2.0 * kPi) << " (" << t_an << " s)";

  t0 = Clock::now();
  ModulusConfig cfg;
  cfg.tolerance = 1e-9;
  cfg.max_sweeps = 2000;
  DiscretizeConfig disc;
  disc.stencil = 0;
  double worst = 0.0;
  for (bool tb : {false, true}) {
    ModulusInstance in = strip_instance({-0.25, 0.0, 1.25, 1.0}, tb ? ModulusMode::transboundary : ModulusMode::plain);
    in.packing.continua.push_back(rect(1, 0.3, 0.3, 0.45, 0.7));
    const ModulusResult r = compute_modulus(discretize(in, 0.25, disc), cfg);
    worst = std::max(worst, std::abs(r.value - testsupport::grid_oracle(tb).value));
  }
  const double t_grid = since(t0);
  o.require(worst <= 1e-6 && t_grid < 30.0);
  o.detail << ", 4x4 grid error " << worst << " (" << t_grid << " s)";
}

void criterion2(Outcome& o) {
  const auto t0 = Clock::now();
  const ModulusInstance strip = strip_instance({-0.25, 0.0, 1.25, 1.0}, ModulusMode::plain);
  const MobiusTransform twice({2.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0});
  const MobiusTransform bent({1.0, 0.0}, {0.3, 0.1}, {0.25, -0.1}, {1.0, 0.0});
  for (const auto& [name, t] : {std::pair{"2z", twice}, std::pair{"mobius", bent}}) {
    const double a = modulus_invariance_check(strip, t, 1.0 / 16).ratio;
    const double b = modulus_invariance_check(strip, t, 1.0 / 32).ratio;
    o.require(std::abs(a - 1.0) <= 0.05 && std::abs(b - 1.0) <= std::abs(a - 1.0));
    o.detail << name << " " << a << " -> " << b << ", ";
  }

  Packing p;
  p.continua.push_back(rect(1, 0.0, 0.0, 1.0, 1.0));
  p.continua.push_back(rect(2, 1.5, 0.25, 2.0, 0.75));
  KoebeConfig kc;
  kc.tolerance = 1e-8;
  const CircleDomainMap m = koebe_iterate(p, 2, kInf, SpherePoint(Complex(-0.5, -0.5)), SpherePoint(Complex(3.0, -0.5)), kc);
  ModulusInstance in;
  in.window = {-1.0, -1.25, 3.0, 2.25};
  in.packing = p;
  in.e = {p.continua[0]};
  in.f = {p.continua[1]};
  const double a = modulus_invariance_check(in, m, 0.125).ratio;
  const double b = modulus_invariance_check(in, m, 0.0625).ratio;
  o.require(std::abs(a - 1.0) <= 0.05 && std::abs(b - 1.0) <= std::abs(a - 1.0));
  const double t = since(t0);
  o.require(t < 300.0);
  o.detail << "koebe " << a << " -> " << b << " (" << t << " s)";
}

void criterion3(Outcome& o) {
  KoebeConfig cfg;
  cfg.tolerance = 1e-10;
  Packing one;
  one.continua.push_back(PeripheralContinuum::chart_disk(1, {0.2, -0.1}, 0.4));
  const CircleDomainMap m1 = koebe_iterate(one, 1, SpherePoint(Complex(2.0, 1.0)), SpherePoint(Complex(-1.0, 0.0)),
                                           SpherePoint(Complex(0.0, 2.0)), cfg);
  o.require(m1.report().converged && m1.report().sweeps <= 2 && m1.report().residuals.back() <= 1e-10);
  o.detail << "one disk " << m1.report().sweeps << " sweeps, residual " << m1.report().residuals.back();

  Packing two;
  two.continua.push_back(PeripheralContinuum::chart_disk(1, {0.0, 0.0}, 0.5));
  two.continua.push_back(PeripheralContinuum::chart_disk(2, {1.6, 0.3}, 0.3));
  const double ring_in = std::acosh(inversive_distance(two.continua[0].disk_cap(), two.continua[1].disk_cap()));
  for (const SpherePoint& zi : {kInf, SpherePoint(Complex(0.8, 2.0))}) {
    const CircleDomainMap m = koebe_iterate(two, 2, zi, SpherePoint(Complex(0.8, -1.0)), SpherePoint(Complex(-1.0, 1.0)), cfg);
    const double ring_out = std::acosh(inversive_distance(m.outputs()[0].disk_cap(), m.outputs()[1].disk_cap()));
    const double err = std::abs(ring_out / ring_in - 1.0);
    o.require(m.report().converged && m.report().sweeps <= 2 && m.report().residuals.back() <= 1e-10 && err <= 0.005);
    o.detail << "; two disks " << m.report().sweeps << " sweeps, residual " << m.report().residuals.back()
             << ", ring modulus error " << err;
  }
}

double sequence_seconds = 0.0;

// Shared by criteria 4, 5 and 7.
const SequenceReport& carpet_sequence() {
  static const SequenceReport r = [] {
    const auto t0 = Clock::now();
    SequenceReport out = run_sequence(carpet(3));
    sequence_seconds = since(t0);
    return out;
  }();
  return r;
}

void criterion4(Outcome& o) {
  const DomainQuadratureConfig cfg{.max_depth = 3, .tolerance = 1e-3};
  const Packing p = three_squares();
  double lo = 2.0, hi = 0.0, l2 = 0.0;
  for (std::size_t n = 1; n <= 3; ++n) {
    const CircleDomainMap m = koebe_iterate(p, n, kInf, SpherePoint(Complex(-1, -1)), SpherePoint(Complex(3, -1)));
    const ConformalityResult whole = conformality_domain_check(m, cfg);
    const ConformalityResult disk = conformality_disk_check(m, {SpherePoint(Complex(-0.6, 0.5)), 0.2});
    for (double r : {whole.ratio, disk.ratio}) {
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    l2 = std::max(l2, whole.lhs);
  }
  for (const SequenceStage& st : carpet_sequence().stages)
    if (st.converged) l2 = std::max(l2, st.derivative_l2);
  o.require(lo >= 0.99 && hi <= 1.01 && l2 <= 4.0 * kPi * 1.02);
  o.detail << "ratios in [" << lo << ", " << hi << "], max derivative L2 over all stages " << l2;
}

void criterion5(Outcome& o) {
  const SequenceReport& r = carpet_sequence();
  const auto t0 = Clock::now();
  for (const SequenceStage& s : r.stages) o.require(s.converged);

  int bad = 0;
  std::ostringstream rises;
  for (std::size_t i = 0; i < r.deviation.size(); ++i) {
    const auto& row = r.deviation[i];
    std::size_t prev = row.size();
    for (std::size_t a = 0; a < row.size(); ++a) {
      if (std::isnan(row[a])) continue;
      if (prev < row.size() && row[a] > row[prev])
        rises << " i=" << i << " n " << r.stages[prev].n << "->" << r.stages[a].n << " (" << row[prev] << " -> "
              << row[a] << ")";
      prev = a;
    }
    std::vector<double> v;
    for (double d : row)
      if (!std::isnan(d)) v.push_back(d);
    if (!nonincreasing(v)) ++bad;
  }
  o.require(bad == 0);
  o.detail << "(a) " << bad << " of " << r.deviation.size() << " indices non-monotone" << rises.str();

  std::vector<double> md;
  for (const SequenceStage& s : r.stages)
    if (s.n >= r.fixed_count && std::isfinite(s.min_distance_fixed)) md.push_back(s.min_distance_fixed);
  const bool md_ok = !md.empty() && *std::min_element(md.begin(), md.end()) > 0.0 && spread(md) <= 0.2;
  o.require(md_ok);
  o.detail << "; (b) fixed min distance spread " << (md.empty() ? 0.0 : spread(md));

  bool points = true;
  for (const SequenceStage& s : r.stages) points = points && s.points_match;
  SequenceConfig pc;
  pc.ns = {5, 10, 13};
  pc.curves = 4;
  pc.deltas = {0.4, 0.2};
  const SequenceReport pr = run_sequence(carpet(2, 4), pc);
  for (const SequenceStage& s : pr.stages) {
    points = points && s.converged && s.points_match;
    for (std::size_t i = 9; i < s.outputs.size(); ++i) points = points && s.outputs[i].is_point();
  }
  o.require(points);
  o.detail << "; (c) points " << (points ? "match" : "differ");

  const double final_l2 = r.stages.back().l2_diameters;
  double max_l2 = 0.0, two_sided = 0.0;
  for (const SequenceStage& s : r.stages) {
    max_l2 = std::max(max_l2, s.l2_diameters);
    two_sided = std::max(two_sided, std::abs(s.l2_diameters / final_l2 - 1.0));
  }
  o.require(max_l2 <= 1.2 * final_l2);
  o.detail << "; (d) max l2 / final " << max_l2 / final_l2 << " (two-sided " << two_sided << ")";

  const double t = sequence_seconds + since(t0);
  o.require(t < 1200.0);
  o.detail << " (" << t << " s)";
}

void criterion6(Outcome& o) {
  const auto t0 = Clock::now();
  const auto e = rect(-1, -0.06, 0.0, 0.0, 1.0);
  const std::vector<PeripheralContinuum> probes{
      PeripheralContinuum::chart_disk(-2, {1.15, 0.5}, 0.06), PeripheralContinuum::chart_disk(-3, {0.5, 1.15}, 0.06),
      PeripheralContinuum::chart_disk(-4, {0.5, -0.15}, 0.06), rect(-5, 1.05, 1.05, 1.2, 1.2),
      rect(-6, 1.05, -0.2, 1.2, -0.05)};
  const ProbeTable t = nondegeneracy_probe(carpet(3), e, probes);
  double lowest = std::numeric_limits<double>::infinity();
  for (const ProbeEntry& x : t.entries) lowest = std::min(lowest, x.value);
  o.require(lowest > 0.0 && spread(t.min_per_n) <= 0.25);
  const double secs = since(t0);
  o.require(secs < 900.0);
  o.detail << t.entries.size() << " entries, smallest " << lowest << ", min per n";
  for (double v : t.min_per_n) o.detail << " " << v;
  o.detail << ", spread " << spread(t.min_per_n) << " (" << secs << " s)";
}

void criterion7(Outcome& o) {
  const SequenceReport& r = carpet_sequence();
  int maps = 0, fewest = std::numeric_limits<int>::max(), failed = 0;
  for (const SequenceStage& s : r.stages) {
    if (!s.converged) continue;
    ++maps;
    int used = 0;
    for (const UpperGradientCheck& c : s.checks) {
      if (c.skipped) continue;
      ++used;
      if (!c.pass) ++failed;
    }
    fewest = std::min(fewest, used);
  }
  o.require(maps > 0 && fewest >= 50 && failed == 0);
  o.detail << maps << " maps, at least " << fewest << " evaluated curves each, " << failed << " failures";
}

void criterion8(Outcome& o) {
  const auto t0 = Clock::now();
  int holds = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed)
    if (coarea_check(random_coarea_instance(seed)).holds) ++holds;
  o.require(holds == 20);
  o.detail << "co-area " << holds << "/20";

  const PeripheralContinuum big = carpet(1).continua[0];
  const auto middle = rect(-1, 0.2, 0.2, 0.8, 0.8);
  for (const auto& [e, a] : {std::pair{big, 1.0}, std::pair{middle, 0.1}}) {
    std::set<int> counts;
    o.detail << ", counts";
    for (int level : {3, 4, 5}) {
      const int c = count_large_intersecting(carpet(level), e, a);
      counts.insert(c);
      o.detail << " " << c;
    }
    o.require(counts.size() == 1);
  }

  const MobiusFatnessSurvey s = mobius_fatness_survey(big, 2024, 100);
  o.require(s.maps == 100 && s.min_tau > 0.0);
  const double t = since(t0);
  o.require(t < 300.0);
  o.detail << ", mobius min tau " << s.min_tau << " over " << s.maps << " maps (" << t << " s)";
}

void criterion9(Outcome& o) {
  const Packing p = carpet(2);
  auto map_bytes = [&] {
    KoebeConfig kc;
    const CircleDomainMap m = koebe_iterate(p, 5, kInf, SpherePoint(Complex(0, 0)), SpherePoint(Complex(1, 0)), kc);
    return dump_artifact(make_artifact("map", {{"koebe", to_json(kc)}, {"n", 5}}, 0, {{"map", to_json(m)}}));
  };
  auto modulus_bytes = [&] {
    ModulusInstance in = strip_instance({-0.25, 0.0, 1.25, 1.0}, ModulusMode::transboundary);
    in.packing = p;
    const ModulusConfig mc;
    const ModulusResult r = compute_modulus(discretize(in, 1.0 / 27), mc);
    return dump_artifact(make_artifact("modulus", {{"modulus", to_json(mc)}}, 0, {{"result", to_json(r)}}));
  };
  auto sequence_bytes = [&] {
    SequenceConfig c;
    c.ns = {1, 3};
    c.curves = 3;
    c.seed = 7;
    return dump_artifact(
        make_artifact("sequence", {{"sequence", to_json(c)}}, c.seed, {{"sequence", to_json(run_sequence(p, c))}}));
  };
  for (const auto& [name, f] : {std::pair<const char*, std::function<std::string()>>{"map", map_bytes},
                                {"modulus", modulus_bytes},
                                {"sequence", sequence_bytes}}) {
    const std::string a = f(), b = f();
    o.require(a == b);
    o.detail << name << " " << (a == b ? "identical" : "differs") << " (" << a.size() << " bytes) ";
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"plain modulus oracles", criterion1},
      {"conformal invariance", criterion2},
      {"uniformization fixed points", criterion3},
      {"conformality identity", criterion4},
      {"convergence diagnostics", criterion5},
      {"non-degeneracy probe", criterion6},
      {"upper-gradient spot checks", criterion7},
      {"property suites", criterion8},
      {"determinism", criterion9},
  };
  std::set<int> selected;
  for (int k = 1; k < argc; ++k) selected.insert(std::atoi(argv[k]));
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " error: " << e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first, o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
