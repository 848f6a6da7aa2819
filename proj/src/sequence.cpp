#include "circlelab/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "circlelab/errors.hpp"
#include "circlelab/random.hpp"

namespace circlelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const Cap* disk_of(const PeripheralContinuum& k) { return k.is_disk() ? &k.disk_cap() : nullptr; }

double min_disk_distance(const std::vector<PeripheralContinuum>& out, std::size_t limit) {
  double best = kInf;
  const std::size_t n = std::min(limit, out.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (out[i].is_disk() && out[j].is_disk()) best = std::min(best, set_distance(out[i], out[j]));
  return best;
}

double segment_point_distance(Complex a, Complex b, Complex p) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  const double t = len2 > 0.0 ? std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0) : 0.0;
  return std::abs(a + t * d - p);
}

SequenceStage run_stage(const Packing& p, std::size_t n, std::size_t fixed, const SequenceConfig& c,
                        std::optional<CircleDomainMap>& map) {
  SequenceStage s;
  s.n = n;
  try {
    map = koebe_iterate(p, n, c.normalization[0], c.normalization[1], c.normalization[2], c.koebe);
  } catch (const ConvergenceError& e) {
    s.error = e.what();
    s.sweeps = e.report().sweeps;
    s.residual = e.report().residuals.empty() ? kNaN : e.report().residuals.back();
    return s;
  } catch (const Error& e) {
    s.error = e.what();
    return s;
  }
  const CircleDomainMap& m = *map;
  s.converged = true;
  s.sweeps = m.report().sweeps;
  s.residual = m.report().residuals.empty() ? 0.0 : m.report().residuals.back();
  s.outputs = m.outputs();
  s.min_distance = min_disk_distance(s.outputs, s.outputs.size());
  s.min_distance_fixed = min_disk_distance(s.outputs, fixed);
  for (const auto& k : s.outputs) {
    s.fatness.push_back(estimate_fatness(k, c.fatness, Exec::serial).tau_hat);
    s.fatness_baseline.push_back(
        k.is_disk() ? estimate_fatness(PeripheralContinuum::disk(k.id(), {SpherePoint(Complex(0.0, 0.0)), k.disk_cap().radius}),
                                       c.fatness, Exec::serial)
                          .tau_hat
                    : kInf);
  }
  s.points_match = true;
  for (std::size_t i = 0; i < s.outputs.size(); ++i)
    s.points_match = s.points_match && s.outputs[i].is_point() == p.continua[i].is_point();
  s.l2_diameters = l2_diameters(m.output_packing());
  s.derivative_l2 = conformality_domain_check(m, c.quadrature, Exec::serial).lhs;
  s.domain_area = domain_area(m.input());
  s.checks = upper_gradient_spot_check(m, random_curves(m, c.seed ^ (0x9e3779b97f4a7c15ULL * n), c.curves),
                                       c.curve_tolerance, 50, Exec::serial);
  s.equicontinuity = equicontinuity_table(m, c.deltas, Exec::serial);
  return s;
}

}  // namespace

SequenceReport run_sequence(const Packing& p, const SequenceConfig& config) {
  if (config.ns.empty()) throw DomainError("sequence needs at least one n");
  for (std::size_t a = 1; a < config.ns.size(); ++a)
    if (config.ns[a] <= config.ns[a - 1]) throw DomainError("sequence n values must increase");
  if (config.ns.back() > p.size()) throw DomainError("sequence n exceeds the packing size");
  if (config.ns.back() > config.koebe.component_cap) throw DomainError("sequence n exceeds the component cap");
  if (config.curves < 1) throw DomainError("sequence needs upper-gradient curves");
  SequenceReport r;
  r.input = p;
  r.config = config;
  for (std::size_t n : config.ns)
    if (n >= 2) {
      r.fixed_count = n;
      break;
    }
  const std::size_t count = config.ns.size();
  r.stages.resize(count);
  r.maps.resize(count);
  // Stages are independent; each writes its own slot.
  for_each_index(config.exec, count,
                 [&](std::size_t a) { r.stages[a] = run_stage(p, config.ns[a], r.fixed_count, config, r.maps[a]); });

  const std::size_t nmax = config.ns.back();
  r.hausdorff.assign(nmax, std::vector<std::vector<double>>(count, std::vector<double>(count, kNaN)));
  r.deviation.assign(nmax, std::vector<double>(count, kNaN));
  for (std::size_t i = 0; i < nmax; ++i)
    for (std::size_t a = 0; a < count; ++a)
      for (std::size_t b = 0; b < count; ++b) {
        const auto& sa = r.stages[a];
        const auto& sb = r.stages[b];
        if (!sa.converged || !sb.converged || i >= sa.n || i >= sb.n) continue;
        r.hausdorff[i][a][b] = a == b ? 0.0 : hausdorff_distance(sa.outputs[i], sb.outputs[i]);
      }
  for (std::size_t i = 0; i < nmax; ++i)
    for (std::size_t a = 0; a < count; ++a) {
      double sup = kNaN;
      for (std::size_t b = a + 1; b < count; ++b) {
        const double h = r.hausdorff[i][a][b];
        if (!std::isnan(h)) sup = std::isnan(sup) ? h : std::max(sup, h);
      }
      r.deviation[i][a] = sup;
    }
  return r;
}

std::vector<UpperGradientCheck> upper_gradient_spot_check(const CircleDomainMap& m,
                                                          const std::vector<std::vector<Complex>>& curves,
                                                          double tolerance, int steps_per_unit, Exec exec) {
  if (steps_per_unit < 1) throw DomainError("upper-gradient quadrature needs steps");
  std::vector<Cap> caps;
  std::vector<int> cap_index;
  std::vector<Complex> punctures;
  for (std::size_t k = 0; k < m.outputs().size(); ++k) {
    const auto& o = m.outputs()[k];
    if (const Cap* c = disk_of(o)) {
      caps.push_back(*c);
      cap_index.push_back(static_cast<int>(k));
    } else if (o.is_point() && !o.point_location().is_infinity()) {
      punctures.push_back(o.point_location().value());
    }
  }
  static const double g = 1.0 / std::sqrt(3.0);
  std::vector<UpperGradientCheck> out(curves.size());
  for_each_index(exec, curves.size(), [&](std::size_t idx) {
    const auto& curve = curves[idx];
    UpperGradientCheck& ck = out[idx];
    if (curve.empty()) {
      ck.skipped = true;
      ck.note = "empty curve";
      return;
    }
    for (Complex z : {curve.front(), curve.back()})
      if (!m.in_image(SpherePoint(z))) {
        ck.skipped = true;
        ck.note = "endpoint outside the circle domain";
        return;
      }
    for (Complex q : punctures)
      for (std::size_t s = 0; s < curve.size(); ++s) {
        const Complex b = s + 1 < curve.size() ? curve[s + 1] : curve[s];
        if (segment_point_distance(curve[s], b, q) < 1e-9) {
          ck.skipped = true;
          ck.note = "curve passes through a degenerate component";
          return;
        }
      }
    ck.lhs = spherical_distance(m.inverse(SpherePoint(curve.front())), m.inverse(SpherePoint(curve.back())));
    std::vector<char> hit(caps.size(), 0);
    auto integrand = [&](Complex z) {
      const SpherePoint w(z);
      for (std::size_t k = 0; k < caps.size(); ++k)
        if (cap_contains(caps[k], w)) {
          hit[k] = 1;
          return 0.0;
        }
      return m.inverse_spherical_derivative_unchecked(w) * conformal_factor(z);
    };
    for (std::size_t s = 0; s + 1 < curve.size(); ++s) {
      const Complex a = curve[s], b = curve[s + 1];
      const double len = std::abs(b - a);
      const int steps = std::max(1, static_cast<int>(std::ceil(len * steps_per_unit)));
      for (int k = 0; k < steps; ++k) {
        const double t0 = static_cast<double>(k) / steps, t1 = static_cast<double>(k + 1) / steps;
        const double tm = 0.5 * (t0 + t1), th = 0.5 * (t1 - t0);
        ck.length += 0.5 * (integrand(a + (tm - g * th) * (b - a)) + integrand(a + (tm + g * th) * (b - a))) *
                     (t1 - t0) * len;
      }
    }
    for (std::size_t k = 0; k < caps.size(); ++k)
      if (hit[k]) {
        ck.touched.push_back(cap_index[k]);
        ck.jumps += diameter(m.input().continua[static_cast<std::size_t>(cap_index[k])]);
      }
    ck.rhs = ck.length + ck.jumps;
    ck.pass = ck.lhs <= ck.rhs * (1.0 + tolerance);
  });
  return out;
}

std::vector<std::vector<Complex>> random_curves(const CircleDomainMap& m, std::uint64_t seed, int count) {
  double x0 = -1.0, y0 = -1.0, x1 = 1.0, y1 = 1.0;
  for (const auto& o : m.outputs())
    if (o.is_disk())
      if (const auto c = circle_from_cap(o.disk_cap())) {
        x0 = std::min(x0, c->center.real() - c->radius);
        x1 = std::max(x1, c->center.real() + c->radius);
        y0 = std::min(y0, c->center.imag() - c->radius);
        y1 = std::max(y1, c->center.imag() + c->radius);
      }
  x0 -= 0.5;
  y0 -= 0.5;
  x1 += 0.5;
  y1 += 0.5;
  Rng rng(seed);
  auto point = [&](bool in_domain) {
    for (int tries = 0; tries < 100000; ++tries) {
      const Complex z(rng.uniform(x0, x1), rng.uniform(y0, y1));
      if (!in_domain || m.in_image(SpherePoint(z))) return z;
    }
    throw NumericalError("no sample point in the circle domain");
  };
  std::vector<std::vector<Complex>> curves;
  for (int k = 0; k < count; ++k) {
    if (k == 0) {
      curves.push_back({point(true)});
      continue;
    }
    const Complex a = point(true), b = point(true);
    if (k % 2 == 1)
      curves.push_back({a, b});
    else
      curves.push_back({a, point(false), b});
  }
  return curves;
}

NondegeneracyTable nondegeneracy_table(const SequenceReport& r, const std::vector<SpherePoint>& samples,
                                       const std::vector<int>& touched) {
  NondegeneracyTable t;
  for (std::size_t a = 0; a < r.stages.size(); ++a) {
    if (!r.maps[a]) continue;
    const auto n = static_cast<int>(r.stages[a].n);
    if (std::any_of(touched.begin(), touched.end(), [&](int i) { return i < 0 || i >= n; })) continue;
    const CircleDomainMap& m = *r.maps[a];
    t.n.push_back(r.stages[a].n);
    t.diameter.push_back(pushed_diameter(m, pushforward_set(m, samples, touched)));
  }
  if (t.n.empty()) throw DomainError("no converged stage covers the set");
  const auto it = std::min_element(t.diameter.begin(), t.diameter.end());
  t.minimum = *it;
  t.witness_n = t.n[static_cast<std::size_t>(it - t.diameter.begin())];
  return t;
}

NondegeneracyTable nondegeneracy_table(const SequenceReport& r, std::size_t i) {
  NondegeneracyTable t;
  for (const auto& s : r.stages) {
    if (!s.converged || i >= s.n) continue;
    t.n.push_back(s.n);
    t.diameter.push_back(diameter(s.outputs[i]));
  }
  if (t.n.empty()) throw DomainError("no converged stage contains the component");
  const auto it = std::min_element(t.diameter.begin(), t.diameter.end());
  t.minimum = *it;
  t.witness_n = t.n[static_cast<std::size_t>(it - t.diameter.begin())];
  return t;
}

int clustering_count(const std::vector<PeripheralContinuum>& continua, const std::vector<SpherePoint>& probes) {
  int best = 0;
  for (const SpherePoint& x : probes) {
    int c = 0;
    for (const auto& k : continua)
      if (k.contains(x)) ++c;
    best = std::max(best, c);
  }
  return best;
}

std::vector<SpherePoint> probe_grid(int rows) {
  if (rows < 1) throw DomainError("probe grid needs rows");
  std::vector<SpherePoint> out{SpherePoint::from_unit_vector({0, 0, 1}), SpherePoint::from_unit_vector({0, 0, -1})};
  const double pi = std::acos(-1.0);
  for (int r = 0; r < rows; ++r) {
    const double th = pi * (r + 0.5) / rows;
    for (int k = 0; k < 2 * rows; ++k) {
      const double ph = pi * k / rows;
      out.push_back(SpherePoint::from_unit_vector({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)}));
    }
  }
  return out;
}

std::vector<SpherePoint> vertex_probes(const std::vector<PeripheralContinuum>& continua, int per_continuum) {
  std::vector<SpherePoint> out;
  for (const auto& k : continua) {
    if (k.is_point()) {
      out.push_back(k.point_location());
      continue;
    }
    out.push_back(k.enclosing_cap().center);
    const auto b = k.boundary_points(per_continuum);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

std::vector<EquicontinuityRow> equicontinuity_table(const CircleDomainMap& m, const std::vector<double>& deltas,
                                                    Exec exec) {
  if (deltas.empty() || !(deltas.front() > 0.0)) throw DomainError("equicontinuity table needs positive deltas");
  for (std::size_t k = 1; k < deltas.size(); ++k)
    if (std::abs(deltas[k] - 0.5 * deltas[k - 1]) > 1e-12 * deltas[k - 1])
      throw DomainError("equicontinuity deltas must halve");
  const auto& in = m.input().continua;
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  bool any = false;
  for (const auto& k : in) {
    std::vector<SpherePoint> pts = k.is_point() ? std::vector<SpherePoint>{k.point_location()} : k.boundary_points(64);
    for (const SpherePoint& z : pts) {
      if (z.is_infinity()) continue;
      const Complex v = z.value();
      if (!any) {
        x0 = x1 = v.real();
        y0 = y1 = v.imag();
        any = true;
      }
      x0 = std::min(x0, v.real());
      x1 = std::max(x1, v.real());
      y0 = std::min(y0, v.imag());
      y1 = std::max(y1, v.imag());
    }
  }
  const double side0 = deltas.front() / std::sqrt(2.0);
  x0 -= deltas.front();
  y0 -= deltas.front();
  const int nx0 = std::max(1, static_cast<int>(std::ceil((x1 + deltas.front() - x0) / side0)));
  const int ny0 = std::max(1, static_cast<int>(std::ceil((y1 + deltas.front() - y0) / side0)));
  const int levels = static_cast<int>(deltas.size());
  const int refine = 1 << (levels - 1);
  const int nxf = nx0 * refine, nyf = ny0 * refine;
  const double sf = side0 / refine;
  // Sample lattice with two intervals per finest cell; coarse samples are
  // unions of fine ones.
  const int lx = 2 * nxf + 1, ly = 2 * nyf + 1;
  const std::size_t lattice = static_cast<std::size_t>(lx) * static_cast<std::size_t>(ly);
  std::vector<SpherePoint> image(lattice);
  std::vector<char> inside(lattice, 0);
  for_each_index(exec, lattice, [&](std::size_t q) {
    const int i = static_cast<int>(q % static_cast<std::size_t>(lx)), j = static_cast<int>(q / static_cast<std::size_t>(lx));
    const SpherePoint z(Complex(x0 + 0.5 * sf * i, y0 + 0.5 * sf * j));
    if (m.in_domain(z))
      image[q] = m.evaluate_unchecked(z);
    else
      inside[q] = 1;
  });
  // Touched continua of every finest cell.
  const std::size_t fine = static_cast<std::size_t>(nxf) * static_cast<std::size_t>(nyf);
  std::vector<std::vector<int>> touched(fine);
  for_each_index(exec, fine, [&](std::size_t c) {
    const int i = static_cast<int>(c % static_cast<std::size_t>(nxf)), j = static_cast<int>(c / static_cast<std::size_t>(nxf));
    const double a = x0 + sf * i, b = y0 + sf * j;
    const auto sq = PeripheralContinuum::polygon(-1, {{a, b}, {a + sf, b}, {a + sf, b + sf}, {a, b + sf}});
    for (std::size_t k = 0; k < in.size(); ++k)
      if (intersects(sq, in[k])) touched[c].push_back(static_cast<int>(k));
  });
  std::vector<EquicontinuityRow> rows;
  for (int level = 0; level < levels; ++level) {
    const int span = refine >> level;  // finest cells per side
    const int nx = nxf / span, ny = nyf / span;
    const std::size_t cells = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    std::vector<double> diam(cells, 0.0);
    for_each_index(exec, cells, [&](std::size_t c) {
      const int ci = static_cast<int>(c % static_cast<std::size_t>(nx)), cj = static_cast<int>(c / static_cast<std::size_t>(nx));
      std::vector<SpherePoint> pts;
      std::vector<char> hit(in.size(), 0);
      for (int j = 2 * span * cj; j <= 2 * span * (cj + 1); ++j)
        for (int i = 2 * span * ci; i <= 2 * span * (ci + 1); ++i) {
          const std::size_t q = static_cast<std::size_t>(j) * static_cast<std::size_t>(lx) + static_cast<std::size_t>(i);
          if (!inside[q]) pts.push_back(image[q]);
        }
      for (int j = span * cj; j < span * (cj + 1); ++j)
        for (int i = span * ci; i < span * (ci + 1); ++i)
          for (int k : touched[static_cast<std::size_t>(j) * static_cast<std::size_t>(nxf) + static_cast<std::size_t>(i)])
            hit[static_cast<std::size_t>(k)] = 1;
      for (std::size_t k = 0; k < in.size(); ++k)
        if (hit[k]) {
          const auto& o = m.outputs()[k];
          if (o.is_point()) {
            pts.push_back(o.point_location());
          } else {
            const auto b = o.boundary_points(32);
            pts.insert(pts.end(), b.begin(), b.end());
          }
        }
      double d = 0.0;
      for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b) d = std::max(d, spherical_distance(pts[a], pts[b]));
      diam[c] = d;
    });
    EquicontinuityRow row;
    row.delta = deltas[static_cast<std::size_t>(level)];
    row.sets = static_cast<int>(cells);
    for (double d : diam) row.epsilon = std::max(row.epsilon, d);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace circlelab
