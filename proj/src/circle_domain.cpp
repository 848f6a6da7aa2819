#include "circlelab/circle_domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace circlelab {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool interior_of(const PeripheralContinuum& k, const SpherePoint& z) {
  if (k.is_point()) return false;
  if (k.is_disk()) return spherical_distance(k.disk_cap().center, z) < k.disk_cap().radius * (1.0 - 1e-12);
  if (z.is_infinity()) return false;
  const Complex w = z.value();
  const auto& v = k.polygon_vertices();
  if (!polygon_contains(v, w)) return false;
  double d = std::abs(v[0] - w);
  for (std::size_t i = 0; i < v.size(); ++i) d = std::min(d, point_segment_distance(w, v[i], v[(i + 1) % v.size()]));
  return d > 1e-12 * (1.0 + std::abs(w));
}

struct Component {
  std::size_t index = 0;
  bool point = false;
  bool polygon = false;
  bool zipped = false;
  std::vector<Complex> samples;
};

// Complex-valued stage evaluation for finite chart points.
Complex apply_finite(const StageMap& s, Complex z) {
  return std::visit(Overloaded{[&](const MobiusTransform& t) { return t(SpherePoint(z)).value(); },
                               [&](const ExteriorMap& e) { return e(z); },
                               [&](const ZipperMap& m) { return m(z); }},
                    s);
}

void check_cyclic_order(const std::vector<Complex>& w) {
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double step = std::arg(w[(j + 1) % w.size()] / w[j]);
    if (!(step > 0.0)) throw NumericalError("exterior map lost univalence on its own boundary");
  }
}

}  // namespace

SpherePoint apply_stage(const StageMap& s, const SpherePoint& z) {
  return std::visit(Overloaded{[&](const MobiusTransform& t) { return t(z); },
                               [&](const ExteriorMap& e) {
                                 return z.is_infinity() ? SpherePoint::infinity() : SpherePoint(e(z.value()));
                               },
                               [&](const ZipperMap& m) { return m(z); }},
                    s);
}

SpherePoint invert_stage(const StageMap& s, const SpherePoint& w) {
  return std::visit(Overloaded{[&](const MobiusTransform& t) { return t.inverse()(w); },
                               [&](const ExteriorMap& e) {
                                 return w.is_infinity() ? SpherePoint::infinity() : SpherePoint(e.inverse(w.value()));
                               },
                               [&](const ZipperMap& m) { return m.inverse(w); }},
                    s);
}

double stage_spherical_derivative(const StageMap& s, const SpherePoint& z) {
  return stage_spherical_derivative(s, z, apply_stage(s, z));
}

double stage_spherical_derivative(const StageMap& s, const SpherePoint& z, const SpherePoint& fz) {
  return std::visit(Overloaded{[&](const MobiusTransform& t) { return t.spherical_derivative(z); },
                               [&](const auto& m) {
                                 // Exterior stages are z + O(1) at infinity.
                                 if (z.is_infinity() || fz.is_infinity()) return 1.0;
                                 const Complex u = z.value();
                                 return circlelab::spherical_derivative(u, fz.value(), m.derivative(u));
                               }},
                    s);
}

CircleDomainMap::CircleDomainMap(Packing input, std::array<SpherePoint, 3> normalization, std::vector<Stage> stages,
                                 std::vector<PeripheralContinuum> outputs, KoebeIterationReport report)
    : input_(std::move(input)),
      normalization_(normalization),
      stages_(std::move(stages)),
      outputs_(std::move(outputs)),
      report_(std::move(report)) {}

CircleDomainMap CircleDomainMap::from_mobius(const Packing& input, const MobiusTransform& t) {
  std::vector<PeripheralContinuum> outputs;
  for (const auto& k : input.continua) outputs.push_back(mobius_image(k, t));
  const MobiusTransform inv = t.inverse();
  KoebeIterationReport report;
  report.converged = true;
  return CircleDomainMap(input, {inv(SpherePoint::infinity()), inv(SpherePoint(0.0)), inv(SpherePoint(1.0))},
                         {Stage{-1, t}}, std::move(outputs), report);
}

bool CircleDomainMap::in_domain(const SpherePoint& z) const {
  return std::none_of(input_.continua.begin(), input_.continua.end(),
                      [&](const PeripheralContinuum& k) { return interior_of(k, z); });
}

bool CircleDomainMap::in_image(const SpherePoint& w) const {
  const double final_res = report_.residuals.empty() ? 0.0 : report_.residuals.back();
  const double slack = std::max(1e-9, 10.0 * final_res);
  return std::none_of(outputs_.begin(), outputs_.end(), [&](const PeripheralContinuum& k) {
    if (!k.is_disk()) return false;
    return spherical_distance(k.disk_cap().center, w) < k.disk_cap().radius * (1.0 - slack);
  });
}

SpherePoint CircleDomainMap::evaluate_unchecked(const SpherePoint& z) const {
  SpherePoint w = z;
  for (const Stage& s : stages_) w = apply_stage(s.map, w);
  return w;
}

SpherePoint CircleDomainMap::inverse_unchecked(const SpherePoint& w) const {
  SpherePoint z = w;
  for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) z = invert_stage(it->map, z);
  return z;
}

SpherePoint CircleDomainMap::operator()(const SpherePoint& z) const {
  if (!in_domain(z)) throw DomainError("point lies inside a peripheral continuum");
  return evaluate_unchecked(z);
}

SpherePoint CircleDomainMap::inverse(const SpherePoint& w) const {
  if (!in_image(w)) throw DomainError("point lies inside an output disk");
  return inverse_unchecked(w);
}

double CircleDomainMap::spherical_derivative(const SpherePoint& z) const {
  if (!in_domain(z)) throw DomainError("point lies inside a peripheral continuum");
  double d = 1.0;
  SpherePoint w = z;
  for (const Stage& s : stages_) {
    const SpherePoint next = apply_stage(s.map, w);
    d *= stage_spherical_derivative(s.map, w, next);
    w = next;
  }
  return d;
}

double CircleDomainMap::inverse_spherical_derivative(const SpherePoint& w) const {
  if (!in_image(w)) throw DomainError("point lies inside an output disk");
  return inverse_spherical_derivative_unchecked(w);
}

double CircleDomainMap::inverse_spherical_derivative_unchecked(const SpherePoint& w) const {
  double d = 1.0;
  SpherePoint u = w;
  for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
    const SpherePoint z = invert_stage(it->map, u);
    d *= stage_spherical_derivative(it->map, z, u);
    u = z;
  }
  return 1.0 / d;
}

Packing CircleDomainMap::output_packing() const {
  Packing out;
  out.label = input_.label + " (circle domain)";
  out.continua = outputs_;
  return out;
}

CircleDomainMap koebe_iterate(const Packing& p, std::size_t n, const SpherePoint& zeta_inf, const SpherePoint& zeta_0,
                              const SpherePoint& zeta_1, const KoebeConfig& config) {
  if (n > p.size()) throw DomainError("n exceeds the packing size");
  if (n > config.component_cap) throw DomainError("n exceeds the component cap");
  if (config.samples < 4 * config.degree) throw DomainError("Koebe iteration needs samples >= 4 * degree");
  const Packing input = p.prefix(n);
  for (const auto& k : input.continua)
    for (const SpherePoint* z : {&zeta_inf, &zeta_0, &zeta_1})
      if (k.contains(*z)) throw DomainError("normalization point lies in a peripheral continuum");
  if (spherical_distance(zeta_inf, zeta_0) == 0.0 || spherical_distance(zeta_inf, zeta_1) == 0.0 ||
      spherical_distance(zeta_0, zeta_1) == 0.0)
    throw DomainError("normalization points must be distinct");

  const MobiusTransform m0 = zeta_inf.is_infinity() ? MobiusTransform::identity()
                                                    : MobiusTransform(0.0, 1.0, 1.0, -zeta_inf.value());
  std::vector<Stage> stages{Stage{-1, m0}};
  std::vector<Component> comps(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& k = input.continua[i];
    Component& c = comps[i];
    c.index = i;
    c.point = k.is_point();
    c.polygon = k.is_polygon();
    const auto pts = c.point ? std::vector<SpherePoint>{k.point_location()}
                             : k.boundary_points(config.samples, c.polygon ? config.grading : 1.0);
    for (const auto& q : pts) c.samples.push_back(m0(q).value());
    if (!c.point && signed_chart_area(c.samples) <= 0.0) throw DomainError("component boundary is degenerate");
  }
  std::vector<Complex> extra = {m0(zeta_0).value(), m0(zeta_1).value()};

  KoebeIterationReport report;
  report.tolerance = config.tolerance;
  const bool any_disk = std::any_of(comps.begin(), comps.end(), [](const Component& c) { return !c.point; });

  auto map_all = [&](const StageMap& s, std::size_t active) {
    for (Component& c : comps) {
      if (c.index == active) continue;
      for_each_index(config.exec, c.samples.size(), [&](std::size_t j) { c.samples[j] = apply_finite(s, c.samples[j]); });
    }
    for (Complex& z : extra) z = apply_finite(s, z);
  };
  auto check_collisions = [&](std::size_t active, double radius, double slack) {
    const double limit = radius * (1.0 - slack);
    for (const Component& c : comps) {
      if (c.index == active) continue;
      for (const Complex& w : c.samples)
        if (!(std::abs(w) > limit))
          throw NumericalError("component " + std::to_string(c.index) + " collided with component " +
                               std::to_string(active) + " in sweep " + std::to_string(report.sweeps));
    }
    for (const Complex& w : extra)
      if (!(std::abs(w) > limit)) throw NumericalError("normalization point swallowed by a component");
  };

  while (any_disk && !report.converged) {
    if (report.sweeps >= config.max_sweeps)
      throw ConvergenceError("Koebe iteration did not reach tolerance within " + std::to_string(config.max_sweeps) +
                                 " sweeps",
                             report);
    ++report.sweeps;
    for (Component& c : comps) {
      if (c.point) continue;
      const int id = static_cast<int>(c.index);
      if (c.polygon && !c.zipped && config.zipper_for_polygons) {
        ZipperMap z(c.samples);
        const double r = z.capacity();
        const auto count = c.samples.size();
        c.samples.resize(count);
        for (std::size_t j = 0; j < count; ++j) c.samples[j] = std::polar(r, 2.0 * kPi * double(j) / double(count));
        c.zipped = true;
        stages.push_back(Stage{id, std::move(z)});
        map_all(stages.back().map, c.index);
        check_collisions(c.index, r, 1e-9);
        continue;
      }
      const CircleFit fit = fit_circle(c.samples);
      if (fit.residual <= 1e-13) {
        const MobiusTransform shift(1.0, -fit.circle.center, 0.0, 1.0);
        for (Complex& w : c.samples) w -= fit.circle.center;
        stages.push_back(Stage{id, shift});
        map_all(stages.back().map, c.index);
        check_collisions(c.index, fit.circle.radius, 1e-9 + 2.0 * fit.residual);
        continue;
      }
      ExteriorMap e = fit_exterior_map(c.samples, {config.degree});
      for (int m = 2 * config.degree; e.fit_residual > 0.25 * config.tolerance && 4 * m <= config.samples; m *= 2) {
        ExteriorMap finer;
        try {
          finer = fit_exterior_map(c.samples, {m});
        } catch (const NumericalError&) {
          break;
        }
        if (!(finer.fit_residual < e.fit_residual)) break;
        e = std::move(finer);
      }
      for_each_index(config.exec, c.samples.size(), [&](std::size_t j) { c.samples[j] = e(c.samples[j]); });
      check_cyclic_order(c.samples);
      const double r = e.capacity(), res = e.fit_residual;
      stages.push_back(Stage{id, std::move(e)});
      map_all(stages.back().map, c.index);
      check_collisions(c.index, r, 1e-9 + 2.0 * res);
    }
    double worst = 0.0;
    for (const Component& c : comps)
      if (!c.point) worst = std::max(worst, fit_circle(c.samples).residual);
    report.residuals.push_back(worst);
    report.converged = worst <= config.tolerance;
  }
  if (!any_disk) {
    report.residuals.push_back(0.0);
    report.sweeps = 1;
    report.converged = true;
  }

  const Complex w0 = extra[0], w1 = extra[1];
  if (w0 == w1) throw NumericalError("normalization points merged");
  const MobiusTransform a(1.0 / (w1 - w0), -w0 / (w1 - w0), 0.0, 1.0);
  stages.push_back(Stage{-1, a});

  std::vector<PeripheralContinuum> outputs;
  for (const Component& c : comps) {
    const int id = input.continua[c.index].id();
    if (c.point) {
      outputs.push_back(PeripheralContinuum::point(id, a(SpherePoint(c.samples[0]))));
      continue;
    }
    const Circle circle = fit_circle(c.samples).circle;
    outputs.push_back(
        PeripheralContinuum::chart_disk(id, (circle.center - w0) / (w1 - w0), circle.radius / std::abs(w1 - w0)));
  }
  return CircleDomainMap(input, {zeta_inf, zeta_0, zeta_1}, std::move(stages), std::move(outputs), report);
}

PushedSet pushforward_set(const CircleDomainMap& m, const std::vector<SpherePoint>& samples,
                          const std::vector<int>& touched) {
  PushedSet out;
  std::vector<char> hit(m.outputs().size(), 0);
  for (int t : touched)
    if (t >= 0 && static_cast<std::size_t>(t) < hit.size()) hit[static_cast<std::size_t>(t)] = 1;
  const auto& continua = m.input().continua;
  for (const SpherePoint& z : samples) {
    bool inside = false;
    for (std::size_t i = 0; i < continua.size(); ++i)
      if (interior_of(continua[i], z) || (continua[i].is_point() && continua[i].point_location() == z)) {
        hit[i] = 1;
        inside = true;
      }
    if (!inside) out.points.push_back(m.evaluate_unchecked(z));
  }
  for (std::size_t i = 0; i < hit.size(); ++i)
    if (hit[i]) out.components.push_back(static_cast<int>(i));
  return out;
}

double pushed_diameter(const CircleDomainMap& m, const PushedSet& s, int circle_samples) {
  std::vector<SpherePoint> pts = s.points;
  for (int c : s.components) {
    const auto& k = m.outputs()[static_cast<std::size_t>(c)];
    if (k.is_point()) {
      pts.push_back(k.point_location());
    } else {
      const auto b = k.boundary_points(circle_samples);
      pts.insert(pts.end(), b.begin(), b.end());
    }
  }
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, spherical_distance(pts[i], pts[j]));
  return d;
}

}  // namespace circlelab
