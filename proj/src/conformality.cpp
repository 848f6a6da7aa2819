#include "circlelab/conformality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "detail.hpp"

namespace circlelab {

namespace {

constexpr double kPi = std::numbers::pi;

double inverse_derivative_sq(const CircleDomainMap& m, const SpherePoint& w) {
  const double d = m.inverse_spherical_derivative_unchecked(w);
  return d * d;
}

SpherePoint lat_long(double u, double phi) {
  const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
  return SpherePoint::from_unit_vector({s * std::cos(phi), s * std::sin(phi), u});
}

struct Cell {
  double u0, u1, p0, p1;
};

class DomainIntegrator {
 public:
  DomainIntegrator(const CircleDomainMap& m, const DomainQuadratureConfig& c) : m_(m), config_(c) {
    for (const auto& k : m.outputs())
      if (k.is_disk()) caps_.push_back(k.disk_cap());
    auto [x, w] = detail::gauss_legendre_rule(4);
    x4_ = x;
    w4_ = w;
    auto [y, v] = detail::gauss_legendre_rule(8);
    x8_ = y;
    w8_ = v;
    cell_tol_ = config_.tolerance / (4.0 * kPi);
  }

  double integrate(const Cell& c, int depth, long& evals) const {
    const int cls = classify(c);
    if (cls < 0) return 0.0;
    const double area = (c.u1 - c.u0) * (c.p1 - c.p0);
    if (cls == 0) {
      if (depth >= config_.max_depth) return gauss(c, x8_, w8_, evals);
      double sum = 0.0;
      for (const Cell& k : split(c)) sum += integrate(k, depth + 1, evals);
      return sum;
    }
    const double coarse = gauss(c, x4_, w4_, evals);
    if (depth >= config_.max_depth) return coarse;
    double fine = 0.0;
    const auto kids = split(c);
    for (const Cell& k : kids) fine += classify(k) < 0 ? 0.0 : gauss(k, x4_, w4_, evals);
    if (std::abs(fine - coarse) <= cell_tol_ * area) return fine;
    double sum = 0.0;
    for (const Cell& k : kids) sum += integrate(k, depth + 1, evals);
    return sum;
  }

 private:
  static std::array<Cell, 4> split(const Cell& c) {
    const double um = 0.5 * (c.u0 + c.u1), pm = 0.5 * (c.p0 + c.p1);
    return {Cell{c.u0, um, c.p0, pm}, Cell{um, c.u1, c.p0, pm}, Cell{c.u0, um, pm, c.p1}, Cell{um, c.u1, pm, c.p1}};
  }

  // -1: inside an output disk, 1: clear of all disks, 0: meets a circle.
  int classify(const Cell& c) const {
    if (caps_.empty()) return 1;
    const SpherePoint mid = lat_long(0.5 * (c.u0 + c.u1), 0.5 * (c.p0 + c.p1));
    double rad = 0.0;
    for (double u : {c.u0, 0.5 * (c.u0 + c.u1), c.u1})
      for (double p : {c.p0, 0.5 * (c.p0 + c.p1), c.p1}) rad = std::max(rad, spherical_distance(mid, lat_long(u, p)));
    rad *= 1.1;
    bool clear = true;
    for (const Cap& cap : caps_) {
      const double d = spherical_distance(mid, cap.center);
      if (d + rad < cap.radius) return -1;
      if (d - rad <= cap.radius) clear = false;
    }
    return clear ? 1 : 0;
  }

  bool outside_caps(const SpherePoint& w) const {
    return std::all_of(caps_.begin(), caps_.end(),
                       [&](const Cap& cap) { return spherical_distance(w, cap.center) > cap.radius; });
  }

  double gauss(const Cell& c, const std::vector<double>& x, const std::vector<double>& w, long& evals) const {
    const double hu = 0.5 * (c.u1 - c.u0), hp = 0.5 * (c.p1 - c.p0);
    const double mu = 0.5 * (c.u0 + c.u1), mp = 0.5 * (c.p0 + c.p1);
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j) {
        const SpherePoint p = lat_long(mu + hu * x[i], mp + hp * x[j]);
        if (!outside_caps(p)) continue;
        ++evals;
        sum += w[i] * w[j] * inverse_derivative_sq(m_, p);
      }
    return sum * hu * hp;
  }

  const CircleDomainMap& m_;
  DomainQuadratureConfig config_;
  std::vector<Cap> caps_;
  std::vector<double> x4_, w4_, x8_, w8_;
  double cell_tol_ = 0.0;
};

}  // namespace

double domain_area(const Packing& p) {
  double a = 4.0 * kPi;
  for (const auto& k : p.continua) {
    if (k.is_disk()) a -= spherical_cap_area(k.disk_cap().radius);
    if (k.is_polygon()) a -= spherical_polygon_area(k.polygon_vertices());
  }
  return a;
}

ConformalityResult conformality_disk_check(const CircleDomainMap& m, const Cap& e, int radial_nodes, int angular_nodes,
                                           Exec exec) {
  for (const auto& k : m.input().continua)
    if (point_distance(e.center, k, Metric::spherical) <= e.radius)
      throw DomainError("test disk meets a peripheral continuum");
  if (radial_nodes < 1 || angular_nodes < 3) throw DomainError("conformality quadrature needs nodes");
  // Chart v with v = 0 at f(center); the rotation is an isometry.
  const MobiusTransform rot = MobiusTransform::rotation_to(m(e.center));
  const double d0 = m.spherical_derivative(e.center);
  auto excess = [&](double rho, double theta) {
    const SpherePoint z = m.inverse_unchecked(rot(SpherePoint(std::polar(rho, theta))));
    return spherical_distance(z, e.center) - e.radius;
  };
  const auto [gx, gw] = detail::gauss_legendre_rule(radial_nodes);
  std::vector<double> slice(static_cast<std::size_t>(angular_nodes));
  std::vector<long> counts(slice.size());
  for_each_index(exec, slice.size(), [&](std::size_t a) {
    const double theta = 2.0 * kPi * static_cast<double>(a) / angular_nodes;
    long evals = 0;
    double hi = std::tan(std::min(0.45 * kPi, d0 * e.radius));
    while (excess(hi, theta) < 0.0) {
      hi *= 1.5;
      ++evals;
      if (hi > 1e8) throw NumericalError("image of the test disk is unbounded");
    }
    double lo = 0.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (excess(mid, theta) < 0.0 ? lo : hi) = mid;
      ++evals;
    }
    const double r_edge = 0.5 * (lo + hi);
    double sum = 0.0;
    for (std::size_t i = 0; i < gx.size(); ++i) {
      const double rho = 0.5 * r_edge * (gx[i] + 1.0);
      const SpherePoint w = rot(SpherePoint(std::polar(rho, theta)));
      sum += gw[i] * rho * area_density(rho) * inverse_derivative_sq(m, w);
      ++evals;
    }
    slice[a] = 0.5 * r_edge * sum;
    counts[a] = evals;
  });
  ConformalityResult out;
  for (std::size_t a = 0; a < slice.size(); ++a) {
    out.lhs += slice[a];
    out.evaluations += counts[a];
  }
  out.lhs *= 2.0 * kPi / angular_nodes;
  out.rhs = spherical_cap_area(e.radius);
  out.ratio = out.lhs / out.rhs;
  return out;
}

ConformalityResult conformality_domain_check(const CircleDomainMap& m, const DomainQuadratureConfig& config,
                                             Exec exec) {
  const DomainIntegrator integ(m, config);
  const int nu = config.base_u, np = config.base_phi;
  const std::size_t cells = static_cast<std::size_t>(nu) * static_cast<std::size_t>(np);
  std::vector<double> part(cells);
  std::vector<long> counts(cells);
  for_each_index(exec, cells, [&](std::size_t k) {
    const int i = static_cast<int>(k) / np, j = static_cast<int>(k) % np;
    const Cell c{-1.0 + 2.0 * i / nu, -1.0 + 2.0 * (i + 1) / nu, 2.0 * kPi * j / np, 2.0 * kPi * (j + 1) / np};
    long evals = 0;
    part[k] = integ.integrate(c, 0, evals);
    counts[k] = evals;
  });
  ConformalityResult out;
  for (std::size_t k = 0; k < cells; ++k) {
    out.lhs += part[k];
    out.evaluations += counts[k];
  }
  out.rhs = domain_area(m.input());
  out.ratio = out.lhs / out.rhs;
  return out;
}

}  // namespace circlelab
