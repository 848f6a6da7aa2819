#include "circlelab/packing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include "circlelab/errors.hpp"
#include "detail.hpp"

namespace circlelab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

Complex edge_point(const std::vector<Complex>& v, std::size_t k, double s) {
  const Complex a = v[k], b = v[(k + 1) % v.size()];
  return a + s * (b - a);
}

// Symmetric grading on [0, 1] clustering toward both ends for g > 1.
double graded(double s, double g) {
  if (g == 1.0) return s;
  const double p = std::pow(s, g), q = std::pow(1.0 - s, g);
  return p / (p + q);
}

double euclid_point_polygon(Complex p, const std::vector<Complex>& v) {
  if (polygon_contains(v, p)) return 0.0;
  double best = kInf;
  for (std::size_t k = 0; k < v.size(); ++k) best = std::min(best, point_segment_distance(p, v[k], v[(k + 1) % v.size()]));
  return best;
}

double spherical_point_edge(const SpherePoint& p, const std::vector<Complex>& v, std::size_t k) {
  auto f = [&](double s) { return spherical_distance(p, SpherePoint(edge_point(v, k, s))); };
  return detail::sampled_minimize(f, 0.0, 1.0, 16).second;
}

double spherical_point_polygon(const SpherePoint& p, const std::vector<Complex>& v) {
  if (!p.is_infinity() && polygon_contains(v, p.value())) return 0.0;
  double best = kInf;
  for (std::size_t k = 0; k < v.size(); ++k) best = std::min(best, spherical_point_edge(p, v, k));
  return best;
}

// Maximum of f over [0, pieces] refined per piece.
template <class F>
double boundary_sup(const PeripheralContinuum& k, F&& f, int samples) {
  double best = -kInf;
  const int pieces = k.boundary_pieces();
  for (int i = 0; i < pieces; ++i) {
    auto g = [&](double t) { return -f(k.boundary_at(i + t)); };
    best = std::max(best, -detail::sampled_minimize(g, 0.0, 1.0, samples).second);
  }
  return best;
}

template <class F>
double boundary_inf(const PeripheralContinuum& k, F&& f, int samples) {
  double best = kInf;
  const int pieces = k.boundary_pieces();
  for (int i = 0; i < pieces; ++i) {
    auto g = [&](double t) { return f(k.boundary_at(i + t)); };
    best = std::min(best, detail::sampled_minimize(g, 0.0, 1.0, samples).second);
  }
  return best;
}

double polygon_spherical_diameter(const std::vector<Complex>& v) {
  const std::size_t n = v.size();
  double vertex_best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) vertex_best = std::max(vertex_best, spherical_distance(v[i], v[j]));
  double best = vertex_best;
  constexpr int grid = 4;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      auto val = [&](double s, double t) {
        return spherical_distance(SpherePoint(edge_point(v, i, s)), SpherePoint(edge_point(v, j, t)));
      };
      double bs = 0.0, bt = 0.0, bv = -1.0;
      for (int a = 0; a <= grid; ++a)
        for (int b = 0; b <= grid; ++b) {
          const double s = static_cast<double>(a) / grid, t = static_cast<double>(b) / grid;
          const double x = val(s, t);
          if (x > bv) {
            bv = x;
            bs = s;
            bt = t;
          }
        }
      if (bv < 0.98 * best) continue;
      for (int round = 0; round < 8; ++round) {
        auto [s1, v1] = detail::golden_minimize([&](double s) { return -val(s, bt); }, 0.0, 1.0, 60);
        if (-v1 > bv) {
          bv = -v1;
          bs = s1;
        }
        auto [t1, v2] = detail::golden_minimize([&](double t) { return -val(bs, t); }, 0.0, 1.0, 60);
        if (-v2 > bv) {
          bv = -v2;
          bt = t1;
        }
      }
      best = std::max(best, bv);
    }
  }
  return best;
}

}  // namespace

PeripheralContinuum PeripheralContinuum::point(int id, const SpherePoint& p) {
  if (!p.is_infinity() && !std::isfinite(std::abs(p.value()))) throw DomainError("point continuum is not finite");
  return {id, PointShape{p}};
}

PeripheralContinuum PeripheralContinuum::disk(int id, const Cap& cap) {
  if (!(cap.radius > 0.0) || !(cap.radius < kPi)) throw DomainError("disk radius must lie in (0, pi)");
  if (!cap.center.is_infinity() && !std::isfinite(std::abs(cap.center.value())))
    throw DomainError("disk center is not finite");
  return {id, DiskShape{cap}};
}

PeripheralContinuum PeripheralContinuum::chart_disk(int id, Complex center, double radius) {
  return disk(id, cap_from_circle({center, radius}));
}

PeripheralContinuum PeripheralContinuum::polygon(int id, std::vector<Complex> vertices) {
  for (const Complex& z : vertices)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("polygon vertex is not finite");
  if (!polygon_is_simple(vertices))
    throw DomainError("polygon " + std::to_string(id) + " is not a simple polygon");
  if (signed_chart_area(vertices) < 0.0) std::reverse(vertices.begin(), vertices.end());
  return {id, PolygonShape{std::move(vertices)}};
}

bool PeripheralContinuum::contains(const SpherePoint& p) const {
  if (const auto* pt = std::get_if<PointShape>(&shape_)) return spherical_distance(pt->location, p) <= 1e-14;
  if (const auto* d = std::get_if<DiskShape>(&shape_)) return cap_contains(d->cap, p, 1e-14);
  if (p.is_infinity()) return false;
  return polygon_contains(polygon_vertices(), p.value());
}

int PeripheralContinuum::boundary_pieces() const {
  if (is_polygon()) return static_cast<int>(polygon_vertices().size());
  return 1;
}

SpherePoint PeripheralContinuum::boundary_at(double t) const {
  if (is_point()) return point_location();
  if (is_disk()) {
    const Cap& c = disk_cap();
    const MobiusTransform r = MobiusTransform::rotation_to(c.center);
    return r(SpherePoint(std::polar(std::tan(0.5 * c.radius), 2.0 * kPi * t)));
  }
  const auto& v = polygon_vertices();
  const double n = static_cast<double>(v.size());
  t = std::clamp(t, 0.0, n);
  auto k = static_cast<std::size_t>(std::floor(t));
  if (k >= v.size()) k = v.size() - 1;
  return SpherePoint(edge_point(v, k, t - static_cast<double>(k)));
}

std::vector<SpherePoint> PeripheralContinuum::boundary_points(int count, double grading) const {
  if (count < 1) throw DomainError("boundary sample count must be positive");
  std::vector<SpherePoint> out;
  if (is_point()) return {point_location()};
  if (is_disk()) {
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(boundary_at(static_cast<double>(i) / count));
    return out;
  }
  const auto& v = polygon_vertices();
  const std::size_t n = v.size();
  if (static_cast<std::size_t>(count) < n) throw DomainError("fewer boundary samples than polygon vertices");
  std::vector<double> len(n);
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) total += len[k] = std::abs(v[(k + 1) % n] - v[k]);
  std::vector<int> per(n);
  int assigned = 0;
  for (std::size_t k = 0; k < n; ++k) {
    per[k] = std::max(1, static_cast<int>(std::lround(count * len[k] / total)));
    assigned += per[k];
  }
  while (assigned < count) {
    std::size_t pick = 0;
    for (std::size_t k = 1; k < n; ++k)
      if (len[k] / per[k] > len[pick] / per[pick]) pick = k;
    ++per[pick];
    ++assigned;
  }
  while (assigned > count) {
    std::size_t pick = n;
    for (std::size_t k = 0; k < n; ++k)
      if (per[k] > 1 && (pick == n || len[k] / (per[k] - 1.0) < len[pick] / (per[pick] - 1.0))) pick = k;
    --per[pick];
    --assigned;
  }
  out.reserve(count);
  for (std::size_t k = 0; k < n; ++k)
    for (int i = 0; i < per[k]; ++i) out.push_back(SpherePoint(edge_point(v, k, graded(static_cast<double>(i) / per[k], grading))));
  return out;
}

Cap PeripheralContinuum::enclosing_cap() const {
  if (is_point()) return {point_location(), 0.0};
  if (is_disk()) return disk_cap();
  Vec3 s;
  for (const Complex& z : polygon_vertices()) s = s + SpherePoint(z).to_unit_vector();
  const SpherePoint c = SpherePoint::from_unit_vector(s);
  const double r = max_point_distance(c, *this, Metric::spherical);
  return {c, r * (1.0 + 1e-9) + 1e-12};
}

Circle PeripheralContinuum::chart_circle() const {
  const auto c = circle_from_cap(disk_cap());
  if (!c) throw DomainError("disk " + std::to_string(id_) + " contains infinity");
  return *c;
}

Packing Packing::prefix(std::size_t n) const {
  Packing p;
  p.label = label;
  p.continua.assign(continua.begin(), continua.begin() + static_cast<std::ptrdiff_t>(std::min(n, continua.size())));
  return p;
}

void Packing::validate() const {
  std::set<int> ids;
  for (const auto& k : continua)
    if (!ids.insert(k.id()).second) throw DomainError("duplicate continuum id " + std::to_string(k.id()));
  std::vector<Cap> caps;
  caps.reserve(continua.size());
  for (const auto& k : continua) caps.push_back(k.enclosing_cap());
  for (std::size_t i = 0; i < continua.size(); ++i)
    for (std::size_t j = i + 1; j < continua.size(); ++j) {
      if (spherical_distance(caps[i].center, caps[j].center) > caps[i].radius + caps[j].radius) continue;
      if (intersects(continua[i], continua[j]))
        throw DomainError("continua " + std::to_string(continua[i].id()) + " and " + std::to_string(continua[j].id()) +
                          " intersect");
    }
}

double point_distance(const SpherePoint& a, const SpherePoint& b, Metric metric) {
  if (metric == Metric::spherical) return spherical_distance(a, b);
  return std::abs(a.value() - b.value());
}

double point_distance(const SpherePoint& p, const PeripheralContinuum& k, Metric metric) {
  if (k.is_point()) return point_distance(p, k.point_location(), metric);
  if (k.is_disk()) {
    if (metric == Metric::spherical) return std::max(0.0, spherical_distance(p, k.disk_cap().center) - k.disk_cap().radius);
    const Circle c = k.chart_circle();
    return std::max(0.0, std::abs(p.value() - c.center) - c.radius);
  }
  if (metric == Metric::euclidean) return euclid_point_polygon(p.value(), k.polygon_vertices());
  return spherical_point_polygon(p, k.polygon_vertices());
}

double max_point_distance(const SpherePoint& p, const PeripheralContinuum& k, Metric metric) {
  if (k.is_point()) return point_distance(p, k.point_location(), metric);
  if (k.is_disk()) {
    if (metric == Metric::spherical)
      return std::min(kPi, spherical_distance(p, k.disk_cap().center) + k.disk_cap().radius);
    const Circle c = k.chart_circle();
    return std::abs(p.value() - c.center) + c.radius;
  }
  const auto& v = k.polygon_vertices();
  if (metric == Metric::euclidean) {
    double best = 0.0;
    for (const Complex& z : v) best = std::max(best, std::abs(p.value() - z));
    return best;
  }
  return boundary_sup(k, [&](const SpherePoint& q) { return spherical_distance(p, q); }, 16);
}

bool intersects(const PeripheralContinuum& a, const PeripheralContinuum& b) {
  if (a.is_point()) return b.contains(a.point_location());
  if (b.is_point()) return a.contains(b.point_location());
  if (a.is_disk() && b.is_disk())
    return spherical_distance(a.disk_cap().center, b.disk_cap().center) <= a.disk_cap().radius + b.disk_cap().radius;
  if (a.is_disk()) return point_distance(a.disk_cap().center, b, Metric::spherical) <= a.disk_cap().radius;
  if (b.is_disk()) return point_distance(b.disk_cap().center, a, Metric::spherical) <= b.disk_cap().radius;
  const auto& u = a.polygon_vertices();
  const auto& v = b.polygon_vertices();
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (segments_intersect(u[i], u[(i + 1) % u.size()], v[j], v[(j + 1) % v.size()])) return true;
  return polygon_contains(v, u.front()) || polygon_contains(u, v.front());
}

double diameter(const PeripheralContinuum& k, Metric metric) {
  if (k.is_point()) return 0.0;
  if (k.is_disk()) {
    if (metric == Metric::spherical) return std::min(2.0 * k.disk_cap().radius, kPi);
    return 2.0 * k.chart_circle().radius;
  }
  const auto& v = k.polygon_vertices();
  if (metric == Metric::spherical) return polygon_spherical_diameter(v);
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) best = std::max(best, std::abs(v[i] - v[j]));
  return best;
}

double set_distance(const PeripheralContinuum& a, const PeripheralContinuum& b, Metric metric) {
  if (intersects(a, b)) return 0.0;
  if (a.is_point()) return point_distance(a.point_location(), b, metric);
  if (b.is_point()) return point_distance(b.point_location(), a, metric);
  if (a.is_disk() && metric == Metric::spherical)
    return std::max(0.0, point_distance(a.disk_cap().center, b, metric) - a.disk_cap().radius);
  if (b.is_disk() && metric == Metric::spherical)
    return std::max(0.0, point_distance(b.disk_cap().center, a, metric) - b.disk_cap().radius);
  if (a.is_disk()) {
    const Circle c = a.chart_circle();
    return std::max(0.0, point_distance(SpherePoint(c.center), b, metric) - c.radius);
  }
  if (b.is_disk()) {
    const Circle c = b.chart_circle();
    return std::max(0.0, point_distance(SpherePoint(c.center), a, metric) - c.radius);
  }
  const auto& u = a.polygon_vertices();
  const auto& v = b.polygon_vertices();
  if (metric == Metric::euclidean) {
    double best = kInf;
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) {
        const Complex p = u[i], q = u[(i + 1) % u.size()], r = v[j], s = v[(j + 1) % v.size()];
        best = std::min({best, point_segment_distance(p, r, s), point_segment_distance(q, r, s),
                         point_segment_distance(r, p, q), point_segment_distance(s, p, q)});
      }
    return best;
  }
  return boundary_inf(a, [&](const SpherePoint& p) { return point_distance(p, b, metric); }, 16);
}

namespace {

double one_sided_hausdorff(const PeripheralContinuum& a, const PeripheralContinuum& b, Metric metric) {
  if (a.is_point()) return point_distance(a.point_location(), b, metric);
  if (a.is_disk() && b.is_disk()) {
    if (metric == Metric::spherical) {
      const double s = spherical_distance(a.disk_cap().center, b.disk_cap().center);
      return std::max(0.0, std::min(kPi, s + a.disk_cap().radius) - b.disk_cap().radius);
    }
    const Circle ca = a.chart_circle(), cb = b.chart_circle();
    return std::max(0.0, std::abs(ca.center - cb.center) + ca.radius - cb.radius);
  }
  if (b.is_point()) return max_point_distance(b.point_location(), a, metric);
  return boundary_sup(a, [&](const SpherePoint& p) { return point_distance(p, b, metric); }, 32);
}

}  // namespace

double hausdorff_distance(const PeripheralContinuum& a, const PeripheralContinuum& b, Metric metric) {
  return std::max(one_sided_hausdorff(a, b, metric), one_sided_hausdorff(b, a, metric));
}

double relative_distance(const PeripheralContinuum& a, const PeripheralContinuum& b, Metric metric) {
  const double d = set_distance(a, b, metric);
  const double m = std::min(diameter(a, metric), diameter(b, metric));
  if (m == 0.0) return d == 0.0 ? 0.0 : kInf;
  return d / m;
}

double relative_distance(std::span<const SpherePoint> e, std::span<const SpherePoint> f, Metric metric) {
  if (e.empty() || f.empty()) throw DomainError("relative distance of an empty set");
  auto diam = [&](std::span<const SpherePoint> s) {
    double best = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j) best = std::max(best, point_distance(s[i], s[j], metric));
    return best;
  };
  double d = kInf;
  for (const auto& p : e)
    for (const auto& q : f) d = std::min(d, point_distance(p, q, metric));
  const double m = std::min(diam(e), diam(f));
  if (m == 0.0) return d == 0.0 ? 0.0 : kInf;
  return d / m;
}

double l2_diameters(const Packing& packing, Metric metric) {
  double s = 0.0;
  for (const auto& k : packing.continua) {
    const double d = diameter(k, metric);
    s += d * d;
  }
  return std::sqrt(s);
}

int count_large_intersecting(const Packing& packing, const PeripheralContinuum& e, double a, Metric metric) {
  const double threshold = a * diameter(e, metric);
  int count = 0;
  for (const auto& k : packing.continua) {
    if (!intersects(k, e)) continue;
    const double d = diameter(k, metric);
    if (d >= threshold * (1.0 - 1e-12)) ++count;
  }
  return count;
}

PeripheralContinuum mobius_image(const PeripheralContinuum& k, const MobiusTransform& t, int pieces_per_edge) {
  if (k.is_point()) return PeripheralContinuum::point(k.id(), t(k.point_location()));
  if (k.is_disk()) {
    const Cap& c = k.disk_cap();
    std::array<Vec3, 3> b;
    for (int i = 0; i < 3; ++i) b[i] = t(k.boundary_at(i / 3.0)).to_unit_vector();
    Vec3 n = (b[1] - b[0]).cross(b[2] - b[0]).normalized();
    const SpherePoint inner = t(c.center);
    if (n.dot(inner.to_unit_vector()) < n.dot(b[0])) n = n * -1.0;
    const SpherePoint center = SpherePoint::from_unit_vector(n);
    return PeripheralContinuum::disk(k.id(), {center, spherical_distance(center, SpherePoint::from_unit_vector(b[0]))});
  }
  if (t.pole().is_infinity()) {
    // Affine maps send polygons to polygons.
    std::vector<Complex> v;
    for (const Complex& z : k.polygon_vertices()) v.push_back(t(SpherePoint(z)).value());
    return PeripheralContinuum::polygon(k.id(), std::move(v));
  }
  if (k.contains(t.pole())) throw DomainError("Mobius image of polygon contains infinity");
  std::vector<Complex> v;
  const auto& u = k.polygon_vertices();
  for (std::size_t i = 0; i < u.size(); ++i)
    for (int s = 0; s < pieces_per_edge; ++s) {
      const Complex z = u[i] + (static_cast<double>(s) / pieces_per_edge) * (u[(i + 1) % u.size()] - u[i]);
      v.push_back(t(SpherePoint(z)).value());
    }
  return PeripheralContinuum::polygon(k.id(), std::move(v));
}

}  // namespace circlelab
