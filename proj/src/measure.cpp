#include "circlelab/measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "circlelab/errors.hpp"
#include "circlelab/random.hpp"

namespace circlelab {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes and weights on [-1, 1], 8 points.
constexpr std::array<double, 8> kGlX = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                        -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                        0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlW = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                        0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                        0.2223810344533745, 0.1012285362903763};

template <class F>
double gauss_legendre(F&& f, double a, double b, int panels) {
  double sum = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (std::size_t k = 0; k < kGlX.size(); ++k) sum += kGlW[k] * f(lo + 0.5 * h * (kGlX[k] + 1.0));
  }
  return 0.5 * h * sum;
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

// Integral of the area form 2(x dy - y dx)/(1+|z|^2) along p + s(q - p), s in [s0, s1].
double edge_integral(Complex p, Complex q, double s0, double s1) {
  const Complex d = q - p;
  const double a = std::norm(d);
  if (a == 0.0 || s1 <= s0) return 0.0;
  const double b = 2.0 * (p.real() * d.real() + p.imag() * d.imag());
  const double c = 1.0 + std::norm(p);
  const double cross = p.real() * d.imag() - p.imag() * d.real();
  const double s = std::sqrt(std::max(4.0 * a * c - b * b, 1e-300));
  return 2.0 * cross * (2.0 / s) * (std::atan((2.0 * a * s1 + b) / s) - std::atan((2.0 * a * s0 + b) / s));
}

double arc_integral(const Circle& disk, double t0, double t1) {
  auto f = [&](double t) {
    const Complex e = std::polar(1.0, t);
    const Complex z = disk.center + disk.radius * e;
    return 2.0 * disk.radius * (std::conj(z) * e).real() / (1.0 + std::norm(z));
  };
  const int panels = std::max(1, static_cast<int>(std::ceil((t1 - t0) / (kPi / 32.0))));
  return gauss_legendre(f, t0, t1, panels);
}

std::vector<Complex> ccw(std::span<const Complex> v) {
  std::vector<Complex> out(v.begin(), v.end());
  if (signed_chart_area(out) < 0.0) std::reverse(out.begin(), out.end());
  return out;
}

SpherePoint antipode(const SpherePoint& x) {
  if (x.is_infinity()) return SpherePoint(0.0);
  const Complex z = x.value();
  if (z == Complex(0.0)) return SpherePoint::infinity();
  return SpherePoint(-1.0 / std::conj(z));
}

double polygon_cap_area(std::span<const Complex> v, const Cap& ball, double total) {
  constexpr double kHuge = 1e7;
  if (const auto c = circle_from_cap(ball); c && c->radius < kHuge) return polygon_disk_area(v, *c);
  if (const auto c = circle_from_cap({antipode(ball.center), kPi - ball.radius}); c && c->radius < kHuge)
    return total - polygon_disk_area(v, *c);
  return -1.0;
}

}  // namespace

double cap_intersection_area(const Cap& a, const Cap& b) {
  const double r1 = a.radius, r2 = b.radius;
  if (r1 <= 0.0 || r2 <= 0.0) return 0.0;
  const double d = spherical_distance(a.center, b.center);
  if (d >= r1 + r2) return 0.0;
  if (d + r2 <= r1) return spherical_cap_area(r2);
  if (d + r1 <= r2) return spherical_cap_area(r1);
  if (r1 + r2 > kPi) {
    // Work with the complementary caps, whose radii sum below pi.
    const Cap ca{antipode(a.center), kPi - r1}, cb{antipode(b.center), kPi - r2};
    return spherical_cap_area(r1) + spherical_cap_area(r2) - 4.0 * kPi + cap_intersection_area(ca, cb);
  }
  const double cd = std::cos(d), sd = std::sin(d);
  const double c1 = std::cos(r1), s1 = std::sin(r1), c2 = std::cos(r2), s2 = std::sin(r2);
  const double g = std::acos(clamp_unit((cd - c1 * c2) / (s1 * s2)));
  const double h1 = std::acos(clamp_unit((c2 - cd * c1) / (sd * s1)));
  const double h2 = std::acos(clamp_unit((c1 - cd * c2) / (sd * s2)));
  return std::max(0.0, 2.0 * kPi - 2.0 * g - 2.0 * c1 * h1 - 2.0 * c2 * h2);
}

double polygon_area_green(std::span<const Complex> polygon) {
  const auto v = ccw(polygon);
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) sum += edge_integral(v[i], v[(i + 1) % v.size()], 0.0, 1.0);
  return sum;
}

double polygon_disk_area(std::span<const Complex> polygon, const Circle& disk) {
  const auto v = ccw(polygon);
  const std::size_t n = v.size();
  double sum = 0.0;
  std::vector<double> angles;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex p = v[i], q = v[(i + 1) % n];
    const Complex d = q - p, w = p - disk.center;
    const double a = std::norm(d);
    const double b = (w * std::conj(d)).real();
    const double c = std::norm(w) - disk.radius * disk.radius;
    const double disc = b * b - a * c;
    if (disc <= 0.0) {
      if (c <= 0.0) sum += edge_integral(p, q, 0.0, 1.0);
      continue;
    }
    const double root = std::sqrt(disc);
    // Stable quadratic roots.
    const double qq = -(b + std::copysign(root, b));
    double sa = qq / a, sb = qq != 0.0 ? c / qq : sa;
    if (sa > sb) std::swap(sa, sb);
    const double lo = std::max(0.0, sa), hi = std::min(1.0, sb);
    if (lo < hi) sum += edge_integral(p, q, lo, hi);
    for (double s : {sa, sb})
      if (s >= 0.0 && s <= 1.0) angles.push_back(std::arg(p + s * d - disk.center));
  }
  if (angles.empty()) {
    if (polygon_contains(v, disk.center + disk.radius)) sum += arc_integral(disk, 0.0, 2.0 * kPi);
    return sum;
  }
  std::sort(angles.begin(), angles.end());
  for (std::size_t k = 0; k < angles.size(); ++k) {
    const double t0 = angles[k];
    const double t1 = k + 1 < angles.size() ? angles[k + 1] : angles.front() + 2.0 * kPi;
    if (t1 - t0 <= 0.0) continue;
    const Complex mid = disk.center + std::polar(disk.radius, 0.5 * (t0 + t1));
    if (polygon_contains(v, mid)) sum += arc_integral(disk, t0, t1);
  }
  return sum;
}

double ball_intersection_area(const PeripheralContinuum& k, const SpherePoint& x, double r) {
  if (r <= 0.0 || k.is_point()) return 0.0;
  if (k.is_disk()) return cap_intersection_area({x, r}, k.disk_cap());
  const auto& v = k.polygon_vertices();
  const double total = polygon_area_green(v);
  if (r >= kPi) return total;
  const double direct = polygon_cap_area(v, {x, r}, total);
  if (direct >= 0.0) return direct;
  // The ball boundary passes through infinity: rotate the sphere and use a
  // finely subdivided image polygon.
  const MobiusTransform q = MobiusTransform::rotation_to(SpherePoint(Complex(0.25, 0.125)));
  constexpr int kPieces = 512;
  std::vector<Complex> image;
  image.reserve(v.size() * kPieces);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (int s = 0; s < kPieces; ++s) {
      const Complex z = v[i] + (static_cast<double>(s) / kPieces) * (v[(i + 1) % v.size()] - v[i]);
      image.push_back(q(SpherePoint(z)).value());
    }
  const double rotated = polygon_cap_area(image, {q(x), r}, polygon_area_green(image));
  if (rotated < 0.0) throw NumericalError("ball intersection area: degenerate ball boundary");
  return rotated;
}

double radial_hit_measure(const PeripheralContinuum& k, const SpherePoint& x, double r) {
  const double dmin = point_distance(x, k, Metric::spherical);
  const double dmax = max_point_distance(x, k, Metric::spherical);
  return std::max(0.0, std::min(r, dmax) - dmin);
}

CoareaInstance random_coarea_instance(std::uint64_t seed, int caps) {
  Rng rng(seed);
  auto random_point = [&] {
    const Vec3 v{rng.normal(), rng.normal(), rng.normal()};
    return SpherePoint::from_unit_vector(v);
  };
  CoareaInstance inst;
  inst.x0 = random_point();
  inst.lipschitz = rng.uniform(0.5, 3.0);
  for (int j = 0; j < caps; ++j) {
    inst.caps.push_back({random_point(), rng.uniform(0.05, 0.6)});
    inst.values.push_back(rng.uniform(0.1, 2.0));
  }
  return inst;
}

CoareaResult coarea_check(const CoareaInstance& inst, int panels) {
  if (inst.caps.size() != inst.values.size()) throw DomainError("co-area instance: caps and values differ in size");
  CoareaResult out;
  for (std::size_t j = 0; j < inst.caps.size(); ++j) {
    const Cap& cap = inst.caps[j];
    const double d = spherical_distance(inst.x0, cap.center);
    auto length = [&](double s) {
      const double ss = std::sin(s);
      if (ss <= 0.0) return 0.0;
      if (d < 1e-14) return s <= cap.radius ? 2.0 * kPi * ss : 0.0;
      const double kappa = (std::cos(cap.radius) - std::cos(s) * std::cos(d)) / (ss * std::sin(d));
      return 2.0 * ss * std::acos(clamp_unit(kappa));
    };
    std::vector<double> breaks = {0.0, kPi};
    for (double b : {std::abs(d - cap.radius), d + cap.radius, 2.0 * kPi - d - cap.radius})
      if (b > 0.0 && b < kPi) breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    double integral = 0.0;
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
      const double w = breaks[b + 1] - breaks[b];
      if (w <= 0.0) continue;
      const int p = std::max(4, static_cast<int>(panels * w / kPi));
      integral += gauss_legendre(length, breaks[b], breaks[b + 1], p);
    }
    // t = L s on the level sets of psi.
    out.lhs += inst.values[j] * inst.lipschitz * integral;
    out.integral += inst.values[j] * spherical_cap_area(cap.radius);
  }
  out.bound = 4.0 * inst.lipschitz / kPi * out.integral;
  out.holds = out.lhs <= out.bound;
  return out;
}

double ball_core_ratio(std::span<const Cap> balls, std::span<const Cap> cores, std::span<const double> weights) {
  if (balls.size() != cores.size() || balls.size() != weights.size())
    throw DomainError("ball/core configuration sizes differ");
  for (std::size_t i = 0; i < cores.size(); ++i)
    for (std::size_t j = i + 1; j < cores.size(); ++j)
      if (spherical_distance(cores[i].center, cores[j].center) <= cores[i].radius + cores[j].radius)
        throw DomainError("cores are not disjoint");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < balls.size(); ++i) {
    den += weights[i] * weights[i] * spherical_cap_area(cores[i].radius);
    for (std::size_t j = 0; j < balls.size(); ++j)
      num += weights[i] * weights[j] * cap_intersection_area(balls[i], balls[j]);
  }
  if (den <= 0.0) throw DomainError("cores carry no mass");
  return std::sqrt(num / den);
}

}  // namespace circlelab
