#include "circlelab/fatness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "circlelab/errors.hpp"
#include "circlelab/measure.hpp"

namespace circlelab {

namespace {

constexpr double kPi = std::numbers::pi;

struct CenterResult {
  double ratio = std::numeric_limits<double>::infinity();
  double radius = 0.0;
  int evaluations = 0;
};

double farthest_distance(const SpherePoint& x, const PeripheralContinuum& k) {
  if (k.is_polygon() && k.polygon_vertices().size() > 64) {
    double best = 0.0;
    for (const Complex& z : k.polygon_vertices()) best = std::max(best, spherical_distance(x, SpherePoint(z)));
    return best;
  }
  return max_point_distance(x, k, Metric::spherical);
}

}  // namespace

std::vector<SpherePoint> fatness_centers(const PeripheralContinuum& k, const FatnessConfig& config) {
  std::vector<SpherePoint> out = k.boundary_points(std::max(config.boundary_samples, k.boundary_pieces()));
  if (config.interior_samples <= 0) return out;
  if (k.is_disk()) {
    const Cap& c = k.disk_cap();
    out.push_back(c.center);
    const int per_ring = std::max(1, (config.interior_samples - 1) / 2);
    for (double f : {1.0 / 3.0, 2.0 / 3.0}) {
      const auto ring = PeripheralContinuum::disk(k.id(), {c.center, f * c.radius}).boundary_points(per_ring);
      out.insert(out.end(), ring.begin(), ring.end());
    }
    return out;
  }
  if (k.is_polygon()) {
    const auto& v = k.polygon_vertices();
    double x0 = v[0].real(), x1 = x0, y0 = v[0].imag(), y1 = y0;
    for (const Complex& z : v) {
      x0 = std::min(x0, z.real());
      x1 = std::max(x1, z.real());
      y0 = std::min(y0, z.imag());
      y1 = std::max(y1, z.imag());
    }
    const int g = static_cast<int>(std::ceil(std::sqrt(4.0 * config.interior_samples)));
    std::vector<SpherePoint> inside;
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        const Complex z(x0 + (i + 0.5) / g * (x1 - x0), y0 + (j + 0.5) / g * (y1 - y0));
        if (polygon_contains(v, z)) inside.push_back(SpherePoint(z));
      }
    const std::size_t want = static_cast<std::size_t>(config.interior_samples);
    if (inside.size() <= want) {
      out.insert(out.end(), inside.begin(), inside.end());
    } else {
      for (std::size_t i = 0; i < want; ++i) out.push_back(inside[i * inside.size() / want]);
    }
  }
  return out;
}

FatnessEstimate estimate_fatness(const PeripheralContinuum& k, const FatnessConfig& config, Exec exec) {
  FatnessEstimate est;
  if (k.is_point()) {
    est.tau_hat = std::numeric_limits<double>::infinity();
    est.degenerate = true;
    est.witness_x = k.point_location();
    return est;
  }
  if (config.radii_per_octave < 1 || config.octaves < 1) throw DomainError("fatness radius grid is empty");
  if (diameter(k) >= kPi * (1.0 - 1e-9)) throw DomainError("fatness estimate needs diam(K) < pi");
  const std::vector<SpherePoint> centers = fatness_centers(k, config);
  const int steps = config.octaves * config.radii_per_octave;
  std::vector<CenterResult> results(centers.size());
  for_each_index(exec, centers.size(), [&](std::size_t i) {
    const SpherePoint& x = centers[i];
    const double rmax = farthest_distance(x, k);
    CenterResult res;
    for (int s = 0; s <= steps; ++s) {
      const double r = rmax * std::exp2(-static_cast<double>(s) / config.radii_per_octave);
      if (r <= 0.0) continue;
      const double ratio = ball_intersection_area(k, x, r) / (r * r);
      ++res.evaluations;
      if (ratio < res.ratio) {
        res.ratio = ratio;
        res.radius = r;
      }
    }
    results[i] = res;
  });
  est.tau_hat = std::numeric_limits<double>::infinity();
  est.x_samples = static_cast<int>(centers.size());
  est.r_samples = steps + 1;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    est.evaluations += results[i].evaluations;
    if (results[i].ratio < est.tau_hat) {
      est.tau_hat = results[i].ratio;
      est.witness_x = centers[i];
      est.witness_r = results[i].radius;
    }
  }
  return est;
}

MobiusTransform random_mobius(Rng& rng, double bound) {
  auto draw = [&] { return std::polar(bound * std::sqrt(rng.uniform()), 2.0 * kPi * rng.uniform()); };
  for (;;) {
    const Complex a = draw(), b = draw(), c = draw(), d = draw();
    if (std::abs(a * d - b * c) > 0.1 * bound * bound) return {a, b, c, d};
  }
}

MobiusFatnessSurvey mobius_fatness_survey(const PeripheralContinuum& k, std::uint64_t seed, int maps,
                                          const FatnessConfig& config, double pole_margin, Exec exec) {
  Rng rng(seed);
  MobiusFatnessSurvey out;
  out.min_tau = std::numeric_limits<double>::infinity();
  while (out.maps < maps) {
    const MobiusTransform t = random_mobius(rng);
    if (point_distance(t.pole(), k, Metric::spherical) < pole_margin) {
      ++out.rejected;
      continue;
    }
    const PeripheralContinuum image = mobius_image(k, t);
    if (diameter(image) >= 0.9 * kPi) {
      ++out.rejected;
      continue;
    }
    const double tau = estimate_fatness(image, config, exec).tau_hat;
    out.taus.push_back(tau);
    out.min_tau = std::min(out.min_tau, tau);
    ++out.maps;
  }
  return out;
}

}  // namespace circlelab
