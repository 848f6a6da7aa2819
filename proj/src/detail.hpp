#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace circlelab::detail {

// Golden-section minimization of f on [lo, hi]; returns (argmin, min).
template <class F>
std::pair<double, double> golden_minimize(F&& f, double lo, double hi, int iterations = 80) {
  constexpr double r = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iterations && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

// Coarse sampling on [lo, hi] followed by golden refinement around the best
// sample. Endpoints are included.
template <class F>
std::pair<double, double> sampled_minimize(F&& f, double lo, double hi, int samples = 16) {
  double best_t = lo, best = f(lo);
  const double step = (hi - lo) / samples;
  int best_k = 0;
  for (int k = 1; k <= samples; ++k) {
    const double t = lo + k * step;
    const double v = f(t);
    if (v < best) {
      best = v;
      best_t = t;
      best_k = k;
    }
  }
  const double a = lo + std::max(best_k - 1, 0) * step;
  const double b = lo + std::min(best_k + 1, samples) * step;
  auto [t, v] = golden_minimize(f, a, b);
  if (v < best) return {t, v};
  return {best_t, best};
}

// n-point Gauss-Legendre rule on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre_rule(int n) {
  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = -z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

}  // namespace circlelab::detail
