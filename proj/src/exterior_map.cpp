#include "circlelab/exterior_map.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "circlelab/errors.hpp"

namespace circlelab {

CircleFit fit_circle(std::span<const Complex> points) {
  if (points.size() < 3) throw DomainError("circle fit needs three points");
  Complex mean = 0.0;
  for (const Complex& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  double scale = 0.0;
  for (const Complex& p : points) scale = std::max(scale, std::abs(p - mean));
  if (scale == 0.0) throw DomainError("circle fit of coincident points");

  // Kasa: x^2 + y^2 + D x + E y + F = 0 in centered, scaled coordinates.
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex q = (points[static_cast<std::size_t>(i)] - mean) / scale;
    a(i, 0) = q.real();
    a(i, 1) = q.imag();
    a(i, 2) = 1.0;
    b(i) = -std::norm(q);
  }
  const Eigen::Vector3d s = a.colPivHouseholderQr().solve(b);
  Complex c(-s(0) / 2, -s(1) / 2);
  double r = std::sqrt(std::max(0.0, std::norm(c) - s(2)));

  // Gauss-Newton on sum (|q - c| - r)^2.
  for (int it = 0; it < 20; ++it) {
    Eigen::MatrixXd j(n, 3);
    Eigen::VectorXd f(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Complex q = (points[static_cast<std::size_t>(i)] - mean) / scale;
      const double d = std::abs(q - c);
      if (d == 0.0) break;
      j(i, 0) = -(q - c).real() / d;
      j(i, 1) = -(q - c).imag() / d;
      j(i, 2) = -1.0;
      f(i) = d - r;
    }
    const Eigen::Vector3d step = j.colPivHouseholderQr().solve(-f);
    c += Complex(step(0), step(1));
    r += step(2);
    if (step.norm() < 1e-15) break;
  }
  CircleFit out;
  out.circle = {mean + scale * c, scale * std::abs(r)};
  for (const Complex& p : points)
    out.residual = std::max(out.residual, std::abs(std::abs(p - out.circle.center) - out.circle.radius));
  out.residual /= out.circle.radius;
  return out;
}

ExteriorMap::ExteriorMap(Complex center, double scale, std::vector<Complex> g, double capacity)
    : center_(center), scale_(scale), g_(std::move(g)), capacity_(capacity) {}

Complex ExteriorMap::operator()(Complex z) const {
  const Complex zeta = z - center_;
  const Complex u = scale_ / zeta;
  Complex sum = 0.0;
  for (std::size_t k = g_.size(); k-- > 0;) sum = (sum + g_[k]) * u;
  return zeta * std::exp(sum);
}

Complex ExteriorMap::derivative(Complex z) const {
  const Complex zeta = z - center_;
  const Complex u = scale_ / zeta;
  Complex sum = 0.0, dsum = 0.0;  // G(u) and u G'(u)
  for (std::size_t k = g_.size(); k-- > 0;) {
    sum = (sum + g_[k]) * u;
    dsum = (dsum + static_cast<double>(k + 1) * g_[k]) * u;
  }
  return std::exp(sum) * (1.0 - dsum);
}

Complex ExteriorMap::inverse(Complex w) const {
  Complex z = center_ + w - (g_.empty() ? Complex(0.0) : g_[0] * scale_);
  if (std::abs(z - center_) <= scale_) z = center_ + w;
  double res = std::abs((*this)(z) - w);
  const double target = 1e-15 * std::max(1.0, std::abs(w));
  for (int it = 0; it < 100; ++it) {
    if (res <= target) return z;
    const Complex step = ((*this)(z) - w) / derivative(z);
    double t = 1.0;
    Complex next = z - step;
    double next_res = std::abs((*this)(next) - w);
    while (!(next_res < res) && t > 1e-6) {
      t *= 0.5;
      next = z - t * step;
      next_res = std::abs((*this)(next) - w);
    }
    if (!(next_res < res)) {
      if (res <= 1e3 * target) return z;
      break;
    }
    z = next;
    res = next_res;
  }
  if (res <= 1e3 * target) return z;
  throw NumericalError("exterior map inverse did not converge");
}

std::vector<Complex> ExteriorMap::laurent_coefficients(int count) const {
  // exp(G(u)) = sum e_j u^j with j e_j = sum_{k=1}^{j} k g_k e_{j-k}.
  std::vector<Complex> e(static_cast<std::size_t>(std::max(count, 1)));
  e[0] = 1.0;
  for (std::size_t j = 1; j < e.size(); ++j) {
    Complex acc = 0.0;
    for (std::size_t k = 1; k <= j && k <= g_.size(); ++k) acc += static_cast<double>(k) * g_[k - 1] * e[j - k];
    e[j] = acc / static_cast<double>(j);
  }
  std::vector<Complex> out(e.size());
  double p = 1.0;
  for (std::size_t j = 0; j < e.size(); ++j) {
    out[j] = e[j] * p;
    p *= scale_;
  }
  out.resize(static_cast<std::size_t>(count));
  return out;
}

Complex interior_point(std::span<const Complex> samples) {
  if (samples.size() < 3) throw DomainError("interior point needs a polygon");
  auto clearance = [&](Complex z) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < samples.size(); ++k)
      d = std::min(d, point_segment_distance(z, samples[k], samples[(k + 1) % samples.size()]));
    return d;
  };
  double x0 = samples[0].real(), x1 = x0, y0 = samples[0].imag(), y1 = y0;
  for (const Complex& z : samples) {
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
  }
  // Area centroid first, then a grid.
  double a2 = 0.0;
  Complex cen = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const Complex p = samples[k], q = samples[(k + 1) % samples.size()];
    const double cr = p.real() * q.imag() - q.real() * p.imag();
    a2 += cr;
    cen += cr * (p + q);
  }
  Complex best = 0.0;
  double best_d = -1.0;
  if (a2 != 0.0) {
    cen /= 3.0 * a2;
    if (polygon_contains(samples, cen)) {
      best = cen;
      best_d = clearance(cen);
    }
  }
  const int g = 24;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      const Complex z(x0 + (i + 0.5) / g * (x1 - x0), y0 + (j + 0.5) / g * (y1 - y0));
      if (!polygon_contains(samples, z)) continue;
      const double d = clearance(z);
      if (d > 1.05 * best_d) {
        best = z;
        best_d = d;
      }
    }
  if (best_d <= 0.0) throw DomainError("curve encloses no interior point");
  return best;
}

ExteriorMap fit_exterior_map(std::span<const Complex> samples, const ExteriorMapConfig& config) {
  const int m = config.degree;
  const auto n = samples.size();
  if (m < 1) throw DomainError("exterior map degree must be positive");
  if (n < 4 * static_cast<std::size_t>(m)) throw DomainError("exterior map needs at least 4*degree samples");
  const Complex c = interior_point(samples);
  double rho = std::numeric_limits<double>::infinity();
  for (const Complex& z : samples) rho = std::min(rho, std::abs(z - c));

  const auto rows = static_cast<Eigen::Index>(n);
  const Eigen::Index cols = 2 * m + 1;
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd b(rows);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex prev = samples[(j + n - 1) % n], next = samples[(j + 1) % n];
    const double w = std::sqrt(0.5 * (std::abs(samples[j] - prev) + std::abs(next - samples[j])));
    const Complex zeta = samples[j] - c;
    const Complex u = rho / zeta;
    Complex p = 1.0;
    const auto r = static_cast<Eigen::Index>(j);
    for (int k = 0; k < m; ++k) {
      p *= u;
      a(r, 2 * k) = w * p.real();
      a(r, 2 * k + 1) = -w * p.imag();
    }
    a(r, 2 * m) = -w;
    b(r) = -w * std::log(std::abs(zeta));
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  const auto& rr = qr.matrixR();
  const double r0 = std::abs(rr(0, 0)), rn = std::abs(rr(cols - 1, cols - 1));
  const double cond = rn > 0.0 ? r0 / rn : std::numeric_limits<double>::infinity();
  if (!(cond <= config.max_condition)) throw NumericalError("exterior map least squares is ill conditioned");
  const Eigen::VectorXd x = qr.solve(b);
  std::vector<Complex> g(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) g[static_cast<std::size_t>(k)] = Complex(x(2 * k), x(2 * k + 1));
  ExteriorMap map(c, rho, std::move(g), std::exp(x(2 * m)));
  map.condition = cond;
  for (const Complex& z : samples)
    map.fit_residual = std::max(map.fit_residual, std::abs(std::abs(map(z)) - map.capacity()) / map.capacity());
  return map;
}

}  // namespace circlelab
