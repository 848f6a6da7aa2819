#include "circlelab/zipper.hpp"

#include <algorithm>
#include <cmath>

#include "circlelab/errors.hpp"

namespace circlelab {

namespace {

const Complex kI(0.0, 1.0);

// Square root with values in the closed upper half plane.
Complex sqrt_upper(Complex s) { return kI * std::sqrt(-s); }

// One slit-removal step at t = T(z); real t keeps its side of the slit.
Complex unslit(Complex t, double hb) {
  if (t.imag() == 0.0) return std::copysign(std::sqrt(t.real() * t.real() + hb), t.real());
  return sqrt_upper(t * t + hb);
}

}  // namespace

ZipperMap::ZipperMap(std::span<const Complex> samples) : samples_(samples.begin(), samples.end()) {
  const std::size_t n = samples_.size();
  if (n < 4) throw DomainError("zipper needs at least four samples");
  if (signed_chart_area(samples_) < 0.0) std::reverse(samples_.begin(), samples_.end());
  const Complex z0 = samples_[0], z1 = samples_[1];

  std::vector<Complex> w(n);
  for (std::size_t k = 2; k < n; ++k) w[k] = kI * std::sqrt((samples_[k] - z1) / (samples_[k] - z0));
  Complex p = kI;
  Complex dp = kI * (z0 - z1) / 2.0;

  slits_.reserve(n - 2);
  for (std::size_t k = 2; k < n; ++k) {
    const Complex c = w[k];
    if (!(c.imag() > 0.0)) throw NumericalError("zipper sample left the upper half plane");
    const double nc = std::norm(c);
    const Slit s{c.real() / nc, c.imag() / nc};
    slits_.push_back(s);
    const double hb = 1.0 / (s.b * s.b);
    auto step = [&](Complex z) { return unslit(z / (1.0 - s.a * z), hb); };
    for (std::size_t j = k + 1; j < n; ++j) w[j] = step(w[j]);
    const Complex t = p / (1.0 - s.a * p);
    const Complex fp = unslit(t, hb);
    dp *= t / (fp * std::pow(1.0 - s.a * p, 2));
    p = fp;
    // The real image of z0.
    double tz;
    bool tinf = false;
    if (zeta0_infinite_) {
      tinf = s.a == 0.0;
      tz = tinf ? 0.0 : -1.0 / s.a;
    } else {
      const double den = 1.0 - s.a * zeta0_;
      tinf = den == 0.0;
      tz = tinf ? 0.0 : zeta0_ / den;
    }
    zeta0_infinite_ = tinf;
    if (!tinf) zeta0_ = std::copysign(std::sqrt(tz * tz + hb), tz);
  }

  // F(z) = m(z)^2 with m(z) = z / (1 - z / zeta0), then M(y) = (y - conj q) / (y - q).
  Complex v = p, dv = 1.0;
  if (!zeta0_infinite_) {
    v = p / (1.0 - p / zeta0_);
    dv = 1.0 / std::pow(1.0 - p / zeta0_, 2);
  }
  side_ = v.real() >= 0.0 ? 1 : -1;
  q_ = v * v;
  const Complex dy = dp * dv * 2.0 * v;
  scale_ = (q_ - std::conj(q_)) / dy;
}

Complex ZipperMap::open(Complex z) const {
  const Complex z0 = samples_[0], z1 = samples_[1];
  Complex w = kI * std::sqrt((z - z1) / (z - z0));
  for (const Slit& s : slits_) w = unslit(w / (1.0 - s.a * w), 1.0 / (s.b * s.b));
  if (!zeta0_infinite_) w = w / (1.0 - w / zeta0_);
  return w * w;
}

Complex ZipperMap::operator()(Complex z) const {
  if (z == samples_[0]) return 1.0 / scale_;
  const Complex y = open(z);
  return (y - std::conj(q_)) / (y - q_) / scale_;
}

SpherePoint ZipperMap::operator()(const SpherePoint& z) const {
  if (z.is_infinity()) return SpherePoint::infinity();
  return (*this)(z.value());
}

Complex ZipperMap::derivative(Complex z) const {
  const Complex z0 = samples_[0], z1 = samples_[1];
  Complex w = kI * std::sqrt((z - z1) / (z - z0));
  Complex d = -(z1 - z0) / (2.0 * w * (z - z0) * (z - z0));
  for (const Slit& s : slits_) {
    const Complex den = 1.0 - s.a * w;
    const Complex t = w / den;
    const Complex f = unslit(t, 1.0 / (s.b * s.b));
    d *= t / (f * den * den);
    w = f;
  }
  if (!zeta0_infinite_) {
    const Complex den = 1.0 - w / zeta0_;
    d /= den * den;
    w = w / den;
  }
  d *= 2.0 * w;
  const Complex y = w * w;
  return d * (std::conj(q_) - q_) / ((y - q_) * (y - q_)) / scale_;
}

Complex ZipperMap::close(Complex v) const {
  if (!zeta0_infinite_) v = v / (1.0 + v / zeta0_);
  for (auto it = slits_.rbegin(); it != slits_.rend(); ++it) {
    const Complex t = sqrt_upper(v * v - 1.0 / (it->b * it->b));
    v = t / (1.0 + it->a * t);
  }
  const Complex u = -v * v;
  return (samples_[1] - u * samples_[0]) / (1.0 - u);
}

Complex ZipperMap::inverse(Complex w) const {
  const Complex m = w * scale_;
  const Complex y = (m * q_ - std::conj(q_)) / (m - 1.0);
  return close(static_cast<double>(side_) * std::sqrt(y));
}

SpherePoint ZipperMap::inverse(const SpherePoint& w) const {
  if (w.is_infinity()) return SpherePoint::infinity();
  return inverse(w.value());
}

double ZipperMap::capacity() const { return 1.0 / std::abs(scale_); }

}  // namespace circlelab
