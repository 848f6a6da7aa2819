#include "circlelab/measure.hpp"

#include "circlelab/errors.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace circlelab;
using testsupport::kPi;

namespace {

// Monte Carlo estimate of Σ(A) for an indicator on the sphere.
template <class F>
std::pair<double, double> monte_carlo(F&& inside, std::uint64_t seed, int n) {
  Rng rng(seed);
  int hits = 0;
  for (int i = 0; i < n; ++i)
    if (inside(testsupport::random_sphere_point(rng))) ++hits;
  const double p = double(hits) / n;
  return {4 * kPi * p, 4 * kPi * std::sqrt(p * (1 - p) / n)};
}

// Sutherland-Hodgman clip of a polygon by a convex counterclockwise polygon.
std::vector<Complex> clip(std::vector<Complex> subject, const std::vector<Complex>& clipper) {
  auto side = [](Complex a, Complex b, Complex p) {
    return (b.real() - a.real()) * (p.imag() - a.imag()) - (b.imag() - a.imag()) * (p.real() - a.real());
  };
  for (std::size_t i = 0; i < clipper.size() && !subject.empty(); ++i) {
    const Complex a = clipper[i], b = clipper[(i + 1) % clipper.size()];
    std::vector<Complex> out;
    for (std::size_t j = 0; j < subject.size(); ++j) {
      const Complex p = subject[j], q = subject[(j + 1) % subject.size()];
      const double sp = side(a, b, p), sq = side(a, b, q);
      if (sp >= 0) out.push_back(p);
      if ((sp >= 0) != (sq >= 0)) out.push_back(p + (sp / (sp - sq)) * (q - p));
    }
    subject = std::move(out);
  }
  return subject;
}

std::vector<Complex> ngon(const Circle& c, int n) {
  std::vector<Complex> v;
  for (int k = 0; k < n; ++k) v.push_back(c.center + std::polar(c.radius, 2 * kPi * k / n));
  return v;
}

}  // namespace

TEST_CASE("cap intersection closed forms") {
  const SpherePoint o(0.0);
  CHECK(cap_intersection_area({o, 0.3}, {SpherePoint(5.0), 0.2}) == 0.0);
  CHECK(cap_intersection_area({o, 0.8}, {SpherePoint(0.05), 0.2}) == doctest::Approx(spherical_cap_area(0.2)));
  // Two hemispheres with centers d apart meet in a lune of angle pi - d.
  for (double d : {0.1, 0.7, 2.0}) {
    const SpherePoint c = SpherePoint(std::tan(d / 2));
    CHECK(cap_intersection_area({o, kPi / 2}, {c, kPi / 2}) == doctest::Approx(2 * (kPi - d)).epsilon(1e-10));
  }
}

TEST_CASE("cap intersection agrees with Monte Carlo") {
  Rng rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    const Cap a{testsupport::random_sphere_point(rng), rng.uniform(0.2, 2.5)};
    const Cap b{testsupport::random_sphere_point(rng), rng.uniform(0.2, 2.5)};
    auto [est, err] = monte_carlo([&](const SpherePoint& p) { return cap_contains(a, p) && cap_contains(b, p); },
                                  100 + trial, 400000);
    CHECK(std::abs(cap_intersection_area(a, b) - est) < 4 * err + 1e-3);
  }
}

TEST_CASE("Green area matches the Gauss-Bonnet area") {
  Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Complex> v;
    const Complex c = testsupport::random_disk_point(rng, 2.0);
    const int n = 3 + int(rng.index(6));
    for (int k = 0; k < n; ++k) v.push_back(c + std::polar(rng.uniform(0.2, 1.0), 2 * kPi * (k + 0.3 * rng.uniform()) / n));
    CHECK(polygon_area_green(v) == doctest::Approx(spherical_polygon_area(v)).epsilon(1e-10));
  }
}

TEST_CASE("polygon-disk area against a clipped fine polygon") {
  Rng rng(33);
  const std::vector<Complex> sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  for (int trial = 0; trial < 25; ++trial) {
    const Circle d{Complex(rng.uniform(-0.5, 1.5), rng.uniform(-0.5, 1.5)), rng.uniform(0.1, 1.2)};
    const auto piece = clip(ngon(d, 20000), sq);
    const double oracle = piece.size() >= 3 ? spherical_polygon_area(piece) : 0.0;
    CHECK(std::abs(polygon_disk_area(sq, d) - oracle) < 2e-7);
  }
  // Disk inside the polygon and polygon inside the disk.
  CHECK(polygon_disk_area(sq, {{0.5, 0.5}, 0.2}) == doctest::Approx(spherical_cap_area(cap_from_circle({{0.5, 0.5}, 0.2}).radius)).epsilon(1e-12));
  CHECK(polygon_disk_area(sq, {{0.5, 0.5}, 5.0}) == doctest::Approx(polygon_area_green(sq)).epsilon(1e-12));
}

TEST_CASE("ball intersection with polygons, including balls through infinity") {
  const auto k = PeripheralContinuum::polygon(1, {{0, 0}, {1.5, 0}, {1.5, 1}, {0, 1}});
  Rng rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const SpherePoint x = trial < 5 ? SpherePoint(Complex(rng.uniform(0, 1.5), rng.uniform(0, 1))) : testsupport::random_sphere_point(rng);
    const double r = rng.uniform(0.2, 2.8);
    auto [est, err] = monte_carlo([&](const SpherePoint& p) { return spherical_distance(x, p) < r && k.contains(p); },
                                  200 + trial, 400000);
    CHECK(std::abs(ball_intersection_area(k, x, r) - est) < 4 * err + 1e-3);
  }
  // A ball whose boundary circle passes through infinity.
  const SpherePoint x(2.0);
  const double r = spherical_distance(x, SpherePoint::infinity());
  auto [est, err] = monte_carlo([&](const SpherePoint& p) { return spherical_distance(x, p) < r && k.contains(p); }, 300, 400000);
  CHECK(std::abs(ball_intersection_area(k, x, r) - est) < 4 * err + 1e-3);
  const auto d = PeripheralContinuum::disk(2, {SpherePoint(0.0), 0.5});
  CHECK(ball_intersection_area(d, SpherePoint(0.0), 0.3) == doctest::Approx(spherical_cap_area(0.3)));
}

TEST_CASE("radial hit measure") {
  const auto k = PeripheralContinuum::disk(1, {SpherePoint(0.0), 0.3});
  const SpherePoint x(std::tan(0.25));  // at distance 0.5 from the center
  CHECK(radial_hit_measure(k, x, 0.1) == 0.0);
  CHECK(radial_hit_measure(k, x, 0.5) == doctest::Approx(0.3));
  CHECK(radial_hit_measure(k, x, 2.0) == doctest::Approx(0.6));
  CHECK(radial_hit_measure(k, SpherePoint(0.0), 0.2) == doctest::Approx(0.2));
}

TEST_CASE("co-area identity and the Lipschitz bound") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = random_coarea_instance(seed);
    const auto res = coarea_check(inst);
    CHECK(res.holds);
    // For the distance function the co-area formula is an identity.
    CHECK(res.lhs == doctest::Approx(inst.lipschitz * res.integral).epsilon(1e-6));
  }
}

TEST_CASE("ball-versus-core norm ratio") {
  Rng rng(35);
  std::vector<Cap> balls, cores;
  std::vector<double> w;
  while (balls.size() < 12) {
    const SpherePoint c = testsupport::random_sphere_point(rng);
    const double r = rng.uniform(0.1, 0.5);
    const double rc = r * rng.uniform(0.2, 0.5);
    bool free = true;
    for (const Cap& q : cores) free = free && spherical_distance(q.center, c) > q.radius + rc;
    if (!free) continue;
    balls.push_back({c, r});
    cores.push_back({c, rc});
    w.push_back(rng.uniform(0.5, 2.0));
  }
  const double ratio = ball_core_ratio(balls, cores, w);
  CHECK(ratio >= 1.0);
  CHECK(std::isfinite(ratio));
  cores[1] = cores[0];
  CHECK_THROWS_AS(ball_core_ratio(balls, cores, w), DomainError);
}
