#include "circlelab/packing.hpp"

#include <algorithm>

#include "circlelab/errors.hpp"
#include "circlelab/generate.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace circlelab;
using testsupport::kPi;

namespace {

std::vector<Complex> square(Complex corner, double side) {
  return {corner, corner + side, corner + Complex(side, side), corner + Complex(0, side)};
}

// Dense boundary samples of a polygon.
std::vector<Complex> dense_boundary(const std::vector<Complex>& v, int per_edge) {
  std::vector<Complex> out;
  for (std::size_t k = 0; k < v.size(); ++k)
    for (int i = 0; i < per_edge; ++i) out.push_back(v[k] + (double(i) / per_edge) * (v[(k + 1) % v.size()] - v[k]));
  return out;
}

}  // namespace

TEST_CASE("diameters") {
  CHECK(diameter(PeripheralContinuum::point(1, SpherePoint(0.3))) == 0.0);
  CHECK(diameter(PeripheralContinuum::disk(1, {SpherePoint(0.0), 0.4})) == doctest::Approx(0.8));
  CHECK(diameter(PeripheralContinuum::disk(1, {SpherePoint(0.0), 2.0})) == doctest::Approx(kPi));

  const auto sq = PeripheralContinuum::polygon(2, square(0.0, 1.0));
  const auto pts = dense_boundary(sq.polygon_vertices(), 1000);
  double oracle = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) oracle = std::max(oracle, testsupport::angle_oracle(pts[i], pts[j]));
  CHECK(std::abs(diameter(sq) - oracle) < 1e-6);
  CHECK(diameter(sq, Metric::euclidean) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("l2 norm of carpet diameters") {
  CHECK(l2_diameters(Packing{}) == 0.0);
  const Packing c1 = carpet(1);
  REQUIRE(c1.size() == 1);
  CHECK(diameter(c1.continua[0], Metric::euclidean) == doctest::Approx(std::sqrt(2.0) / 3));
  double partial = 0.0;
  for (int k = 1; k <= 4; ++k) partial += std::pow(8.0, k - 1) * 2.0 * std::pow(9.0, -k);
  const double norm = l2_diameters(carpet(4), Metric::euclidean);
  CHECK(std::abs(norm * norm - partial) < 1e-12);
  CHECK(norm < std::sqrt(2.0));
}

TEST_CASE("Hausdorff distance") {
  const auto sq = PeripheralContinuum::polygon(1, square(0.0, 1.0));
  CHECK(hausdorff_distance(sq, sq) < 1e-12);
  const auto d1 = PeripheralContinuum::disk(1, {SpherePoint(0.2), 0.3});
  const auto d2 = PeripheralContinuum::disk(2, {SpherePoint(0.2), 0.7});
  CHECK(hausdorff_distance(d1, d2) == doctest::Approx(0.4));
  CHECK(hausdorff_distance(d1, d2) == doctest::Approx(hausdorff_distance(d2, d1)));

  const Complex v(0.003, -0.002);
  const auto shifted = PeripheralContinuum::polygon(2, square(v, 1.0));
  CHECK(std::abs(hausdorff_distance(sq, shifted, Metric::euclidean) - std::abs(v)) < 1e-6);

  // Spherical Hausdorff distance against dense two-sided sampling.
  const auto a = dense_boundary(sq.polygon_vertices(), 100), b = dense_boundary(shifted.polygon_vertices(), 100);
  const auto a_fine = dense_boundary(sq.polygon_vertices(), 20000);
  const auto b_fine = dense_boundary(shifted.polygon_vertices(), 20000);
  auto one_sided = [](const std::vector<Complex>& p, const std::vector<Complex>& q) {
    double worst = 0.0;
    for (const Complex& x : p) {
      double best = 1e9;
      for (const Complex& y : q) best = std::min(best, testsupport::angle_oracle(x, y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  CHECK(std::abs(hausdorff_distance(sq, shifted) - std::max(one_sided(a, b_fine), one_sided(b, a_fine))) < 1e-6);
}

TEST_CASE("relative distance") {
  const auto a = PeripheralContinuum::polygon(1, square(0.0, 1.0));
  const auto b = PeripheralContinuum::polygon(2, square(1.0, 1.0));
  CHECK(relative_distance(a, b) == 0.0);
  const double s = 1e-4;
  const auto e = PeripheralContinuum::chart_disk(1, 0.0, 0.5 * s);
  const auto f = PeripheralContinuum::chart_disk(2, 13.0 * s, 0.5 * s);
  CHECK(relative_distance(e, f, Metric::euclidean) == doctest::Approx(12.0).epsilon(1e-9));
  CHECK(relative_distance(e, f) == doctest::Approx(12.0).epsilon(1e-5));

  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = PeripheralContinuum::chart_disk(1, testsupport::random_disk_point(rng, 1.0), rng.uniform(0.05, 0.2));
    const auto q = PeripheralContinuum::polygon(2, square(testsupport::random_disk_point(rng, 1.0) + 2.0, rng.uniform(0.1, 0.4)));
    const auto ps = p.boundary_points(4000), qs = q.boundary_points(4000);
    double dist = 1e9, dp = 0.0, dq = 0.0;
    for (const auto& x : ps)
      for (const auto& y : qs) dist = std::min(dist, spherical_distance(x, y));
    for (std::size_t i = 0; i < ps.size(); i += 4)
      for (std::size_t j = 0; j < ps.size(); j += 4) dp = std::max(dp, spherical_distance(ps[i], ps[j]));
    for (std::size_t i = 0; i < qs.size(); i += 4)
      for (std::size_t j = 0; j < qs.size(); j += 4) dq = std::max(dq, spherical_distance(qs[i], qs[j]));
    const double oracle = dist / std::min(dp, dq);
    CHECK(std::abs(relative_distance(p, q) - oracle) < 1e-5 * oracle);
  }

  const std::vector<SpherePoint> e1 = {SpherePoint(0.0), SpherePoint(1.0)};
  const std::vector<SpherePoint> f1 = {SpherePoint(3.0), SpherePoint(Complex(3.0, 0.5))};
  CHECK(relative_distance(e1, f1, Metric::euclidean) == doctest::Approx(2.0 / 0.5));
}

TEST_CASE("count of large continua meeting a set") {
  const Packing c3 = carpet(3);
  REQUIRE(c3.size() == 73);
  const auto far = PeripheralContinuum::polygon(100, square(Complex(5, 5), 0.5));
  CHECK(count_large_intersecting(c3, far, 1.0) == 0);
  CHECK(count_large_intersecting(c3, c3.continua[0], 1.0) == 1);
  CHECK(count_large_intersecting(c3, c3.continua[0], 1e9) == 0);

  const auto e = PeripheralContinuum::polygon(100, square(Complex(0.2, 0.2), 0.6));
  // Exhaustive bounding-box oracle: all squares are axis aligned.
  int oracle = 0;
  const double thr = 0.1 * 0.6 * std::sqrt(2.0);
  for (const auto& k : c3.continua) {
    const auto& v = k.polygon_vertices();
    const double x0 = v[0].real(), y0 = v[0].imag(), side = v[1].real() - v[0].real();
    const bool meets = x0 <= 0.8 && x0 + side >= 0.2 && y0 <= 0.8 && y0 + side >= 0.2;
    if (meets && side * std::sqrt(2.0) >= thr) ++oracle;
  }
  CHECK(oracle == 9);
  CHECK(count_large_intersecting(c3, e, 0.1, Metric::euclidean) == oracle);
}

TEST_CASE("packing validation") {
  Packing p;
  p.continua.push_back(PeripheralContinuum::polygon(1, square(0.0, 1.0)));
  p.continua.push_back(PeripheralContinuum::chart_disk(2, {0.5, 0.5}, 0.2));
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.continua[1] = PeripheralContinuum::chart_disk(2, {2.5, 0.5}, 0.2);
  CHECK_NOTHROW(p.validate());
  p.continua.push_back(PeripheralContinuum::point(2, SpherePoint(9.0)));
  CHECK_THROWS_AS(p.validate(), DomainError);
  CHECK_NOTHROW(carpet(3).validate());
  CHECK_THROWS_AS(PeripheralContinuum::disk(1, {SpherePoint(0.0), 4.0}), DomainError);
  CHECK_THROWS_AS(PeripheralContinuum::polygon(1, {{0, 0}, {1, 1}, {1, 0}, {0, 1}}), DomainError);
}

TEST_CASE("polygons are stored counterclockwise and expose graded boundary samples") {
  const auto k = PeripheralContinuum::polygon(1, {{0, 1}, {1, 1}, {1, 0}, {0, 0}});
  CHECK(signed_chart_area(k.polygon_vertices()) > 0.0);
  const auto pts = k.boundary_points(64, 1.5);
  CHECK(pts.size() == 64);
  for (const Complex& v : k.polygon_vertices())
    CHECK(std::any_of(pts.begin(), pts.end(), [&](const SpherePoint& p) { return p == SpherePoint(v); }));
  // Grading clusters samples near the corner.
  CHECK(std::abs(pts[1].value() - pts[0].value()) < std::abs(pts[8].value() - pts[7].value()));
}

TEST_CASE("point distances") {
  const auto sq = PeripheralContinuum::polygon(1, square(0.0, 1.0));
  Rng rng(22);
  const auto dense = dense_boundary(sq.polygon_vertices(), 20000);
  for (int i = 0; i < 20; ++i) {
    const Complex p = testsupport::random_disk_point(rng, 3.0);
    if (sq.contains(p)) continue;
    double oracle = 1e9, far = 0.0;
    for (const Complex& z : dense) {
      oracle = std::min(oracle, testsupport::angle_oracle(p, z));
      far = std::max(far, testsupport::angle_oracle(p, z));
    }
    CHECK(std::abs(point_distance(p, sq, Metric::spherical) - oracle) < 1e-7);
    CHECK(std::abs(max_point_distance(p, sq, Metric::spherical) - far) < 1e-7);
  }
  CHECK(point_distance(SpherePoint(Complex(0.5, 0.5)), sq, Metric::spherical) == 0.0);
  const auto d = PeripheralContinuum::disk(2, {SpherePoint(0.0), 0.5});
  CHECK(point_distance(SpherePoint::infinity(), d, Metric::spherical) == doctest::Approx(kPi - 0.5));
}

TEST_CASE("Mobius images of disks are disks") {
  Rng rng(23);
  const auto d = PeripheralContinuum::chart_disk(1, {0.3, -0.2}, 0.4);
  for (int i = 0; i < 20; ++i) {
    const MobiusTransform t(testsupport::random_disk_point(rng, 2.0), testsupport::random_disk_point(rng, 2.0),
                            testsupport::random_disk_point(rng, 2.0), testsupport::random_disk_point(rng, 2.0));
    const auto img = mobius_image(d, t);
    for (const auto& p : d.boundary_points(16))
      CHECK(spherical_distance(img.disk_cap().center, t(p)) == doctest::Approx(img.disk_cap().radius).epsilon(1e-9));
    CHECK(img.contains(t(d.disk_cap().center)));
  }
}
