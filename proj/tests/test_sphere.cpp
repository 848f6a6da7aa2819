#include "circlelab/sphere.hpp"

#include "circlelab/errors.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace circlelab;
using testsupport::kPi;

TEST_CASE("spherical distance reference values") {
  CHECK(spherical_distance(SpherePoint(0.0), SpherePoint::infinity()) == doctest::Approx(kPi));
  CHECK(spherical_distance(SpherePoint(0.0), SpherePoint(1.0)) == doctest::Approx(kPi / 2));
  CHECK(spherical_distance(SpherePoint::infinity(), SpherePoint::infinity()) == 0.0);
  CHECK(spherical_distance(SpherePoint(1.0), SpherePoint(-1.0)) == doctest::Approx(kPi));
}

TEST_CASE("spherical distance agrees with the angle between unit vectors") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const Complex a = testsupport::random_disk_point(rng, 5.0), b = testsupport::random_disk_point(rng, 5.0);
    CHECK(spherical_distance(a, b) == doctest::Approx(testsupport::angle_oracle(a, b)).epsilon(1e-12));
    CHECK(spherical_distance(a, b) == doctest::Approx(spherical_distance(b, a)).epsilon(1e-15));
  }
}

TEST_CASE("triangle inequality on random triples") {
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    const SpherePoint a = testsupport::random_sphere_point(rng), b = testsupport::random_sphere_point(rng),
                      c = testsupport::random_sphere_point(rng);
    CHECK(spherical_distance(a, c) <= spherical_distance(a, b) + spherical_distance(b, c) + 1e-12);
  }
}

TEST_CASE("stereographic projection round trip") {
  Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    const Complex z = testsupport::random_disk_point(rng, 50.0);
    const SpherePoint back = SpherePoint::from_unit_vector(SpherePoint(z).to_unit_vector());
    CHECK(std::abs(back.value() - z) <= 1e-12 * (1 + std::norm(z)));
  }
  CHECK(SpherePoint::from_unit_vector({0, 0, 1}).is_infinity());
  CHECK(SpherePoint::infinity().to_unit_vector().z == 1.0);
  CHECK_THROWS_AS(SpherePoint::infinity().value(), DomainError);
}

TEST_CASE("chordal distance is the chord of the geodesic angle") {
  Rng rng(14);
  for (int i = 0; i < 100; ++i) {
    const SpherePoint a = testsupport::random_sphere_point(rng), b = testsupport::random_sphere_point(rng);
    CHECK(chordal_distance(a, b) == doctest::Approx(2 * std::sin(spherical_distance(a, b) / 2)).epsilon(1e-12));
  }
}

TEST_CASE("segment length matches numeric quadrature") {
  Rng rng(15);
  for (int i = 0; i < 30; ++i) {
    const Complex a = testsupport::random_disk_point(rng, 3.0), b = testsupport::random_disk_point(rng, 3.0);
    const double oracle = testsupport::simpson(
        [&](double t) { return std::abs(b - a) * 2.0 / (1.0 + std::norm(a + t * (b - a))); }, 0.0, 1.0, 4000);
    CHECK(spherical_segment_length(a, b) == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("cap area and cap/circle conversion") {
  CHECK(spherical_cap_area(kPi) == doctest::Approx(4 * kPi));
  CHECK(spherical_cap_area(kPi / 2) == doctest::Approx(2 * kPi));
  // The unit disk is the southern hemisphere.
  const Cap h = cap_from_circle({0.0, 1.0});
  CHECK(std::abs(h.center.value()) < 1e-15);
  CHECK(h.radius == doctest::Approx(kPi / 2));

  Rng rng(16);
  for (int i = 0; i < 200; ++i) {
    const Circle c{testsupport::random_disk_point(rng, 3.0), rng.uniform(0.01, 2.0)};
    const Cap cap = cap_from_circle(c);
    for (int k = 0; k < 8; ++k) {
      const Complex p = c.center + std::polar(c.radius, 2 * kPi * k / 8.0);
      CHECK(spherical_distance(cap.center, p) == doctest::Approx(cap.radius).epsilon(1e-10));
    }
    CHECK(cap_contains(cap, c.center));
    const auto back = circle_from_cap(cap);
    REQUIRE(back.has_value());
    CHECK(std::abs(back->center - c.center) < 1e-10 * (1 + std::abs(c.center)));
    CHECK(back->radius == doctest::Approx(c.radius).epsilon(1e-10));
  }
  CHECK_FALSE(circle_from_cap({SpherePoint::infinity(), 0.5}).has_value());
  CHECK_FALSE(circle_from_cap({SpherePoint(1.0), 2.0}).has_value());
  CHECK(circle_from_cap({SpherePoint(0.0), 3.0})->radius == doctest::Approx(std::tan(1.5)));
}

TEST_CASE("polygon area matches tensor quadrature of the area density") {
  const std::vector<Complex> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const double oracle = testsupport::rectangle_area(0, 0, 1, 1);
  CHECK(spherical_polygon_area(square) == doctest::Approx(oracle).epsilon(1e-10));
  const std::vector<Complex> rect = {{-2, 0.5}, {3, 0.5}, {3, 1.5}, {-2, 1.5}};
  CHECK(spherical_polygon_area(rect) == doctest::Approx(testsupport::rectangle_area(-2, 0.5, 3, 1.5)).epsilon(1e-10));
  // Orientation does not matter.
  const std::vector<Complex> cw = {{0, 1}, {1, 1}, {1, 0}, {0, 0}};
  CHECK(spherical_polygon_area(cw) == doctest::Approx(oracle).epsilon(1e-10));
  // A large square approaches the full sphere.
  const double big = 1e3;
  const std::vector<Complex> huge = {{-big, -big}, {big, -big}, {big, big}, {-big, big}};
  CHECK(spherical_polygon_area(huge) > 4 * kPi - 1e-2);
  const std::vector<Complex> bow = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  CHECK_THROWS_AS(spherical_polygon_area(bow), DomainError);
}

TEST_CASE("polygon predicates") {
  const std::vector<Complex> sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(polygon_contains(sq, {0.5, 0.5}));
  CHECK(polygon_contains(sq, {1.0, 0.5}));
  CHECK_FALSE(polygon_contains(sq, {1.01, 0.5}));
  CHECK(polygon_is_simple(sq));
  CHECK(signed_chart_area(sq) == doctest::Approx(1.0));
  CHECK(point_segment_distance({2, 0}, {0, 0}, {1, 0}) == doctest::Approx(1.0));
}

TEST_CASE("Mobius transforms") {
  const MobiusTransform t({2, 1}, {0, -1}, {0.5, 0}, {1, 1});
  CHECK(std::abs(t.a() * t.d() - t.b() * t.c() - 1.0) < 1e-14);
  Rng rng(17);
  const MobiusTransform id = t.compose(t.inverse());
  for (int i = 0; i < 50; ++i) {
    const Complex z = testsupport::random_disk_point(rng, 4.0);
    CHECK(std::abs(id(z).value() - z) < 1e-12 * (1 + std::abs(z)));
    // Spherical derivative against a finite-difference ratio of distances.
    const Complex h = 1e-6 * std::polar(1.0, rng.uniform() * 2 * kPi);
    const double fd = spherical_distance(t(z), t(z + h)) / spherical_distance(z, z + h);
    CHECK(t.spherical_derivative(z) == doctest::Approx(fd).epsilon(1e-5));
    // Derivative against the difference quotient.
    const Complex dq = (t(z + h).value() - t(z - h).value()) / (2.0 * h);
    CHECK(std::abs(dq - t.derivative(z)) < 1e-6 * std::abs(t.derivative(z)));
    CHECK(spherical_derivative(z, t(z).value(), t.derivative(z)) ==
          doctest::Approx(t.spherical_derivative(z)).epsilon(1e-12));
  }
  CHECK(spherical_distance(t(t.pole()), SpherePoint::infinity()) < 1e-12);
  CHECK(t.inverse()(SpherePoint::infinity()) == t.pole());
  // Derivative at infinity through the inversion chart.
  const double at_inf = t.spherical_derivative(SpherePoint::infinity());
  const MobiusTransform tin = t.compose(MobiusTransform::inversion());
  CHECK(at_inf == doctest::Approx(tin.spherical_derivative(SpherePoint(0.0))).epsilon(1e-12));
  CHECK_THROWS_AS(MobiusTransform(1, 2, 2, 4), DomainError);
}

TEST_CASE("rotations are isometries taking 0 to the target") {
  Rng rng(18);
  for (int i = 0; i < 50; ++i) {
    const SpherePoint c = testsupport::random_sphere_point(rng);
    const MobiusTransform r = MobiusTransform::rotation_to(c);
    CHECK(spherical_distance(r(SpherePoint(0.0)), c) < 1e-12);
    const SpherePoint a = testsupport::random_sphere_point(rng), b = testsupport::random_sphere_point(rng);
    CHECK(spherical_distance(r(a), r(b)) == doctest::Approx(spherical_distance(a, b)).epsilon(1e-11));
    CHECK(r.spherical_derivative(a) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(MobiusTransform::rotation_to(SpherePoint::infinity())(SpherePoint(0.0)).is_infinity());
}

TEST_CASE("normalization sends the triple to infinity, 0, 1") {
  Rng rng(19);
  for (int i = 0; i < 50; ++i) {
    const SpherePoint zi = testsupport::random_sphere_point(rng), z0 = testsupport::random_sphere_point(rng),
                      z1 = testsupport::random_sphere_point(rng);
    const MobiusTransform t = mobius_normalize(zi, z0, z1);
    CHECK(spherical_distance(t(zi), SpherePoint::infinity()) < 1e-9);
    CHECK(spherical_distance(t(z0), SpherePoint(0.0)) < 1e-9);
    CHECK(spherical_distance(t(z1), SpherePoint(1.0)) < 1e-9);
  }
  const SpherePoint inf = SpherePoint::infinity();
  for (const auto& [a, b, c] : {std::tuple{inf, SpherePoint(2.0), SpherePoint(Complex(0, 3))},
                               std::tuple{SpherePoint(1.0), inf, SpherePoint(-1.0)},
                               std::tuple{SpherePoint(1.0), SpherePoint(-1.0), inf}}) {
    const MobiusTransform t = mobius_normalize(a, b, c);
    CHECK(t(a).is_infinity());
    CHECK(std::abs(t(b).value()) < 1e-14);
    CHECK(std::abs(t(c).value() - 1.0) < 1e-14);
  }
  CHECK_THROWS_AS(mobius_normalize(SpherePoint(1.0), SpherePoint(1.0), SpherePoint(2.0)), DomainError);
}
