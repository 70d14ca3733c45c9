#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "capfield/sphere.hpp"
#include "oracles.hpp"

using namespace capfield;

TEST_CASE("chordal distance examples") {
  const SpherePoint N = SpherePoint::north_pole(1);
  CHECK(chordal_distance(N, N) == 0.0);
  CHECK(chordal_distance(N, N.antipode()) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(chordal_distance(N, SpherePoint(Eigen::Vector2d(1.0, 0.0))) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(chordal_distance(N, SpherePoint::north_pole(2)), std::invalid_argument);
}

TEST_CASE("sphere points must be unit vectors") {
  CHECK_THROWS_AS(SpherePoint(Eigen::Vector2d(0.6, 0.81)), std::invalid_argument);
  CHECK_THROWS_AS(SpherePoint(Eigen::VectorXd::Ones(1)), std::invalid_argument);
  CHECK_NOTHROW(SpherePoint(Eigen::Vector2d(0.6, 0.8)));
}

TEST_CASE("caps are open") {
  const Cap c(SpherePoint::north_pole(1), std::sqrt(2.0));
  CHECK_FALSE(c.contains(SpherePoint(Eigen::Vector2d(1.0, 0.0))));
  CHECK(c.contains(SpherePoint::on_circle(1.5)));
  const SpherePoint p = SpherePoint::on_circle(0.3);
  const double t = chordal_distance(SpherePoint::north_pole(1), p);
  CHECK(Slice(SpherePoint::north_pole(1), t, 2.0 * t).contains(p));  // inner radius is closed
  CHECK_FALSE(Slice(SpherePoint::north_pole(1), 0.5 * t, t).contains(p));
}

TEST_CASE("cap_measure examples") {
  CHECK(cap_measure(1, 2.0) == 1.0);
  CHECK(cap_measure(1, std::sqrt(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cap_measure(2, std::sqrt(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(cap_measure(1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(cap_measure(1, 2.5), std::invalid_argument);
}

TEST_CASE("cap_measure agrees with adaptive Simpson on sin^(d-1)") {
  for (int d = 1; d <= 5; ++d) {
    for (double delta : {1e-4, 0.01, 0.3, 1.0, 1.5, 1.99}) {
      CAPTURE(d);
      CAPTURE(delta);
      CHECK(std::abs(cap_measure(d, delta) - oracle::cap_measure(d, delta)) < 1e-12);
    }
  }
}

TEST_CASE("cap_measure is increasing and Ahlfors regular") {
  for (int d = 1; d <= 4; ++d) {
    double prev = 0.0, lo = 1e9, hi = 0.0;
    for (int k = 1; k <= 500; ++k) {
      const double delta = 2.0 * k / 500.0;
      const double v = cap_measure(d, delta);
      CHECK(v > prev);
      prev = v;
      if (delta <= 1.0) {
        lo = std::min(lo, v / std::pow(delta, d));
        hi = std::max(hi, v / std::pow(delta, d));
      }
    }
    CHECK(lo > 0.0);
    CHECK(hi / lo < 2.0);
  }
}

TEST_CASE("dilate_cap exponent algebra") {
  const int d = 2;
  const double alpha = 2.0;
  const int N = 3;
  const GaugeSpec g{GaugeKind::Power, 1.0, static_cast<double>(d), d / alpha};
  CHECK(dilate_cap(Cap(SpherePoint::north_pole(d), std::ldexp(1.0, -N)), g).radius ==
        doctest::Approx(std::pow(2.0, -N * alpha)).epsilon(1e-14));
  const GaugeSpec same{GaugeKind::Power, 1.0, 0.7, 0.7};
  CHECK(dilate_cap(Cap(SpherePoint::north_pole(d), 0.3), same).radius == doctest::Approx(0.3).epsilon(1e-15));
  const GaugeSpec bad{GaugeKind::Power, 1.0, 0.7, 0.0};
  CHECK_THROWS_AS(dilate_cap(Cap(SpherePoint::north_pole(d), 0.3), bad), std::invalid_argument);
  const GaugeSpec there{GaugeKind::Power, 1.0, 0.4, 1.1}, back{GaugeKind::Power, 1.0, 1.1, 0.4};
  for (double r : {1e-3, 0.1, 0.5}) {
    const Cap c(SpherePoint::north_pole(d), r);
    CHECK(dilate_cap(dilate_cap(c, there), back).radius == doctest::Approx(r).epsilon(1e-13));
  }
}

TEST_CASE("five_r_disjointify examples") {
  const SpherePoint N = SpherePoint::north_pole(1);
  CHECK(five_r_disjointify({Cap(N, 0.3)}).size() == 1);
  const auto two = five_r_disjointify({Cap(N, 0.1), Cap(N.antipode(), 0.1)});
  CHECK(two.size() == 2);
  const SpherePoint q = SpherePoint::on_circle(2.0 * std::asin(0.025));  // ||N - q|| = 0.05
  const auto kept = five_r_disjointify({Cap(q, 0.08), Cap(N, 0.1)});
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].radius == 0.1);
  CHECK(within_dilate(Cap(q, 0.08), kept[0], 5.0));
}

TEST_CASE("five_r_disjointify properties on random families") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 3;
    std::vector<Cap> caps;
    for (int i = 0; i < 80; ++i) caps.emplace_back(random_sphere_point(d, rng), 0.01 + 0.3 * u(rng));
    const auto kept = five_r_disjointify(caps);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      for (std::size_t j = i + 1; j < kept.size(); ++j) {
        CHECK(chordal_distance(kept[i].center, kept[j].center) >= kept[i].radius + kept[j].radius);
      }
    }
    for (const Cap& c : caps) {
      bool inside = false;
      for (const Cap& k : kept) inside = inside || within_dilate(c, k, 5.0);
      CHECK(inside);
    }
  }
}

TEST_CASE("points in a cap see a doubled cap around its centre") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 3000; ++i) {
    const int d = 1 + i % 3;
    const double s = std::ldexp(1.0, -(1 + i % 12));
    const Cap outer(random_sphere_point(d, rng), s);
    const SpherePoint y = random_point_in_cap(outer, rng);
    REQUIRE(outer.contains(y));
    // Sample kappa(y, s) and test membership in kappa(x, 2s) directly.
    for (int k = 0; k < 5; ++k) {
      const SpherePoint xi = random_point_in_cap(Cap(y, s), rng);
      CHECK(Cap(outer.center, 2.0 * s).contains(xi));
    }
  }
}

TEST_CASE("random_point_in_cap is uniform in the polar angle") {
  // Fraction inside the half-radius cap must match the measure ratio.
  std::mt19937_64 rng(3);
  for (int d : {1, 2, 3}) {
    const Cap c(SpherePoint::north_pole(d), 0.8);
    int inner = 0;
    const int n = 40000;
    for (int i = 0; i < n; ++i) inner += Cap(c.center, 0.4).contains(random_point_in_cap(c, rng));
    const double expect = oracle::cap_measure(d, 0.4) / oracle::cap_measure(d, 0.8);
    CHECK(std::abs(static_cast<double>(inner) / n - expect) < 0.01);
  }
}
