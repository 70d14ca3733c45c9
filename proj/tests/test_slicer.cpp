#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "capfield/slicer.hpp"
#include "oracles.hpp"

using namespace capfield;

TEST_CASE("Harnack constant holds on a grid") {
  for (int d = 1; d <= 3; ++d) {
    const double c0 = harnack_c0(d);
    CHECK(c0 == doctest::Approx(std::pow(2.0, d) / std::pow(3.0, d + 1)).epsilon(1e-15));
    // P(rN, xi) >= c0 P(rN, N) on ||xi - N|| <= 1 - r; worst case at the boundary.
    for (int i = 1; i < 400; ++i) {
      const double r = 0.5 + 0.5 * i / 400.0;
      const double peak = oracle::kernel(d, r, 0.0);
      for (int j = 0; j <= 20; ++j) {
        const double t = 2.0 * std::asin((1.0 - r) * j / 40.0);
        CHECK(oracle::kernel(d, r, t) >= c0 * peak);
      }
    }
  }
  // d = 1, r = 0.9
  const double r = 0.9, t = 2.0 * std::asin(0.05);
  CHECK(oracle::kernel(1, r, t) / oracle::kernel(1, r, 0.0) > 2.0 / 9.0);
}

TEST_CASE("slice radii invariants") {
  for (int d = 1; d <= 3; ++d) {
    for (double r : {0.3, 0.5, 0.9, 0.99, 0.999}) {
      const SliceDecomposition s = slice_radii(d, r, harnack_c0(d));
      CAPTURE(d);
      CAPTURE(r);
      CHECK(check_slices(s).empty());
      CHECK(s.radii.front() == 0.0);
      CHECK(s.radii[1] == doctest::Approx((1.0 - r) / 2.0).epsilon(1e-15));
      CHECK(s.radii.back() == 2.0);
      double sum = 0.0;
      for (double j : s.jumps) {
        CHECK(j >= 0.0);
        sum += j;
      }
      CHECK(sum == doctest::Approx(s.levels.front()).epsilon(1e-12));
      for (std::size_t j = 1; j + 1 < s.radii.size(); ++j) CHECK(s.radii[j] < s.radii[j + 1]);
      // Same inputs, same output.
      const SliceDecomposition again = slice_radii(d, r, harnack_c0(d));
      CHECK(again.radii == s.radii);
    }
  }
}

TEST_CASE("number of slices grows logarithmically") {
  for (int d = 1; d <= 3; ++d) {
    const double c0 = harnack_c0(d);
    const int k10 = slice_radii(d, 1.0 - std::ldexp(1.0, -10), c0).k();
    const int k5 = slice_radii(d, 1.0 - std::ldexp(1.0, -5), c0).k();
    const double predicted = 5.0 * (d + 1) * std::log(2.0) / std::log(1.0 / c0);
    CHECK(std::abs((k10 - k5) - predicted) <= 2.0);
  }
}

TEST_CASE("step function sandwiches the kernel") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int d = 1; d <= 3; ++d) {
    const double c0 = harnack_c0(d);
    for (double r : {0.6, 0.95, 0.999}) {
      const SliceDecomposition s = slice_radii(d, r, c0);
      for (int i = 0; i < 200; ++i) {
        const double delta = 2.0 * u(rng);
        const double k = oracle::kernel(d, r, 2.0 * std::asin(delta / 2.0));
        const double step = s.step_value(delta);
        CHECK(k <= step * (1.0 + 1e-12));
        CHECK(c0 * step <= k * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("maximal_over_caps examples") {
  const SpherePoint N = SpherePoint::north_pole(2);
  const double radii[] = {0.01, 0.3, 1.0, 2.0};
  const MaximalRatio uniform = maximal_over_caps(constant_function(2, 1.0), N, radii);
  for (double q : uniform.ratios) CHECK(q == doctest::Approx(1.0).epsilon(1e-9));

  CapFunction atom(2, CapMode::Measure);
  atom.add_atom(N, 1.0);
  const MaximalRatio a = maximal_over_caps(atom, N, radii);
  CHECK(a.delta_star == 0.01);
  CHECK(a.ratio == doctest::Approx(1.0 / oracle::cap_measure(2, 0.01)).epsilon(1e-9));

  CapFunction signed_fn(2);
  signed_fn.add(Cap(N, 0.5), -1.0);
  CHECK_THROWS(maximal_over_caps(signed_fn, N, radii));
  const MaximalRatio m = maximal_over_caps(absolute_majorant(signed_fn), N, radii);
  CHECK(m.ratio == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cap_mass agrees with the intersection oracle") {
  std::mt19937_64 rng(5);
  const SpherePoint N = SpherePoint::north_pole(2);
  const SpherePoint z = SpherePoint::normalized(Eigen::Vector3d(0.4, 0.0, 1.0));
  CapFunction f(2);
  f.add(Cap(z, 0.7), 2.0);
  const double mc = oracle::intersection_mc(N.coords(), z.coords(), 0.7, 0.5, 400000, rng);
  CHECK(std::abs(cap_mass(f, N, 0.5) - 2.0 * mc) < 6e-3);
  CHECK(cap_mass(f, N, 2.0) == doctest::Approx(2.0 * oracle::cap_measure(2, 0.7)).epsilon(1e-9));
}

TEST_CASE("domination check examples") {
  for (int d : {1, 2}) {
    const SpherePoint N = SpherePoint::north_pole(d);
    const DominationCheck uniform = check_domination(constant_function(d, 1.0), N, 0.9);
    CHECK(uniform.ok);
    CHECK(uniform.lhs == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(uniform.rhs >= 1.0);

    CapFunction atom(d, CapMode::Measure);
    atom.add_atom(N, 1.0);
    const double r = 0.99;
    const DominationCheck a = check_domination(atom, N, r);
    const SliceDecomposition s = slice_radii(d, r, harnack_c0(d));
    CHECK(a.ok);
    CHECK(a.lhs == doctest::Approx(oracle::kernel(d, r, 0.0)).epsilon(1e-12));
    CHECK(a.delta_star >= 1.0 - r - 1e-15);
    CHECK(a.delta_star <= 2.0 * s.radii[2] + 1e-15);
  }
}

TEST_CASE("domination over random measures") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 1 + trial % 2;
    CapFunction mu(d, CapMode::Measure);
    for (int i = 0; i < 3; ++i) mu.add(Cap(random_sphere_point(d, rng), 0.02 + u(rng)), u(rng) - 0.2);
    mu.add_atom(random_sphere_point(d, rng), u(rng));
    const double r = 1.0 - std::pow(10.0, -(0.5 + 2.0 * u(rng)));
    const DominationCheck c = check_domination(mu, random_sphere_point(d, rng), r);
    CHECK(c.ok);
    CHECK(c.delta_star >= 1.0 - r - 1e-15);
  }
}
