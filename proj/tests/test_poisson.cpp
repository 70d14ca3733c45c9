#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "capfield/circle_evaluator.hpp"
#include "capfield/poisson.hpp"
#include "capfield/quadrature.hpp"
#include "oracles.hpp"

using namespace capfield;

TEST_CASE("kernel_value closed forms") {
  CHECK(kernel_value(1, 0.5, 0.0) == doctest::Approx(3.0).epsilon(1e-15));
  for (int d = 1; d <= 4; ++d) {
    for (double r : {0.1, 0.5, 0.9, 0.999}) {
      CHECK(kernel_value(d, r, 0.0) == doctest::Approx((1.0 + r) / std::pow(1.0 - r, d)).epsilon(1e-13));
      CHECK(kernel_value(d, 0.0, 0.7) == 1.0);
      double prev = kernel_value(d, r, 0.0);
      for (int i = 1; i <= 200; ++i) {
        const double delta = 2.0 * i / 200.0;
        const double v = kernel_value(d, r, delta);
        CHECK(v < prev);
        CHECK(v >= 0.0);
        CHECK(v <= 2.0 / std::pow(1.0 - r, d));
        // Against the angle form of the kernel.
        CHECK(v == doctest::Approx(oracle::kernel(d, r, 2.0 * std::asin(delta / 2.0))).epsilon(1e-10));
        prev = v;
      }
    }
  }
  CHECK_THROWS(kernel_value(1, 1.0, 0.3));
}

TEST_CASE("integrate_adaptive on a smooth integrand") {
  const double breaks[] = {0.0, 1.0};
  const auto res = integrate_adaptive([](double x) { return std::exp(x); }, breaks);
  CHECK(res.converged);
  CHECK(res.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
}

TEST_CASE("cap_kernel_integral examples") {
  for (int d : {1, 2, 3}) {
    for (double g : {0.0, 0.7, 2.0}) CHECK(cap_kernel_integral(d, 0.9, g, 2.0) == doctest::Approx(1.0).epsilon(1e-9));
    for (double rho : {0.05, 0.8, 1.7}) {
      CHECK(cap_kernel_integral(d, 0.0, 0.4, rho) == doctest::Approx(oracle::cap_measure(d, rho)).epsilon(1e-9));
    }
  }
  const double v = cap_kernel_integral(1, 0.9, 0.0, 0.1);
  CHECK(v > 0.0);
  CHECK(v < 1.0);
  CHECK(std::abs(v - oracle::arc_integral(0.9, 0.0, 2.0 * std::asin(0.05), 1000000)) < 1e-9);
}

TEST_CASE("d = 1 cap integrals match a dense Riemann sum") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const double r = 1.0 - std::pow(10.0, -(0.3 + 2.2 * u(rng)));
    const double gamma = 2.0 * u(rng), rho = 0.01 + 1.99 * u(rng);
    const double want = oracle::arc_integral(r, 2.0 * std::asin(gamma / 2.0), 2.0 * std::asin(rho / 2.0), 1000000);
    CAPTURE(r);
    CAPTURE(gamma);
    CAPTURE(rho);
    CHECK(std::abs(cap_kernel_integral(1, r, gamma, rho) - want) < 1e-7);
  }
}

TEST_CASE("d = 2 cap integrals match a polar-grid Riemann sum") {
  for (double r : {0.3, 0.8}) {
    for (double gamma : {0.0, 0.4, 1.3}) {
      for (double rho : {0.3, 1.0}) {
        const double want = oracle::cap_integral_s2(r, gamma, rho, 1500, 1500);
        CHECK(std::abs(cap_kernel_integral(2, r, gamma, rho) - want) < 2e-6);
      }
    }
  }
}

TEST_CASE("kernel normalization") {
  for (int d : {1, 2}) {
    for (double r : {0.5, 0.9, 0.99, 0.999}) CHECK(kernel_normalization_check(d, r) < 1e-8);
  }
  CHECK(kernel_normalization_check(2, 0.999999) < 1e-6);
}

TEST_CASE("cap integrals are bounded by 1 and monotone in the radius") {
  for (int d : {1, 2}) {
    for (double r : {0.5, 0.99}) {
      double prev = 0.0;
      for (int i = 1; i <= 40; ++i) {
        const double v = cap_kernel_integral(d, r, 0.3, 0.05 * i);
        CHECK(v <= 1.0 + 1e-12);
        CHECK(v >= prev - 1e-12);
        prev = v;
      }
    }
  }
}

TEST_CASE("cap_intersection_measure against Monte Carlo") {
  std::mt19937_64 rng(8);
  for (int d : {1, 2}) {
    const Eigen::VectorXd y = SpherePoint::north_pole(d).coords();
    Eigen::VectorXd z = Eigen::VectorXd::Zero(d + 1);
    z[0] = std::sin(0.5);
    z[d] = std::cos(0.5);
    const double gamma = (y - z).norm();
    const double mc = oracle::intersection_mc(y, z, 0.6, 0.5, 400000, rng);
    CHECK(std::abs(cap_intersection_measure(d, gamma, 0.6, 0.5) - mc) < 3e-3);
  }
}

TEST_CASE("poisson_integral examples and linearity") {
  const SpherePoint N = SpherePoint::north_pole(2);
  CHECK(poisson_integral(constant_function(2, 1.0), N, 0.95) == doctest::Approx(1.0).epsilon(1e-9));
  CapFunction atom(1, CapMode::Measure);
  atom.add_atom(SpherePoint::north_pole(1), 1.0);
  CHECK(poisson_integral(atom, SpherePoint::north_pole(1), 0.9) == doctest::Approx(19.0).epsilon(1e-12));

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    CapFunction f(2), g(2);
    for (int i = 0; i < 4; ++i) {
      f.add(Cap(random_sphere_point(2, rng), 0.05 + u(rng)), u(rng) - 0.3);
      g.add(Cap(random_sphere_point(2, rng), 0.05 + u(rng)), u(rng));
    }
    const double a = 2.0 * u(rng) - 1.0, b = 3.0 * u(rng);
    const SpherePoint y = random_sphere_point(2, rng);
    const double r = 0.9;
    const double lhs = poisson_integral(f.scaled(a) + g.scaled(b), y, r);
    const double rhs = a * poisson_integral(f, y, r) + b * poisson_integral(g, y, r);
    CHECK(std::abs(lhs - rhs) < 1e-10);
    // Nonnegative g: 0 <= P[g] <= 2 ||g||_1 / (1-r)^d
    const double pg = poisson_integral(g, y, r);
    CHECK(pg >= 0.0);
    CHECK(pg <= 2.0 * l1_norm(g).value / std::pow(1.0 - r, 2));
  }
}

TEST_CASE("l1_norm") {
  CapFunction f(1);
  f.add(Cap(SpherePoint::north_pole(1), 0.3), 2.5);
  CHECK(l1_norm(f).value == doctest::Approx(2.5 * oracle::cap_measure(1, 0.3)).epsilon(1e-12));
  f.add(Cap(SpherePoint::on_circle(0.1), 0.3), 1.0);
  CHECK(l1_norm(f).value == doctest::Approx(3.5 * oracle::cap_measure(1, 0.3)).epsilon(1e-12));
  CHECK(l1_norm(f).exact);
  f.add(Cap(SpherePoint::on_circle(2.0), 0.2), -1.0);
  CHECK_FALSE(l1_norm(f).exact);
  CapFunction m(1, CapMode::Measure);
  m.add_atom(SpherePoint::north_pole(1), 1.0);
  CHECK_THROWS(l1_norm(m));
  CHECK_THROWS(f.add_atom(SpherePoint::north_pole(1), 1.0));
}

TEST_CASE("cap lower constant is stable in r") {
  for (int d : {1, 2}) {
    std::vector<double> v;
    for (double r : {0.6, 0.9, 0.99, 0.999}) {
      const double rr[] = {r};
      v.push_back(cap_lower_constant(d, rr));
    }
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    CHECK(*lo > 0.0);
    CHECK(*hi <= 2.0 * *lo);
    // Tighter quadrature moves nothing.
    QuadratureConfig tight;
    tight.rel_tol = 1e-12;
    const double rr[] = {0.99};
    CHECK(std::abs(cap_lower_constant(d, rr, tight) - cap_lower_constant(d, rr)) < 1e-6);
  }
}

TEST_CASE("FFT evaluator agrees with quadrature on S^1") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CapFunction f(1);
  for (int i = 0; i < 40; ++i) f.add(Cap(random_sphere_point(1, rng), 0.001 + 0.3 * u(rng)), u(rng));
  const CircleEvaluator ev(f, 20);
  for (int n : {2, 5, 8}) {
    const double r = 1.0 - std::ldexp(1.0, -n);
    std::vector<double> angles;
    for (int k = 0; k < 20; ++k) angles.push_back(2.0 * oracle::kPi * u(rng));
    const auto got = ev.evaluate(r, angles);
    for (std::size_t k = 0; k < angles.size(); ++k) {
      const double want = poisson_integral(f, SpherePoint::on_circle(angles[k]), r);
      CHECK(std::abs(got[k] - want) <= 1e-4 * std::max(1.0, want));
    }
  }
  CHECK(circle_angle(SpherePoint::on_circle(1.25)) == doctest::Approx(1.25).epsilon(1e-14));
}
