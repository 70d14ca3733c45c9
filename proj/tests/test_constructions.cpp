#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "capfield/constructions.hpp"
#include "oracles.hpp"

using namespace capfield;

namespace {

const NetFamily& nets_d1() {
  static const NetFamily nets = build_nets(1, 13, 7);
  return nets;
}

// Σ |w| sigma(cap) over terms [first, end), with the cap measure from the oracle.
double tail_l1(const CapFunction& f, std::size_t first) {
  double s = 0.0;
  for (std::size_t i = first; i < f.terms.size(); ++i) {
    s += std::abs(f.terms[i].weight) * oracle::cap_measure(f.d, f.terms[i].cap.radius);
  }
  return s;
}

}  // namespace

TEST_CASE("limsup net level") {
  CHECK(limsup_net_level(10, 2.0) == 6);
  CHECK(limsup_net_level(12, 3.0) == 5);
  CHECK(limsup_net_level(7, 1.5) == 5);
  for (int n = 1; n <= 100; ++n) CHECK(limsup_net_level(n, 1.01) >= 0.99 * n);
  CHECK_THROWS(limsup_net_level(5, 1.0));
}

TEST_CASE("limsup layer caps and measure") {
  const LimsupLevel layer = limsup_cover_sets(nets_d1(), 2.0, 10);
  CHECK(layer.N == 6);
  CHECK(layer.caps.size() == nets_d1().level(6).size());
  for (const Cap& c : layer.caps) CHECK(c.radius == std::ldexp(1.0, -10));
  CHECK(layer.measure_bound() ==
        doctest::Approx(layer.caps.size() * oracle::cap_measure(1, std::ldexp(1.0, -10))).epsilon(1e-9));

  // Membership oracle: 10^6 uniform points against the caps by brute force.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0 * oracle::kPi);
  const CapUnion uni(layer.caps);
  int hits = 0, agree = 0;
  const int samples = 1000000;
  for (int i = 0; i < samples; ++i) {
    const SpherePoint p = SpherePoint::on_circle(u(rng));
    const bool in = uni.contains(p);
    hits += in;
    if (i % 1000 == 0) {
      bool brute = false;
      for (const Cap& c : layer.caps) brute = brute || c.contains(p);
      agree += brute == in;
    }
  }
  CHECK(agree == samples / 1000);
  const double est = static_cast<double>(hits) / samples;
  const double sd = std::sqrt(layer.measure_bound() / samples);
  CHECK(est <= layer.measure_bound() + 4.0 * sd);
  // Net points are 2^-6 apart, so these caps are disjoint and the bound is attained.
  CHECK(std::abs(est - layer.measure_bound()) <= 4.0 * sd);

  CHECK_THROWS(limsup_cover_sets(nets_d1(), 1.05, 20));
}

TEST_CASE("saturating function shape") {
  for (int n : {4, 8, 12}) {
    const CapFunction raw = saturating_raw(nets_d1(), n);
    std::size_t expected = 0;
    for (int N = 1; N <= n + 1; ++N) expected += nets_d1().level(N).size();
    CHECK(raw.terms.size() == expected);
    std::size_t i = 0;
    for (int N = 1; N <= n + 1; ++N) {
      for (std::size_t k = 0; k < nets_d1().level(N).size(); ++k, ++i) {
        CHECK(raw.terms[i].cap.radius == 2.0 * std::ldexp(1.0, -n));
        CHECK(raw.terms[i].weight == doctest::Approx(std::ldexp(1.0, n - N) / (n + 1)).epsilon(1e-15));
      }
    }
    const CapFunction f = saturating_function(nets_d1(), n);
    CHECK(f.nonnegative());
    CHECK(tail_l1(f, 0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(l1_norm(f).exact);
    CHECK(f.truncation == n);
  }
  CHECK_THROWS(saturating_function(nets_d1(), 13));
}

TEST_CASE("raw saturating norms stay bounded") {
  double lo = 1e300, hi = 0.0;
  for (int n = 4; n <= 12; ++n) {
    const double v = tail_l1(saturating_raw(nets_d1(), n), 0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi < 8.0);
  CHECK(hi / lo < 1.5);
}

TEST_CASE("saturating functions grow on the limsup layer") {
  const int n = 10;
  const double alpha = 2.0;
  const CapFunction f = saturating_function(nets_d1(), n).merged();
  const LimsupLevel layer = limsup_cover_sets(nets_d1(), alpha, n);
  std::mt19937_64 rng(17);
  const double r = 1.0 - std::ldexp(1.0, -n);
  for (int i = 0; i < 5; ++i) {
    const SpherePoint y = sample_in_union(layer.caps, rng);
    // Midpoint-rule oracle over every arc.
    double v = 0.0;
    for (const CapTerm& t : f.terms) {
      const double c = chord_to_angle(chordal_distance(y, t.cap.center));
      const double a = chord_to_angle(t.cap.radius);
      v += t.weight * oracle::arc_integral(r, c, a, c < 20.0 * a ? 4000 : 16);
    }
    const double q = n * std::ldexp(1.0, -(n - layer.N)) * v;
    CHECK(q > 0.1);
    CHECK(std::abs(poisson_integral(f, y, r) - v) <= 1e-5 * v);
  }
}

TEST_CASE("covering sequence buckets and budget") {
  const SpherePoint N = SpherePoint::north_pole(1);
  const CoveringSequence cov = point_covering(N, 6);
  const auto buckets = cov.buckets();
  REQUIRE(buckets.size() == 6);
  for (std::size_t j = 0; j < 6; ++j) {
    REQUIRE(buckets[j].size() == 1);
    CHECK(buckets[j][0].radius == std::ldexp(1.0, -static_cast<int>(j + 1)));
  }
  CHECK(cov.omega_at(5) == 5.0);
  // phi(s) = s^2 keeps Σ phi <= 2^-j; phi(s) = s^0.5 does not.
  CHECK(cov.check(GaugeSpec{GaugeKind::Power, 1.0, 2.0, 2.0}).empty());
  CHECK_FALSE(cov.check(GaugeSpec{GaugeKind::Power, 0.5, 0.5, 0.5}).empty());

  CoveringSequence odd;
  odd.d = 1;
  odd.coverings = {{Cap(N, 0.3), Cap(N, 0.25)}};
  const auto b = odd.buckets();
  REQUIRE(b.size() == 2);
  // 1/4 < 0.3 <= 1/2 and 1/8 < 0.25 <= 1/4
  REQUIRE(b[0].size() == 1);
  CHECK(b[0][0].radius == 0.3);
  CHECK(b[1].size() == 1);
}

TEST_CASE("divergence function example") {
  const SpherePoint N = SpherePoint::north_pole(1);
  const GaugeSpec gauge{GaugeKind::Power, 0.5, 0.5, 0.5};
  const DivergenceBuild b = divergence_function(point_covering(N, 14), gauge);
  REQUIRE(b.f.terms.size() == 14);
  for (int n = 1; n <= 14; ++n) {
    const CapTerm& t = b.f.terms[static_cast<std::size_t>(n - 1)];
    CHECK(t.weight == doctest::Approx(n * std::pow(2.0, 0.5 * n)).epsilon(1e-14));
    CHECK(t.cap.radius == std::ldexp(1.0, 1 - n));
    CHECK(b.series_terms[static_cast<std::size_t>(n - 1)] == doctest::Approx(n * std::pow(2.0, -0.5 * n)).epsilon(1e-14));
  }
  CHECK(b.f.truncation == 14);
  // Partial sums of the L1 norm converge.
  const double l1 = tail_l1(b.f, 0);
  CHECK(l1 == doctest::Approx(l1_norm(b.f).value).epsilon(1e-9));
  CHECK(l1 < 10.0);
  CHECK(b.series_terms.back() < 0.05 * l1);

  const DivergenceBuild empty = divergence_function(CoveringSequence{1, {}, {}}, gauge);
  CHECK(empty.f.terms.empty());
  CHECK(empty.f.atoms.empty());
}

TEST_CASE("divergence function rejects bad inputs") {
  const SpherePoint N = SpherePoint::north_pole(1);
  // tau(s) s / phi(s) = s^-0.8 grows without bound.
  CHECK_THROWS_AS(divergence_function(point_covering(N, 30), GaugeSpec{GaugeKind::Power, 0.9, 0.9, 0.9}),
                  std::invalid_argument);
  CoveringSequence cov = point_covering(N, 10);
  for (int n = 1; n <= 10; ++n) cov.omega.push_back(std::pow(4.0, n));
  CHECK_THROWS_AS(divergence_function(cov, GaugeSpec{GaugeKind::Power, 0.5, 0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("residual witness") {
  const int n = 8;
  const CapFunction fn = saturating_function(nets_d1(), n);
  const CapFunction h0 = residual_witness(CapFunction(1), nets_d1(), n);
  REQUIRE(h0.terms.size() == fn.terms.size());
  for (std::size_t i = 0; i < fn.terms.size(); ++i) CHECK(h0.terms[i].weight == doctest::Approx(fn.terms[i].weight / n));

  const CapFunction g = constant_function(1, 1.0);
  const CapFunction h = residual_witness(g, nets_d1(), n);
  CHECK(tail_l1(h, g.terms.size()) == doctest::Approx(1.0 / n).epsilon(1e-9));
  const SpherePoint y = nets_d1().level(3).point(2);
  const double r = 1.0 - std::ldexp(1.0, -n);
  CHECK(poisson_integral(h, y, r) - poisson_integral(g, y, r) ==
        doctest::Approx(poisson_integral(fn, y, r) / n).epsilon(1e-9));
  CHECK_THROWS(residual_witness(constant_function(2, 1.0), nets_d1(), n));
}

TEST_CASE("mixture witness weights") {
  const CapFunction w = mixture_witness(nets_d1(), 8);
  CHECK(w.truncation == 8);
  CHECK(w.nonnegative());
  // Σ_k 2^-k over k = 1..3 of unit-norm pieces.
  CHECK(tail_l1(w, 0) == doctest::Approx(0.875).epsilon(1e-9));
}
