#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <random>

#include "capfield/net.hpp"
#include "oracles.hpp"

using namespace capfield;

namespace {

double brute_min_distance(const Eigen::MatrixXd& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < pts.cols(); ++j) best = std::min(best, (pts.col(i) - pts.col(j)).norm());
  }
  return best;
}

double brute_gap(const Eigen::MatrixXd& pts, int samples, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd x = oracle::uniform_point(static_cast<int>(pts.rows()) - 1, rng);
    worst = std::max(worst, (pts.colwise() - x).colwise().norm().minCoeff());
  }
  return worst;
}

}  // namespace

TEST_CASE("greedy level-1 net on a fine circle grid has 4..12 points") {
  // Independent greedy run over 10^5 grid points.
  const int grid = 100000;
  std::vector<Eigen::Vector2d> kept;
  for (int i = 0; i < grid; ++i) {
    const double t = 2.0 * oracle::kPi * i / grid;
    const Eigen::Vector2d p(std::sin(t), std::cos(t));
    bool ok = true;
    for (const auto& q : kept) ok = ok && (p - q).norm() >= 0.5;
    if (ok) kept.push_back(p);
  }
  CHECK(kept.size() >= 4);
  CHECK(kept.size() <= 12);
  const NetFamily nets = build_nets(1, 1, 7);
  CHECK(nets.level(1).size() >= 4);
  CHECK(nets.level(1).size() <= 12);
}

TEST_CASE("d = 1 nets: separation exact, covering, nesting, cardinality") {
  const NetFamily nets = build_nets(1, 10, 7);
  std::mt19937_64 rng(1);
  for (const Net& net : nets.nets) {
    CAPTURE(net.level);
    const double s = net.separation();
    CHECK(brute_min_distance(net.points) >= s);
    CHECK(min_pairwise_distance(net) == brute_min_distance(net.points));
    CHECK(brute_gap(net.points, 4000, rng) < s);
  }
  CHECK(verify_nesting(nets).empty());
  // Chord packing bound 2π / (2 arcsin(2^-11)) on card(R_10).
  const double packing = 2.0 * oracle::kPi / (2.0 * std::asin(std::ldexp(1.0, -11)));
  CHECK(static_cast<double>(nets.level(10).size()) <= packing);
  CHECK(nets.level(10).size() * std::ldexp(1.0, -10) <= 2.0 * oracle::kPi);
}

TEST_CASE("d = 2 nets are separated and covering") {
  const NetFamily nets = build_nets(2, 5, 3);
  std::mt19937_64 rng(2);
  for (const Net& net : nets.nets) {
    CAPTURE(net.level);
    CHECK(brute_min_distance(net.points) >= net.separation());
    CHECK(brute_gap(net.points, 20000, rng) < net.separation());
  }
  CHECK(verify_nesting(nets).empty());
}

TEST_CASE("d = 3 nets are separated") {
  const NetFamily nets = build_nets(3, 3, 3);
  for (const Net& net : nets.nets) CHECK(brute_min_distance(net.points) >= net.separation());
}

TEST_CASE("nets are deterministic given the seed") {
  const NetFamily a = build_nets(1, 8, 42), b = build_nets(1, 8, 42);
  CHECK(a.level(8).points == b.level(8).points);
  const NetFamily c = build_nets(2, 4, 42), e = build_nets(2, 4, 42);
  CHECK(c.level(4).points == e.level(4).points);
}

TEST_CASE("verify_net flags a deleted point") {
  const NetFamily nets = build_nets(1, 3, 7);
  Net net = nets.level(3);
  const NetReport ok = verify_net(net, 20000, 1);
  CHECK(ok.ok());
  CHECK(ok.covering_gap < 0.125);
  Eigen::MatrixXd fewer(2, net.points.cols() - 1);
  fewer << net.points.leftCols(4), net.points.rightCols(net.points.cols() - 5);
  net.points = fewer;
  const NetReport bad = verify_net(net, 20000, 1);
  CHECK_FALSE(bad.covering_ok);
  CHECK(bad.covering_gap >= 0.125);
  CHECK_FALSE(bad.ok());
}

TEST_CASE("resource guardrail") {
  CHECK_THROWS_AS(build_nets(3, 12, 7), ResourceLimitError);
  try {
    build_nets(3, 12, 7);
  } catch (const ResourceLimitError& e) {
    CHECK(e.estimate() > std::ldexp(1.0, 36));
  }
}

TEST_CASE("PointIndex queries match brute force") {
  std::mt19937_64 rng(9);
  PointIndex index(3, 0.1);
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < 500; ++i) {
    pts.push_back(oracle::uniform_point(2, rng));
    index.insert(pts.back());
  }
  for (int q = 0; q < 50; ++q) {
    const Eigen::VectorXd x = oracle::uniform_point(2, rng);
    std::size_t brute = 0;
    double nearest = 10.0;
    for (const auto& p : pts) {
      brute += (p - x).norm() < 0.25;
      nearest = std::min(nearest, (p - x).norm());
    }
    CHECK(index.within(x, 0.25).size() == brute);
    CHECK(index.nearest(x).second == nearest);
  }
}
