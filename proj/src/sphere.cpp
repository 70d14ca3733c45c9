#include "capfield/sphere.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace capfield {

SpherePoint::SpherePoint(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw std::invalid_argument("SpherePoint: ambient dimension must be >= 2");
  const double norm = coords_.norm();
  if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
    throw std::invalid_argument("SpherePoint: coordinates are not a unit vector (norm " +
                                std::to_string(norm) + ")");
  }
}

SpherePoint SpherePoint::normalized(const Eigen::VectorXd& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("SpherePoint::normalized: zero or non-finite vector");
  }
  return SpherePoint(v / norm);
}

SpherePoint SpherePoint::north_pole(int d) {
  if (d < 1) throw std::invalid_argument("north_pole: d must be >= 1");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d + 1);
  v[d] = 1.0;
  return SpherePoint(std::move(v));
}

SpherePoint SpherePoint::on_circle(double theta) {
  Eigen::VectorXd v(2);
  v << std::sin(theta), std::cos(theta);
  return SpherePoint(std::move(v));
}

SpherePoint SpherePoint::antipode() const { return SpherePoint(Eigen::VectorXd(-coords_)); }

double chordal_distance(const SpherePoint& p, const SpherePoint& q) {
  if (p.coords().size() != q.coords().size()) {
    throw std::invalid_argument("chordal_distance: dimension mismatch");
  }
  return std::min((p.coords() - q.coords()).norm(), 2.0);
}

Cap::Cap(SpherePoint c, double r) : center(std::move(c)), radius(r) {
  if (!(radius > 0.0) || radius > 2.0) throw std::invalid_argument("Cap: radius must lie in (0, 2]");
}

Slice::Slice(SpherePoint c, double inner_radius, double outer_radius)
    : center(std::move(c)), inner(inner_radius), outer(outer_radius) {
  if (!(inner >= 0.0) || !(outer > inner)) {
    throw std::invalid_argument("Slice: need 0 <= inner < outer");
  }
}

namespace {
double log_factor(double s) { return 1.0 + std::log(1.0 / s); }
}  // namespace

double GaugeSpec::tau(double s) const {
  const double base = std::pow(s, -beta);
  return kind == GaugeKind::PowerLog ? base * log_factor(s) : base;
}

double GaugeSpec::phi(double s) const {
  const double base = std::pow(s, gamma);
  return kind == GaugeKind::PowerLog ? base * log_factor(s) : base;
}

double GaugeSpec::psi(double s) const { return std::pow(s, psi_gamma); }

double GaugeSpec::psi_inverse(double v) const {
  if (psi_gamma == 0.0) throw std::invalid_argument("GaugeSpec: psi exponent must be nonzero");
  return std::pow(v, 1.0 / psi_gamma);
}

void GaugeSpec::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("GaugeSpec: tau(0+) = +inf requires beta > 0");
  if (!(gamma > 0.0) || !(psi_gamma > 0.0)) {
    throw std::invalid_argument("GaugeSpec: dimension functions require positive exponents");
  }
}

Cap dilate_cap(const Cap& cap, const GaugeSpec& gauge) {
  if (gauge.psi_gamma == 0.0) throw std::invalid_argument("dilate_cap: psi exponent is zero");
  const double radius = gauge.psi_inverse(gauge.phi(cap.radius));
  return Cap(cap.center, std::min(radius, 2.0));
}

std::vector<Cap> five_r_disjointify(const std::vector<Cap>& caps) {
  std::vector<std::size_t> order(caps.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return caps[a].radius > caps[b].radius; });

  std::vector<Cap> kept;
  for (std::size_t idx : order) {
    const Cap& candidate = caps[idx];
    const bool disjoint = std::all_of(kept.begin(), kept.end(), [&](const Cap& k) {
      return chordal_distance(k.center, candidate.center) >= k.radius + candidate.radius;
    });
    if (disjoint) kept.push_back(candidate);
  }
  return kept;
}

bool within_dilate(const Cap& inner, const Cap& outer, double factor) {
  return chordal_distance(inner.center, outer.center) + inner.radius <= factor * outer.radius;
}

SpherePoint random_sphere_point(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(d + 1);
  do {
    for (int i = 0; i <= d; ++i) v[i] = normal(rng);
  } while (v.norm() < 1e-8);
  return SpherePoint::normalized(v);
}

SpherePoint geodesic_point(const SpherePoint& center, const Eigen::VectorXd& tangent, double theta) {
  return SpherePoint::normalized(std::cos(theta) * center.coords() + std::sin(theta) * tangent);
}

namespace {
Eigen::VectorXd random_tangent(const SpherePoint& center, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Index n = center.coords().size();
  Eigen::VectorXd v(n);
  for (;;) {
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
    v -= v.dot(center.coords()) * center.coords();
    const double norm = v.norm();
    if (norm > 1e-8) return v / norm;
  }
}
}  // namespace

SpherePoint random_point_in_cap(const Cap& cap, std::mt19937_64& rng) {
  const int d = cap.dim();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double mass = cap_measure(d, cap.radius);
  const double half_d = 0.5 * d;
  for (;;) {
    const double u = unif(rng) * mass;
    const double x = boost::math::ibeta_inv(half_d, half_d, u);
    const double theta = 2.0 * std::asin(std::sqrt(std::clamp(x, 0.0, 1.0)));
    SpherePoint p = geodesic_point(cap.center, random_tangent(cap.center, rng), theta);
    if (cap.contains(p)) return p;
  }
}

}  // namespace capfield
