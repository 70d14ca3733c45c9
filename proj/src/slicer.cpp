#include "capfield/slicer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace capfield {

double harnack_c0(int d) {
  if (d < 1) throw std::invalid_argument("harnack_c0: d must be >= 1");
  return std::pow(2.0, d) / std::pow(3.0, d + 1);
}

double SliceDecomposition::step_value(double delta) const {
  double v = 0.0;
  for (std::size_t j = 1; j < radii.size(); ++j) {
    if (delta < radii[j]) v += jumps[j - 1];
  }
  return v;
}

SliceDecomposition slice_radii(int d, double r, double c0) {
  if (d < 1) throw std::invalid_argument("slice_radii: d must be >= 1");
  if (!(r > 0.0) || !(r < 1.0)) throw std::invalid_argument("slice_radii: r must lie in (0, 1)");
  if (!(c0 > 0.0) || !(c0 < 1.0)) throw std::invalid_argument("slice_radii: c0 must lie in (0, 1)");

  SliceDecomposition s;
  s.d = d;
  s.r = r;
  s.c0 = c0;
  const double t = 1.0 - r;
  // kernel ∝ ((1-r)^2 + r delta^2)^(-(d+1)/2): a factor c0 in the kernel is a
  // factor lambda in the squared distance.
  const double lambda = std::pow(c0, -2.0 / (d + 1));
  s.radii = {0.0, 0.5 * t};
  while (s.radii.back() < 2.0) {
    const double dj = s.radii.back();
    const double next2 = (lambda * (t * t + r * dj * dj) - t * t) / r;
    s.radii.push_back(next2 >= 4.0 ? 2.0 : std::sqrt(next2));
  }
  const int k = s.k();
  for (int j = 0; j < k; ++j) s.levels.push_back(kernel_value(d, r, s.radii[static_cast<std::size_t>(j)]));
  // Cap j (radius radii[j]) covers slices 0..j-1, so the slice levels telescope.
  for (int j = 1; j <= k; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    s.jumps.push_back(j < k ? s.levels[uj - 1] - s.levels[uj] : s.levels[uj - 1]);
  }
  return s;
}

std::vector<std::string> check_slices(const SliceDecomposition& s, double tol) {
  std::vector<std::string> failures;
  auto fail = [&](const std::string& what) { failures.push_back(what); };
  const int k = s.k();
  if (k < 1 || s.radii.front() != 0.0) fail("radii must start at 0 with at least one slice");
  if (k >= 1 && std::abs(s.radii[1] - 0.5 * (1.0 - s.r)) > tol * (1.0 - s.r)) fail("first radius must be (1-r)/2");
  if (s.radii.back() != 2.0) fail("last radius must be 2");
  for (std::size_t j = 1; j < s.radii.size(); ++j) {
    if (!(s.radii[j] > s.radii[j - 1])) fail("radii must increase strictly");
  }
  if (s.levels.size() != static_cast<std::size_t>(k) || s.jumps.size() != static_cast<std::size_t>(k)) {
    fail("levels/jumps size mismatch");
    return failures;
  }
  // Interior steps: radii[2..k-1] were solved from the level ratio.
  for (int j = 2; j < k; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const double ratio = s.levels[uj] / s.levels[uj - 1];
    if (std::abs(ratio - s.c0) > tol * s.c0) {
      std::ostringstream msg;
      msg << "level ratio at step " << j << " is " << ratio << ", expected " << s.c0;
      fail(msg.str());
    }
  }
  double total = 0.0;
  for (double dj : s.jumps) {
    if (!(dj > 0.0)) fail("jumps must be positive");
    total += dj;
  }
  if (std::abs(total - s.levels.front()) > tol * s.levels.front()) fail("jumps must sum to the kernel peak");
  return failures;
}

double cap_mass(const CapFunction& mu, const SpherePoint& y, double delta, const QuadratureConfig& config) {
  if (y.dim() != mu.d) throw std::invalid_argument("cap_mass: dimension mismatch");
  double total = 0.0;
  const bool whole = delta >= 2.0;
  for (const CapTerm& t : mu.terms) {
    if (t.weight == 0.0) continue;
    const double part = whole ? cap_measure(mu.d, t.cap.radius)
                              : cap_intersection_measure(mu.d, chordal_distance(y, t.cap.center), t.cap.radius,
                                                         delta, config);
    total += t.weight * part;
  }
  for (const Atom& a : mu.atoms) {
    if (whole || chordal_distance(y, a.point) < delta) total += a.mass;
  }
  return total;
}

CapFunction absolute_majorant(const CapFunction& mu) {
  CapFunction out = mu;
  for (CapTerm& t : out.terms) t.weight = std::abs(t.weight);
  for (Atom& a : out.atoms) a.mass = std::abs(a.mass);
  return out;
}

MaximalRatio maximal_over_caps(const CapFunction& mu, const SpherePoint& y, std::span<const double> radii,
                               const QuadratureConfig& config) {
  if (radii.empty()) throw std::invalid_argument("maximal_over_caps: no radii");
  if (!mu.nonnegative()) {
    throw std::invalid_argument("maximal_over_caps: signed measure; use its absolute majorant");
  }
  MaximalRatio out;
  out.ratio = -1.0;
  for (double delta : radii) {
    if (!(delta > 0.0)) throw std::invalid_argument("maximal_over_caps: radii must be positive");
    const double ratio = cap_mass(mu, y, delta, config) / cap_measure(mu.d, std::min(delta, 2.0));
    out.ratios.push_back(ratio);
    if (ratio > out.ratio) {
      out.ratio = ratio;
      out.delta_star = delta;
    }
  }
  return out;
}

DominationCheck check_domination(const CapFunction& mu, const SpherePoint& y, double r,
                                 const QuadratureConfig& config) {
  if (!(r > 0.0) || !(r < 1.0)) throw std::invalid_argument("check_domination: r must lie in (0, 1)");
  const int d = mu.d;
  const SliceDecomposition s = slice_radii(d, r, harnack_c0(d));
  const CapFunction total_variation = mu.nonnegative() ? mu : absolute_majorant(mu);

  std::vector<double> doubled;
  DominationCheck out;
  for (std::size_t j = 1; j < s.radii.size(); ++j) {
    const double dj = s.radii[j];
    doubled.push_back(std::min(2.0 * dj, 2.0));
    out.doubling = std::max(out.doubling, cap_measure(d, doubled.back()) / cap_measure(d, dj));
  }
  const MaximalRatio best = maximal_over_caps(total_variation, y, doubled, config);
  out.lhs = std::abs(poisson_integral(mu, y, r, config));
  out.rhs = out.doubling * best.ratio / s.c0;
  out.delta_star = best.delta_star;
  // Both sides carry quadrature error at the configured relative tolerance.
  out.ok = out.lhs <= out.rhs * (1.0 + 100.0 * config.rel_tol);
  return out;
}

}  // namespace capfield
