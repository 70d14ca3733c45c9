#include "capfield/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>

namespace capfield {

RadialPoint RadialPoint::dyadic(int n, SpherePoint direction) {
  if (n < 1) throw std::invalid_argument("RadialPoint: n must be >= 1");
  return {n, 1.0 - std::ldexp(1.0, -n), std::move(direction)};
}

void CapFunction::add(Cap cap, double weight) {
  if (cap.dim() != d) throw std::invalid_argument("CapFunction::add: dimension mismatch");
  terms.push_back({std::move(cap), weight});
}

void CapFunction::add_atom(SpherePoint point, double mass) {
  if (mode != CapMode::Measure) throw std::invalid_argument("CapFunction: atoms require measure mode");
  if (point.dim() != d) throw std::invalid_argument("CapFunction::add_atom: dimension mismatch");
  atoms.push_back({std::move(point), mass});
}

double CapFunction::density_at(const SpherePoint& xi) const {
  double v = 0.0;
  for (const CapTerm& t : terms) {
    if (t.cap.contains(xi)) v += t.weight;
  }
  return v;
}

bool CapFunction::nonnegative() const {
  return std::all_of(terms.begin(), terms.end(), [](const CapTerm& t) { return t.weight >= 0.0; }) &&
         std::all_of(atoms.begin(), atoms.end(), [](const Atom& a) { return a.mass >= 0.0; });
}

CapFunction CapFunction::scaled(double factor) const {
  CapFunction out = *this;
  for (CapTerm& t : out.terms) t.weight *= factor;
  for (Atom& a : out.atoms) a.mass *= factor;
  return out;
}

CapFunction CapFunction::merged() const {
  struct Key {
    std::vector<double> c;
    double r;
    bool operator<(const Key& o) const { return r != o.r ? r < o.r : c < o.c; }
  };
  std::map<Key, std::size_t> seen;
  CapFunction out(d, mode);
  out.truncation = truncation;
  out.atoms = atoms;
  for (const CapTerm& t : terms) {
    Key key{std::vector<double>(t.cap.center.coords().data(), t.cap.center.coords().data() + t.cap.center.coords().size()),
            t.cap.radius};
    auto [it, inserted] = seen.emplace(std::move(key), out.terms.size());
    if (inserted) {
      out.terms.push_back(t);
    } else {
      out.terms[it->second].weight += t.weight;
    }
  }
  return out;
}

void CapFunction::validate() const {
  if (d < 1) throw std::invalid_argument("CapFunction: d must be >= 1");
  if (mode == CapMode::Function && !atoms.empty()) {
    throw std::invalid_argument("CapFunction: atoms are only permitted in measure mode");
  }
  for (const CapTerm& t : terms) {
    if (t.cap.dim() != d) throw std::invalid_argument("CapFunction: cap dimension mismatch");
    if (!std::isfinite(t.weight)) throw std::invalid_argument("CapFunction: non-finite weight");
  }
  for (const Atom& a : atoms) {
    if (a.point.dim() != d) throw std::invalid_argument("CapFunction: atom dimension mismatch");
  }
}

CapFunction operator+(const CapFunction& a, const CapFunction& b) {
  if (a.d != b.d) throw std::invalid_argument("CapFunction: cannot add functions on different spheres");
  CapFunction out(a.d, (a.mode == CapMode::Measure || b.mode == CapMode::Measure) ? CapMode::Measure : CapMode::Function);
  out.terms = a.terms;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  out.atoms = a.atoms;
  out.atoms.insert(out.atoms.end(), b.atoms.begin(), b.atoms.end());
  if (a.truncation > 0 && b.truncation > 0) {
    out.truncation = std::min(a.truncation, b.truncation);
  } else {
    out.truncation = std::max(a.truncation, b.truncation);
  }
  return out;
}

CapFunction constant_function(int d, double value) {
  CapFunction f(d);
  f.add(Cap(SpherePoint::north_pole(d), 2.0), value);
  return f;
}

namespace {

constexpr double kPi = std::numbers::pi;

/// Fraction of the latitude sphere at polar angle theta (chord delta) around y
/// that lies inside kappa(z, rho), ||y - z|| = gamma.
double latitude_fraction(int d, double delta, double gamma, double rho) {
  const double d2 = delta * delta;
  const double g2 = gamma * gamma;
  // cos∠(xi,z) > 1 - rho^2/2  <=>  den * u > num, u the cosine of the azimuth
  const double num = 0.5 * (d2 + g2 - rho * rho) - 0.25 * d2 * g2;
  const double den = delta * gamma * std::sqrt(std::max(0.0, (1.0 - 0.25 * d2) * (1.0 - 0.25 * g2)));
  if (!(den > 0.0)) return num < 0.0 ? 1.0 : 0.0;
  const double u = num / den;
  if (u >= 1.0) return 0.0;
  if (u <= -1.0) return 1.0;
  if (d == 1) return 0.5;
  if (d == 2) return std::acos(u) / kPi;
  const double a = 0.5 * (d - 1);
  return boost::math::ibeta(a, a, 0.5 * (1.0 - u));
}

void check_cap_arguments(double r, double gamma, double cap_radius) {
  if (!(r >= 0.0) || !(r < 1.0)) throw std::invalid_argument("cap integral: r must lie in [0, 1)");
  if (!(gamma >= 0.0) || gamma > 2.0 + 1e-12) throw std::invalid_argument("cap integral: gamma must lie in [0, 2]");
  if (!(cap_radius > 0.0) || cap_radius > 2.0) throw std::invalid_argument("cap integral: cap radius must lie in (0, 2]");
}

}  // namespace

QuadratureResult cap_region_integral(int d, double r, double gamma, double cap_radius, double outer_radius,
                                     const QuadratureConfig& config) {
  if (d < 1) throw std::invalid_argument("cap integral: d must be >= 1");
  check_cap_arguments(r, gamma, cap_radius);
  if (!(outer_radius > 0.0)) return {};
  gamma = std::min(gamma, 2.0);

  const double theta_z = chord_to_angle(gamma);
  const double theta_rho = chord_to_angle(cap_radius);
  const double upper = std::min(kPi, chord_to_angle(std::min(outer_radius, 2.0)));

  std::vector<double> cuts{0.0, upper, std::abs(theta_z - theta_rho), theta_z + theta_rho,
                           2.0 * kPi - theta_z - theta_rho};
  if (r > 0.0) {
    // Geometric mesh resolving the kernel peak of width 1 - r around y.
    for (double t = 0.125 * (1.0 - r); t < upper; t *= 4.0) cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<double, double>> segments;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = std::max(0.0, cuts[i]);
    const double b = std::min(upper, cuts[i + 1]);
    if (!(b > a)) continue;
    const double mid = 0.5 * (a + b);
    if (latitude_fraction(d, angle_to_chord(mid), gamma, cap_radius) == 0.0) continue;
    segments.emplace_back(a, b);
  }
  if (segments.empty()) return {0.0, 0.0, 0, true};

  const double normalizer = boost::math::beta(0.5, 0.5 * d);
  auto integrand_theta = [&](double theta) {
    const double delta = angle_to_chord(theta);
    const double frac = latitude_fraction(d, delta, gamma, cap_radius);
    if (frac == 0.0) return 0.0;
    const double kernel = r > 0.0 ? kernel_value(d, r, delta) : 1.0;
    const double jac = d == 1 ? 1.0 : std::pow(std::sin(theta), d - 1);
    return kernel * frac * jac;
  };
  // Each segment is mapped from [i, i+1] through a cosine substitution, which
  // smooths the square-root behaviour of the latitude fraction at its ends.
  auto integrand = [&](double s) {
    auto idx = static_cast<std::size_t>(std::floor(s));
    if (idx >= segments.size()) idx = segments.size() - 1;
    const auto [a, b] = segments[idx];
    const double local = s - static_cast<double>(idx);
    const double theta = a + (b - a) * 0.5 * (1.0 - std::cos(kPi * local));
    const double jac = (b - a) * 0.5 * kPi * std::sin(kPi * local);
    return integrand_theta(theta) * jac;
  };
  std::vector<double> breaks(segments.size() + 1);
  for (std::size_t i = 0; i < breaks.size(); ++i) breaks[i] = static_cast<double>(i);

  QuadratureResult res = integrate_adaptive(integrand, breaks, config);
  res.value /= normalizer;
  res.error /= normalizer;
  return res;
}

double cap_kernel_integral(int d, double r, double gamma, double cap_radius, const QuadratureConfig& config) {
  const QuadratureResult res = cap_region_integral(d, r, gamma, cap_radius, 2.0, config);
  if (!res.converged) {
    std::ostringstream msg;
    msg << "cap_kernel_integral: quadrature did not converge (d=" << d << ", r=" << r << ", gamma=" << gamma
        << ", radius=" << cap_radius << ", achieved error " << res.error << ")";
    throw QuadratureError(msg.str(), res.error);
  }
  return res.value;
}

double cap_intersection_measure(int d, double gamma, double rho, double delta, const QuadratureConfig& config) {
  const QuadratureResult res = cap_region_integral(d, 0.0, gamma, rho, delta, config);
  if (!res.converged) {
    throw QuadratureError("cap_intersection_measure: quadrature did not converge", res.error);
  }
  return res.value;
}

double poisson_integral(const CapFunction& f, const SpherePoint& direction, double r, const QuadratureConfig& config) {
  if (direction.dim() != f.d) throw std::invalid_argument("poisson_integral: dimension mismatch");
  if (!(r >= 0.0) || !(r < 1.0)) throw std::invalid_argument("poisson_integral: site must lie inside the ball");
  if (f.mode == CapMode::Function && !f.atoms.empty()) {
    throw std::invalid_argument("poisson_integral: atoms are only permitted in measure mode");
  }
  double total = 0.0;
  for (const CapTerm& t : f.terms) {
    if (t.weight == 0.0) continue;
    total += t.weight * cap_kernel_integral(f.d, r, chordal_distance(direction, t.cap.center), t.cap.radius, config);
  }
  for (const Atom& a : f.atoms) {
    total += a.mass * kernel_value(f.d, r, chordal_distance(direction, a.point));
  }
  return total;
}

double poisson_integral(const CapFunction& f, const RadialPoint& site, const QuadratureConfig& config) {
  return poisson_integral(f, site.direction, site.r, config);
}

L1Norm l1_norm(const CapFunction& f) {
  if (!f.atoms.empty()) throw std::invalid_argument("l1_norm: atoms have no L1 density");
  L1Norm out;
  bool has_pos = false;
  bool has_neg = false;
  for (const CapTerm& t : f.terms) {
    out.value += std::abs(t.weight) * cap_measure(f.d, t.cap.radius);
    has_pos = has_pos || t.weight > 0.0;
    has_neg = has_neg || t.weight < 0.0;
  }
  out.exact = !(has_pos && has_neg);
  return out;
}

double kernel_normalization_check(int d, double r, const QuadratureConfig& config) {
  return std::abs(cap_kernel_integral(d, r, 0.0, 2.0, config) - 1.0);
}

double cap_lower_constant(int d, std::span<const double> r_grid, const QuadratureConfig& config) {
  if (r_grid.empty()) throw std::invalid_argument("cap_lower_constant: empty grid");
  double best = std::numeric_limits<double>::infinity();
  for (double r : r_grid) {
    if (!(r > 0.5) || !(r < 1.0)) throw std::invalid_argument("cap_lower_constant: r must lie in (1/2, 1)");
    best = std::min(best, cap_kernel_integral(d, r, 0.0, 1.0 - r, config));
  }
  return best;
}

}  // namespace capfield
