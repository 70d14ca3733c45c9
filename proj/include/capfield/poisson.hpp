#ifndef CAPFIELD_POISSON_HPP
#define CAPFIELD_POISSON_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "capfield/quadrature.hpp"
#include "capfield/sphere.hpp"

namespace capfield {

/// Poisson kernel P(r y, xi) of the ball in R^(d+1) as a function of the
/// chordal distance delta = ||y - xi||, using ||r y - xi||^2 = (1-r)^2 + r delta^2.
template <typename Scalar>
Scalar kernel_value(int d, Scalar r, Scalar delta) {
  if (!(r < Scalar(1))) throw std::invalid_argument("kernel_value: r must be < 1");
  if (r < Scalar(0)) throw std::invalid_argument("kernel_value: r must be >= 0");
  using std::pow;
  const Scalar one_minus = Scalar(1) - r;
  const Scalar dist2 = one_minus * one_minus + r * delta * delta;
  return one_minus * (Scalar(1) + r) / pow(dist2, Scalar(d + 1) / Scalar(2));
}

/// r_n = 1 - 2^-n together with the evaluation direction.
struct RadialPoint {
  int n = 1;
  double r = 0.5;
  SpherePoint direction;

  static RadialPoint dyadic(int n, SpherePoint direction);
};

enum class CapMode { Function, Measure };

struct CapTerm {
  Cap cap;
  double weight = 0.0;
};

struct Atom {
  SpherePoint point;
  double mass = 0.0;
};

/// Finite weighted sum of cap indicators, optionally with point atoms when
/// read as a measure. `truncation` records the finest dyadic level n whose
/// scale the construction represents (0 = no truncation).
struct CapFunction {
  int d = 1;
  CapMode mode = CapMode::Function;
  std::vector<CapTerm> terms;
  std::vector<Atom> atoms;
  int truncation = 0;

  CapFunction() = default;
  explicit CapFunction(int dim, CapMode m = CapMode::Function) : d(dim), mode(m) {}

  void add(Cap cap, double weight);
  void add_atom(SpherePoint point, double mass);

  /// Sum of weights of caps containing xi (the density part).
  double density_at(const SpherePoint& xi) const;
  bool nonnegative() const;
  CapFunction scaled(double factor) const;
  /// Combines terms with identical caps.
  CapFunction merged() const;
  void validate() const;
};

/// a + b; the mode is Measure if either operand is.
CapFunction operator+(const CapFunction& a, const CapFunction& b);

/// The constant function `value` (a single whole-sphere cap).
CapFunction constant_function(int d, double value);

/// Integral of P(r y, .) over kappa(z, cap_radius) ∩ kappa(y, outer_radius),
/// ||y - z|| = gamma. Reduced by symmetry about y to a one-dimensional
/// integral over the polar angle from y, weighted by the fraction of each
/// latitude sphere inside the cap.
QuadratureResult cap_region_integral(int d, double r, double gamma, double cap_radius, double outer_radius,
                                     const QuadratureConfig& config = {});

/// ∫_{kappa(z, cap_radius)} P(r y, xi) dsigma(xi) with ||y - z|| = gamma.
/// Throws QuadratureError when the tolerance is not reached.
double cap_kernel_integral(int d, double r, double gamma, double cap_radius, const QuadratureConfig& config = {});

/// sigma(kappa(z, rho) ∩ kappa(y, delta)) with ||y - z|| = gamma.
double cap_intersection_measure(int d, double gamma, double rho, double delta, const QuadratureConfig& config = {});

double poisson_integral(const CapFunction& f, const SpherePoint& direction, double r,
                        const QuadratureConfig& config = {});
double poisson_integral(const CapFunction& f, const RadialPoint& site, const QuadratureConfig& config = {});

struct L1Norm {
  double value = 0.0;
  /// False when weights have mixed signs; value is then an upper bound.
  bool exact = true;
};

/// Σ |w_i| sigma(cap_i). Throws if the function carries atoms.
L1Norm l1_norm(const CapFunction& f);

/// |∫_{S^d} P(r N, .) dsigma - 1|.
double kernel_normalization_check(int d, double r, const QuadratureConfig& config = {});

/// min over the grid of ∫_{kappa(N, 1-r)} P(r N, .) dsigma; all r must lie in (1/2, 1).
double cap_lower_constant(int d, std::span<const double> r_grid, const QuadratureConfig& config = {});

}  // namespace capfield

#endif  // CAPFIELD_POISSON_HPP
