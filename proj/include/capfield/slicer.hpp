#ifndef CAPFIELD_SLICER_HPP
#define CAPFIELD_SLICER_HPP

#include <span>
#include <string>
#include <vector>

#include "capfield/poisson.hpp"

namespace capfield {

/// Harnack constant at half radius for the ball in R^(d+1): 2^d / 3^(d+1).
double harnack_c0(int d);

/// Step approximation of xi -> P(rN, xi) by nested caps around N.
///
/// radii[0] = 0 < radii[1] = (1-r)/2 < ... < radii[k] = 2, with consecutive
/// kernel levels in ratio c0. levels[j] = P(rN, .) at distance radii[j]
/// (j < k). jumps[j-1] is the weight of the cap of radius radii[j], so that
/// the step function equals levels[j] on the slice [radii[j], radii[j+1]).
struct SliceDecomposition {
  int d = 1;
  double r = 0.5;
  double c0 = 0.0;
  std::vector<double> radii;
  std::vector<double> levels;
  std::vector<double> jumps;

  int k() const { return static_cast<int>(radii.size()) - 1; }
  /// Σ_j jumps_j 1{delta < radii_j}.
  double step_value(double delta) const;
};

SliceDecomposition slice_radii(int d, double r, double c0);

/// Invariant violations of a decomposition (empty when consistent).
std::vector<std::string> check_slices(const SliceDecomposition& s, double tol = 1e-12);

/// mu(kappa(y, delta)) for a nonnegative cap/atom measure; radius 2 means the
/// whole sphere.
double cap_mass(const CapFunction& mu, const SpherePoint& y, double delta, const QuadratureConfig& config = {});

/// Same measure with every weight and mass replaced by its absolute value;
/// dominates |mu| setwise.
CapFunction absolute_majorant(const CapFunction& mu);

struct MaximalRatio {
  double delta_star = 0.0;
  double ratio = 0.0;
  std::vector<double> ratios;  // one per input radius
};

/// max over radii of mu(kappa(y, delta)) / sigma(kappa(y, delta)).
/// Throws for signed measures (pass absolute_majorant(mu) instead).
MaximalRatio maximal_over_caps(const CapFunction& mu, const SpherePoint& y, std::span<const double> radii,
                               const QuadratureConfig& config = {});

struct DominationCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double delta_star = 0.0;
  double doubling = 0.0;  // max_j sigma(2 delta_j) / sigma(delta_j)
  bool ok = false;
};

/// |P[mu](ry)| against c0^-1 * D * max_j ratio(min(2 delta_j, 2)), with delta_j
/// the slice radii at r and D the measured doubling constant of sigma on them.
DominationCheck check_domination(const CapFunction& mu, const SpherePoint& y, double r,
                                 const QuadratureConfig& config = {});

}  // namespace capfield

#endif  // CAPFIELD_SLICER_HPP
