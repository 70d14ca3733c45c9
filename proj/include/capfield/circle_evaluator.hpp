#ifndef CAPFIELD_CIRCLE_EVALUATOR_HPP
#define CAPFIELD_CIRCLE_EVALUATOR_HPP

#include <complex>
#include <span>
#include <vector>

#include "capfield/poisson.hpp"

namespace capfield {

/// Angle t of a point of S^1 with p = on_circle(t) = (sin t, cos t), in [0, 2π).
double circle_angle(const SpherePoint& p);

/// Batch Poisson integrals of a cap function on S^1.
///
/// The function is replaced by its exact averages over M equal cells; the
/// kernel is integrated exactly over each cell, and the circular convolution
/// is done by FFT. Values at cell centres are then interpolated (cubic) at the
/// requested angles. The only approximation is f being constant inside the
/// few cells that contain an arc endpoint, so errors scale with M^-1 2^n at
/// r = 1 - 2^-n.
class CircleEvaluator {
 public:
  explicit CircleEvaluator(const CapFunction& f, int log2_cells = 22);

  std::size_t cells() const { return averages_.size(); }
  const std::vector<double>& cell_averages() const { return averages_; }

  /// P[f](r·on_circle(theta_i)) at the cell centres theta_i = (i + 1/2) 2π / M.
  std::vector<double> grid_values(double r) const;
  /// P[f](r·on_circle(angle)) for each angle, from one grid evaluation.
  std::vector<double> evaluate(double r, std::span<const double> angles) const;

  static double interpolate(const std::vector<double>& grid, double angle);

 private:
  std::vector<double> averages_;
  std::vector<std::complex<double>> spectrum_;
};

}  // namespace capfield

#endif  // CAPFIELD_CIRCLE_EVALUATOR_HPP
