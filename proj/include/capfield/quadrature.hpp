#ifndef CAPFIELD_QUADRATURE_HPP
#define CAPFIELD_QUADRATURE_HPP

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace capfield {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct QuadratureConfig {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  int max_intervals = 4000;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_error() const { return achieved_; }

 private:
  double achieved_;
};

/// Globally adaptive 7/15-point Gauss-Kronrod over [breaks.front(), breaks.back()],
/// starting from the panels given by consecutive breakpoints. The interval
/// with the largest error estimate is bisected until
/// error <= max(abs_tol, rel_tol * |value|) or max_intervals is reached.
/// Convergence is also declared once the error sits at the roundoff floor.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, std::span<const double> breaks,
                                    const QuadratureConfig& config = {});

}  // namespace capfield

#endif  // CAPFIELD_QUADRATURE_HPP
