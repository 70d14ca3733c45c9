#include "capfield/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace capfield {

namespace {

// Kronrod nodes on [-1, 1] (nonnegative half) and weights; the Gauss 7-point
// rule uses the odd-indexed nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrod[7];
  double gauss = fc * kGauss[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kNodes[static_cast<std::size_t>(i)];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrod[static_cast<std::size_t>(i)] * sum;
    if (i % 2 == 1) gauss += kGauss[static_cast<std::size_t>(i / 2)] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, std::span<const double> breaks,
                                    const QuadratureConfig& config) {
  QuadratureResult result;
  if (breaks.size() < 2) return result;
  std::priority_queue<Panel> heap;
  double value = 0.0;
  double error = 0.0;
  double magnitude = 0.0;  // integral of |f| proxy for the roundoff floor
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    Panel p = gk15(f, breaks[i], breaks[i + 1]);
    result.evaluations += 15;
    value += p.value;
    error += p.error;
    magnitude += std::abs(p.value);
    heap.push(p);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  auto done = [&] {
    const double target = std::max(config.abs_tol, config.rel_tol * std::abs(value));
    return error <= target || error <= 50.0 * eps * magnitude;
  };
  int intervals = static_cast<int>(heap.size());
  while (!heap.empty() && !done() && intervals < config.max_intervals) {
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval cannot be split further in double precision.
      heap.push({worst.a, worst.b, worst.value, 0.0});
      error -= worst.error;
      continue;
    }
    const Panel left = gk15(f, worst.a, mid);
    const Panel right = gk15(f, mid, worst.b);
    result.evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    magnitude += std::abs(left.value) + std::abs(right.value) - std::abs(worst.value);
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Re-sum to shed accumulated update roundoff.
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  result.value = value;
  result.error = error;
  result.converged = done();
  return result;
}

}  // namespace capfield
