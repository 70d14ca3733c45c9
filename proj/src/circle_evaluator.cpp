#include "capfield/circle_evaluator.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

namespace capfield {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

/// Forward real transform of `in` (size m) into m/2 + 1 complex bins.
std::vector<std::complex<double>> forward(const std::vector<double>& in) {
  const std::size_t m = in.size();
  auto real = fftw_buffer<double>(m);
  auto spec = fftw_buffer<fftw_complex>(m / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(m), real.get(), spec.get(), FFTW_ESTIMATE);
  }
  std::copy(in.begin(), in.end(), real.get());
  fftw_execute(plan);
  std::vector<std::complex<double>> out(m / 2 + 1);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {spec[i][0], spec[i][1]};
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<double> inverse(const std::vector<std::complex<double>>& spec_in, std::size_t m) {
  auto spec = fftw_buffer<fftw_complex>(m / 2 + 1);
  auto real = fftw_buffer<double>(m);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(m), spec.get(), real.get(), FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < spec_in.size(); ++i) {
    spec[i][0] = spec_in[i].real();
    spec[i][1] = spec_in[i].imag();
  }
  fftw_execute(plan);
  std::vector<double> out(real.get(), real.get() + m);
  for (double& v : out) v /= static_cast<double>(m);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

/// ∫ P(r, t) dt / 2π over the cell of offset j, for j = 0..m-1 (wrapped).
std::vector<double> kernel_cells(double r, std::size_t m) {
  const double h = kTwoPi / static_cast<double>(m);
  const double k = (1.0 + r) / (1.0 - r);
  // Antiderivative (1/π) atan(K tan(t/2)); differences taken through atan2
  // so that no tangent is formed.
  std::vector<double> g(m);
  const std::size_t half = m / 2;
  for (std::size_t j = 0; j < half; ++j) {
    const double lo = (static_cast<double>(j) - 0.5) * h;
    const double hi = lo + h;
    const double num = k * std::sin(0.5 * h);
    const double den = std::cos(0.5 * hi) * std::cos(0.5 * lo) + k * k * std::sin(0.5 * hi) * std::sin(0.5 * lo);
    g[j] = std::atan2(num, den) / kPi;
    if (j > 0) g[m - j] = g[j];
  }
  // The cell straddling t = π.
  const double lo = kPi - 0.5 * h;
  g[half] = 2.0 * (0.5 * kPi - std::atan(k * std::tan(0.5 * lo))) / kPi;
  return g;
}

}  // namespace

double circle_angle(const SpherePoint& p) {
  if (p.dim() != 1) throw std::invalid_argument("circle_angle: point must lie on S^1");
  double t = std::atan2(p[0], p[1]);
  if (t < 0.0) t += kTwoPi;
  return t;
}

CircleEvaluator::CircleEvaluator(const CapFunction& f, int log2_cells) {
  if (f.d != 1) throw std::invalid_argument("CircleEvaluator: function must live on S^1");
  if (!f.atoms.empty()) throw std::invalid_argument("CircleEvaluator: atoms are not supported");
  if (log2_cells < 4 || log2_cells > 26) throw std::invalid_argument("CircleEvaluator: log2_cells must lie in [4, 26]");
  const std::size_t m = std::size_t{1} << log2_cells;
  const double h = kTwoPi / static_cast<double>(m);

  // First differences of the cell averages; each arc endpoint e (in cell
  // units) switches an indicator on or off part-way through cell floor(e).
  std::vector<long double> diff(m + 1, 0.0L);
  long double wrapped = 0.0L;
  auto add_edge = [&](double e, long double w) {
    double cell = std::floor(e);
    const double frac = e - cell;
    auto i = static_cast<std::size_t>(cell);
    if (i >= m) i = m - 1;
    diff[i] += w * (1.0L - frac);
    diff[i + 1] += w * frac;
  };
  for (const CapTerm& t : f.terms) {
    if (t.weight == 0.0) continue;
    const long double w = t.weight;
    const double a = chord_to_angle(t.cap.radius);
    if (a >= kPi) {
      wrapped += w;
      continue;
    }
    const double c = circle_angle(t.cap.center);
    double lo = std::fmod(c - a, kTwoPi);
    if (lo < 0.0) lo += kTwoPi;
    double hi = std::fmod(c + a, kTwoPi);
    if (hi < 0.0) hi += kTwoPi;
    add_edge(lo / h, w);
    add_edge(hi / h, -w);
    if (lo > hi) wrapped += w;
  }
  averages_.resize(m);
  long double run = wrapped;
  for (std::size_t i = 0; i < m; ++i) {
    run += diff[i];
    averages_[i] = static_cast<double>(run);
  }
  spectrum_ = forward(averages_);
}

std::vector<double> CircleEvaluator::grid_values(double r) const {
  if (!(r >= 0.0) || !(r < 1.0)) throw std::invalid_argument("CircleEvaluator: r must lie in [0, 1)");
  const std::size_t m = averages_.size();
  if (r == 0.0) {
    long double mean = 0.0L;
    for (double v : averages_) mean += v;
    return std::vector<double>(m, static_cast<double>(mean / static_cast<long double>(m)));
  }
  const auto kernel = forward(kernel_cells(r, m));
  std::vector<std::complex<double>> product(spectrum_.size());
  for (std::size_t i = 0; i < product.size(); ++i) product[i] = spectrum_[i] * kernel[i];
  return inverse(product, m);
}

double CircleEvaluator::interpolate(const std::vector<double>& grid, double angle) {
  const auto m = static_cast<std::int64_t>(grid.size());
  const double h = kTwoPi / static_cast<double>(m);
  double t = std::fmod(angle, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  // Cell centres sit at (i + 1/2) h.
  const double u = t / h - 0.5;
  const double base = std::floor(u);
  const double s = u - base;
  const auto i1 = static_cast<std::int64_t>(base);
  auto at = [&](std::int64_t i) { return grid[static_cast<std::size_t>(((i % m) + m) % m)]; };
  const double p0 = at(i1 - 1), p1 = at(i1), p2 = at(i1 + 1), p3 = at(i1 + 2);
  // Catmull-Rom
  return p1 + 0.5 * s * (p2 - p0 + s * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + s * (3.0 * (p1 - p2) + p3 - p0)));
}

std::vector<double> CircleEvaluator::evaluate(double r, std::span<const double> angles) const {
  const std::vector<double> grid = grid_values(r);
  std::vector<double> out;
  out.reserve(angles.size());
  for (double a : angles) out.push_back(interpolate(grid, a));
  return out;
}

}  // namespace capfield
