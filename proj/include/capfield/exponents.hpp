#ifndef CAPFIELD_EXPONENTS_HPP
#define CAPFIELD_EXPONENTS_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "capfield/net.hpp"
#include "capfield/poisson.hpp"

namespace capfield {

struct ProfileRow {
  int n = 1;
  double r = 0.5;
  double value = 0.0;
  bool ok = true;  // false when the quadrature missed its tolerance
  std::string note;
};

struct RadialProfile {
  SpherePoint y;
  std::vector<ProfileRow> rows;
};

/// P[f](r_n y) for n = n_min..n_max, r_n = 1 - 2^-n. Requires n_max to stay
/// within f.truncation when that is set.
RadialProfile radial_profile(const CapFunction& f, const SpherePoint& y, int n_min, int n_max,
                             const QuadratureConfig& config = {});

struct BetaEstimate {
  double value = 0.0;  // clamped to [0, d]
  double raw = 0.0;    // before clamping
  int n_at_max = 0;    // row attaining the maximum (0 if every row vanished)
};

/// max over the last n_tail rows of log2|value| / n, clamped to [0, d].
/// Zero rows are skipped; an all-zero tail gives 0.
BetaEstimate beta_hat_detail(const RadialProfile& profile, int n_tail);
double beta_hat(const RadialProfile& profile, int n_tail);

enum class EvalBackend { Auto, Quadrature, Fft };

struct EvalOptions {
  EvalBackend backend = EvalBackend::Auto;  // Auto: FFT on S^1, quadrature otherwise
  int fft_log2_cells = 22;
  QuadratureConfig quadrature;
  int jobs = 1;
};

/// Profiles of f at many probe directions (columns of `probes`).
/// values(k, i) = P[f](r_{n_min + k} probe_i).
struct ProfileTable {
  int n_min = 1;
  int n_max = 1;
  Eigen::MatrixXd values;
  std::vector<std::string> failures;  // quadrature rows that missed tolerance

  RadialProfile profile(const Eigen::MatrixXd& probes, Eigen::Index i) const;
  /// Tail estimate over rows [n_end - n_tail + 1, n_end] for probe i.
  BetaEstimate beta(Eigen::Index i, int n_end, int n_tail, int d) const;
};

ProfileTable profile_table(const CapFunction& f, const Eigen::MatrixXd& probes, int n_min, int n_max,
                           const EvalOptions& options = {});

/// Probe points y with |beta_hat(profile(y)) - beta| <= tol, the tail ending
/// at n_end. Returned as indices into the probe net.
std::vector<Eigen::Index> level_set(const ProfileTable& table, int d, double beta, double tol, int n_end, int n_tail);
/// Same, building the profiles over [n_end - n_tail + 1, n_end].
std::vector<SpherePoint> level_set(const CapFunction& f, double beta, double tol, const Net& probe_net, int n_end,
                                   int n_tail, const EvalOptions& options = {});

struct BoxDimension {
  double dim = 0.0;
  double r2 = 0.0;
  bool empty = false;  // some level had no cap meeting the set
  std::vector<int> levels;
  std::vector<std::size_t> counts;
};

/// Least-squares slope of log2 N(m) against m over the given counts; levels
/// with a zero count are dropped (and flagged), dim = 0 when fewer than two remain.
BoxDimension fit_box_dimension(std::vector<int> levels, std::vector<std::size_t> counts);

/// Number of points of `net` whose open 2^-level cap meets the point set.
std::size_t count_caps_meeting(const Net& net, const Eigen::MatrixXd& points);
/// Number of points of `net` whose 2^-level cap meets one of the caps.
std::size_t count_caps_meeting(const Net& net, const std::vector<Cap>& caps);

/// Box dimension of a fixed point set over net levels [n_lo, n_hi].
BoxDimension box_dimension(const Eigen::MatrixXd& points, int n_lo, int n_hi, const NetFamily& nets);
/// Box dimension of a set given at each level m as a union of caps.
BoxDimension box_dimension(const std::function<std::vector<Cap>(int)>& caps_at_level, int n_lo, int n_hi,
                           const NetFamily& nets);
/// Box dimension of a set known through membership of probe points, where
/// membership may depend on the level m being counted.
BoxDimension box_dimension(const std::function<bool(Eigen::Index, int)>& member, const Net& probe_net, int n_lo,
                           int n_hi, const NetFamily& nets);

struct SpectrumConfig {
  double tol = 0.05;
  int n_tail = 6;
  int probe_level = 12;
  int n_lo = 6;   // box-counting levels
  int n_hi = 12;
  EvalOptions eval;
};

struct SpectrumPoint {
  double beta = 0.0;
  double dim = 0.0;
  double r2 = 0.0;
  int n_lo = 0;
  int n_hi = 0;
  bool empty = false;
  std::vector<std::size_t> counts;
};

struct SpectrumEstimate {
  int d = 1;
  std::vector<SpectrumPoint> points;
};

/// For each beta, the box dimension of the level set E(beta). At box level m
/// a probe belongs to the level set when its tail estimate over rows
/// [m - n_tail + 1, m] lies within tol of beta, so each scale is classified
/// with the exponents resolved at that scale.
SpectrumEstimate spectrum(const CapFunction& f, const std::vector<double>& betas, const NetFamily& nets,
                          const SpectrumConfig& config);

}  // namespace capfield

#endif  // CAPFIELD_EXPONENTS_HPP
