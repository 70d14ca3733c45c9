#include "capfield/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace capfield {

int limsup_net_level(int n, double alpha) {
  if (!(alpha > 1.0)) throw std::invalid_argument("limsup: alpha must be > 1");
  if (n < 1) throw std::invalid_argument("limsup: n must be >= 1");
  return static_cast<int>(std::floor(static_cast<double>(n) / alpha)) + 1;
}

double LimsupLevel::measure_bound() const {
  return static_cast<double>(caps.size()) * cap_measure(d, radius());
}

LimsupLevel limsup_cover_sets(const NetFamily& nets, double alpha, int n) {
  LimsupLevel level;
  level.d = nets.d;
  level.alpha = alpha;
  level.n = n;
  level.N = limsup_net_level(n, alpha);
  const Net& net = nets.level(level.N);
  const double radius = level.radius();
  level.caps.reserve(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) level.caps.emplace_back(net.point(i), radius);
  return level;
}

LimsupFamily limsup_family(const NetFamily& nets, double alpha, int n_lo, int n_hi) {
  if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("limsup_family: bad level range");
  LimsupFamily family;
  family.d = nets.d;
  family.alpha = alpha;
  for (int n = n_lo; n <= n_hi; ++n) family.levels.push_back(limsup_cover_sets(nets, alpha, n));
  return family;
}

CapUnion::CapUnion(const std::vector<Cap>& caps) : caps_(caps) {
  if (caps_.empty()) return;
  for (const Cap& c : caps_) max_radius_ = std::max(max_radius_, c.radius);
  index_ = std::make_unique<PointIndex>(caps_.front().dim() + 1, max_radius_);
  for (const Cap& c : caps_) {
    if (c.dim() != caps_.front().dim()) throw std::invalid_argument("CapUnion: mixed dimensions");
    index_->insert(c.center.coords());
  }
}

bool CapUnion::contains(const SpherePoint& y) const {
  if (!index_) return false;
  for (int id : index_->within(y.coords(), max_radius_)) {
    if (caps_[static_cast<std::size_t>(id)].contains(y)) return true;
  }
  return false;
}

SpherePoint sample_in_union(const std::vector<Cap>& caps, std::mt19937_64& rng) {
  if (caps.empty()) throw std::invalid_argument("sample_in_union: empty union");
  std::uniform_int_distribution<std::size_t> pick(0, caps.size() - 1);
  return random_point_in_cap(caps[pick(rng)], rng);
}

double saturating_weight(int d, int n, int N) {
  return std::ldexp(1.0, (n - N) * d) / static_cast<double>(n + 1);
}

CapFunction saturating_raw(const NetFamily& nets, int n) {
  if (n < 1) throw std::invalid_argument("saturating: n must be >= 1");
  const int d = nets.d;
  CapFunction f(d);
  f.truncation = n;
  const double radius = std::min(2.0, 2.0 * std::ldexp(1.0, -n));
  for (int N = 1; N <= n + 1; ++N) {
    const Net& net = nets.level(N);
    const double w = saturating_weight(d, n, N);
    for (std::size_t i = 0; i < net.size(); ++i) f.add(Cap(net.point(i), radius), w);
  }
  return f;
}

CapFunction saturating_function(const NetFamily& nets, int n) {
  const CapFunction raw = saturating_raw(nets, n);
  return raw.scaled(1.0 / l1_norm(raw).value);
}

double CoveringSequence::omega_at(int n) const {
  if (omega.empty()) return static_cast<double>(n);
  if (n < 1 || static_cast<std::size_t>(n) > omega.size()) {
    throw std::out_of_range("CoveringSequence: omega_" + std::to_string(n) + " not given");
  }
  return omega[static_cast<std::size_t>(n - 1)];
}

std::vector<std::vector<Cap>> CoveringSequence::buckets() const {
  std::vector<std::vector<Cap>> out;
  for (const auto& cover : coverings) {
    for (const Cap& c : cover) {
      // 2^-(n+1) < radius <= 2^-n
      const int n = static_cast<int>(std::floor(-std::log2(c.radius)));
      int b = n;
      if (std::ldexp(1.0, -b) < c.radius) --b;
      if (std::ldexp(1.0, -(b + 1)) >= c.radius) ++b;
      if (b < 1) throw std::invalid_argument("CoveringSequence: cap radius must be <= 1/2");
      if (out.size() < static_cast<std::size_t>(b)) out.resize(static_cast<std::size_t>(b));
      out[static_cast<std::size_t>(b - 1)].push_back(c);
    }
  }
  return out;
}

std::vector<std::string> CoveringSequence::check(const GaugeSpec& gauge) const {
  std::vector<std::string> failures;
  for (std::size_t j = 0; j < coverings.size(); ++j) {
    const double bound = std::ldexp(1.0, -static_cast<int>(j + 1));
    double sum = 0.0;
    for (const Cap& c : coverings[j]) {
      if (c.dim() != d) failures.push_back("covering " + std::to_string(j + 1) + ": dimension mismatch");
      if (c.radius > bound) failures.push_back("covering " + std::to_string(j + 1) + ": cap radius exceeds 2^-j");
      sum += gauge.phi(c.radius);
    }
    if (sum > bound * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "covering " << j + 1 << ": sum of phi(|kappa|) = " << sum << " exceeds 2^-j";
      failures.push_back(msg.str());
    }
  }
  return failures;
}

CoveringSequence point_covering(const SpherePoint& y, int levels) {
  CoveringSequence cov;
  cov.d = y.dim();
  for (int j = 1; j <= levels; ++j) cov.coverings.push_back({Cap(y, std::ldexp(1.0, -j))});
  return cov;
}

DivergenceBuild divergence_function(const CoveringSequence& cov, const GaugeSpec& gauge) {
  DivergenceBuild out;
  out.f = CapFunction(cov.d);
  const auto buckets = cov.buckets();
  const int n_max = static_cast<int>(buckets.size());

  // tau(s) = O(s^-d phi(s)) on the dyadic grid of the buckets.
  const int grid = std::max(n_max, 1);
  double first = 0.0;
  for (int n = 1; n <= grid; ++n) {
    const double s = std::ldexp(1.0, -n);
    const double v = gauge.tau(s) * std::pow(s, cov.d) / gauge.phi(s);
    if (n == 1) first = v;
    out.gauge_ratio = std::max(out.gauge_ratio, v / first);
  }
  if (!(out.gauge_ratio <= 1e6)) {
    std::ostringstream msg;
    msg << "divergence_function: tau(s) s^d / phi(s) grows by " << out.gauge_ratio
        << " on the dyadic grid; the gauge is incompatible";
    throw std::invalid_argument(msg.str());
  }

  std::vector<double> nonzero;
  for (int n = 1; n <= n_max; ++n) {
    const auto& bucket = buckets[static_cast<std::size_t>(n - 1)];
    double phi_sum = 0.0;
    for (const Cap& c : bucket) phi_sum += gauge.phi(c.radius);
    const double omega = cov.omega_at(n);
    out.series_terms.push_back(omega * phi_sum);
    if (!bucket.empty()) nonzero.push_back(omega * phi_sum);

    const double s = std::ldexp(1.0, -n);
    const double w = omega * gauge.tau(s);
    const double radius = std::min(2.0, 2.0 * s);
    for (const Cap& c : bucket) out.f.add(Cap(c.center, radius), w);
    if (!bucket.empty()) out.f.truncation = n;
  }
  // Ratio test on the tail of the L1 bound.
  constexpr std::size_t kTail = 3;
  if (nonzero.size() > kTail) {
    double log_ratio = 0.0;
    for (std::size_t i = nonzero.size() - kTail; i < nonzero.size(); ++i) {
      log_ratio += std::log(nonzero[i] / nonzero[i - 1]);
    }
    if (!(log_ratio / kTail < 0.0)) {
      throw std::invalid_argument("divergence_function: omega-weighted series does not decay (ratio test >= 1)");
    }
  }
  return out;
}

CapFunction residual_witness(const CapFunction& g, const NetFamily& nets, int n) {
  if (g.d != nets.d) throw std::invalid_argument("residual_witness: dimension mismatch");
  CapFunction h = g + saturating_function(nets, n).scaled(1.0 / n);
  h.truncation = std::max(g.truncation, n);
  return h;
}

CapFunction mixture_witness(const NetFamily& nets, int truncation) {
  if (truncation < 2) throw std::invalid_argument("mixture_witness: truncation must be >= 2");
  CapFunction w(nets.d);
  for (int k = 1; (1 << k) <= truncation; ++k) {
    w = w + saturating_function(nets, 1 << k).scaled(std::ldexp(1.0, -k));
  }
  w.truncation = truncation;
  return w;
}

}  // namespace capfield
