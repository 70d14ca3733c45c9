#include "capfield/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "capfield/circle_evaluator.hpp"
#include "capfield/parallel.hpp"

namespace capfield {

namespace {

double dyadic_r(int n) { return 1.0 - std::ldexp(1.0, -n); }

void check_range(const CapFunction& f, int n_min, int n_max) {
  if (n_min < 1 || n_max < n_min) throw std::invalid_argument("profile: need 1 <= n_min <= n_max");
  if (n_max > 52) throw std::invalid_argument("profile: n_max beyond double resolution of r_n");
  if (f.truncation > 0 && n_max > f.truncation) {
    std::ostringstream msg;
    msg << "profile: n_max = " << n_max << " exceeds the function's truncation level " << f.truncation;
    throw std::invalid_argument(msg.str());
  }
}

/// P[f](r y) summed term by term; converged is false if any cap integral
/// missed its tolerance (the value is still the best estimate).
std::pair<double, bool> poisson_sum(const CapFunction& f, const SpherePoint& y, double r,
                                    const QuadratureConfig& config) {
  double total = 0.0;
  bool converged = true;
  for (const CapTerm& t : f.terms) {
    if (t.weight == 0.0) continue;
    const QuadratureResult q =
        cap_region_integral(f.d, r, std::min(2.0, chordal_distance(y, t.cap.center)), t.cap.radius, 2.0, config);
    converged = converged && q.converged;
    total += t.weight * q.value;
  }
  for (const Atom& a : f.atoms) total += a.mass * kernel_value(f.d, r, chordal_distance(y, a.point));
  return {total, converged};
}

BetaEstimate tail_estimate(const double* values, const int* ns, std::size_t count, int d) {
  BetaEstimate out;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const double v = std::abs(values[i]);
    if (!(v > 0.0) || !std::isfinite(v)) continue;
    const double e = std::log2(v) / ns[i];
    if (e > best) {
      best = e;
      out.n_at_max = ns[i];
    }
  }
  out.raw = std::isfinite(best) ? best : 0.0;
  out.value = std::clamp(out.raw, 0.0, static_cast<double>(d));
  return out;
}

}  // namespace

RadialProfile radial_profile(const CapFunction& f, const SpherePoint& y, int n_min, int n_max,
                             const QuadratureConfig& config) {
  if (y.dim() != f.d) throw std::invalid_argument("radial_profile: dimension mismatch");
  check_range(f, n_min, n_max);
  RadialProfile p;
  p.y = y;
  for (int n = n_min; n <= n_max; ++n) {
    ProfileRow row;
    row.n = n;
    row.r = dyadic_r(n);
    const auto [value, converged] = poisson_sum(f, y, row.r, config);
    row.value = value;
    row.ok = converged;
    if (!converged) row.note = "quadrature tolerance not reached";
    p.rows.push_back(row);
  }
  return p;
}

BetaEstimate beta_hat_detail(const RadialProfile& profile, int n_tail) {
  if (profile.rows.empty()) throw std::invalid_argument("beta_hat: empty profile");
  if (n_tail < 1 || static_cast<std::size_t>(n_tail) > profile.rows.size()) {
    throw std::invalid_argument("beta_hat: profile has fewer rows than the tail window");
  }
  std::vector<double> values;
  std::vector<int> ns;
  for (std::size_t i = profile.rows.size() - static_cast<std::size_t>(n_tail); i < profile.rows.size(); ++i) {
    values.push_back(profile.rows[i].value);
    ns.push_back(profile.rows[i].n);
  }
  return tail_estimate(values.data(), ns.data(), values.size(), profile.y.dim());
}

double beta_hat(const RadialProfile& profile, int n_tail) { return beta_hat_detail(profile, n_tail).value; }

RadialProfile ProfileTable::profile(const Eigen::MatrixXd& probes, Eigen::Index i) const {
  RadialProfile p;
  p.y = SpherePoint(probes.col(i));
  for (int n = n_min; n <= n_max; ++n) p.rows.push_back({n, dyadic_r(n), values(n - n_min, i), true, {}});
  return p;
}

BetaEstimate ProfileTable::beta(Eigen::Index i, int n_end, int n_tail, int d) const {
  const int hi = std::min(n_end, n_max);
  const int lo = std::max(n_min, n_end - n_tail + 1);
  if (hi < lo) throw std::invalid_argument("ProfileTable::beta: tail window outside the table");
  double values[64];
  int ns[64];
  std::size_t count = 0;
  for (int n = lo; n <= hi && count < 64; ++n, ++count) {
    values[count] = this->values(n - n_min, i);
    ns[count] = n;
  }
  return tail_estimate(values, ns, count, d);
}

ProfileTable profile_table(const CapFunction& f, const Eigen::MatrixXd& probes, int n_min, int n_max,
                           const EvalOptions& options) {
  check_range(f, n_min, n_max);
  if (probes.rows() != f.d + 1) throw std::invalid_argument("profile_table: probe dimension mismatch");
  ProfileTable t;
  t.n_min = n_min;
  t.n_max = n_max;
  t.values.resize(n_max - n_min + 1, probes.cols());

  const bool fft_ok = f.d == 1 && f.atoms.empty();
  if (options.backend == EvalBackend::Fft && !fft_ok) {
    throw std::invalid_argument("profile_table: the FFT backend needs an atom-free function on S^1");
  }
  const int jobs = resolve_jobs(options.jobs);
  if (fft_ok && options.backend != EvalBackend::Quadrature) {
    const CircleEvaluator ev(f, options.fft_log2_cells);
    std::vector<double> angles(static_cast<std::size_t>(probes.cols()));
    for (Eigen::Index i = 0; i < probes.cols(); ++i) {
      angles[static_cast<std::size_t>(i)] = circle_angle(SpherePoint(probes.col(i)));
    }
    for (int n = n_min; n <= n_max; ++n) {
      const std::vector<double> grid = ev.grid_values(dyadic_r(n));
      parallel_for(angles.size(), jobs, [&](std::size_t i) {
        t.values(n - n_min, static_cast<Eigen::Index>(i)) = CircleEvaluator::interpolate(grid, angles[i]);
      });
    }
    return t;
  }

  const CapFunction merged = f.merged();
  std::vector<std::string> notes(static_cast<std::size_t>(probes.cols()));
  parallel_for(static_cast<std::size_t>(probes.cols()), jobs, [&](std::size_t i) {
    const auto col = static_cast<Eigen::Index>(i);
    const SpherePoint y(probes.col(col));
    for (int n = n_min; n <= n_max; ++n) {
      const auto [value, converged] = poisson_sum(merged, y, dyadic_r(n), options.quadrature);
      t.values(n - n_min, col) = value;
      if (!converged) notes[i] += (notes[i].empty() ? "" : ",") + std::to_string(n);
    }
  });
  for (std::size_t i = 0; i < notes.size(); ++i) {
    if (!notes[i].empty()) t.failures.push_back("probe " + std::to_string(i) + ": rows n=" + notes[i]);
  }
  return t;
}

std::vector<Eigen::Index> level_set(const ProfileTable& table, int d, double beta, double tol, int n_end,
                                    int n_tail) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < table.values.cols(); ++i) {
    if (std::abs(table.beta(i, n_end, n_tail, d).value - beta) <= tol) out.push_back(i);
  }
  return out;
}

std::vector<SpherePoint> level_set(const CapFunction& f, double beta, double tol, const Net& probe_net, int n_end,
                                   int n_tail, const EvalOptions& options) {
  if (n_tail < 1) throw std::invalid_argument("level_set: n_tail must be >= 1");
  const ProfileTable table = profile_table(f, probe_net.points, std::max(1, n_end - n_tail + 1), n_end, options);
  std::vector<SpherePoint> out;
  for (Eigen::Index i : level_set(table, f.d, beta, tol, n_end, n_tail)) out.emplace_back(probe_net.points.col(i));
  return out;
}

BoxDimension fit_box_dimension(std::vector<int> levels, std::vector<std::size_t> counts) {
  if (levels.size() != counts.size()) throw std::invalid_argument("fit_box_dimension: size mismatch");
  BoxDimension out;
  out.levels = std::move(levels);
  out.counts = std::move(counts);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < out.levels.size(); ++i) {
    if (out.counts[i] == 0) {
      out.empty = true;
      continue;
    }
    xs.push_back(out.levels[i]);
    ys.push_back(std::log2(static_cast<double>(out.counts[i])));
  }
  if (xs.size() < 2) return out;
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / n;
    my += ys[i] / n;
  }
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  out.dim = sxy / sxx;
  const double residual = syy - out.dim * sxy;
  out.r2 = syy > 0.0 ? std::clamp(1.0 - residual / syy, 0.0, 1.0) : 1.0;
  return out;
}

namespace {

PointIndex index_net(const Net& net) {
  PointIndex index(net.d + 1, net.separation());
  for (Eigen::Index i = 0; i < net.points.cols(); ++i) index.insert(net.points.col(i));
  return index;
}

}  // namespace

std::size_t count_caps_meeting(const Net& net, const Eigen::MatrixXd& points) {
  if (points.cols() == 0) return 0;
  if (points.rows() != net.d + 1) throw std::invalid_argument("count_caps_meeting: dimension mismatch");
  const PointIndex index = index_net(net);
  std::vector<char> hit(net.size(), 0);
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    for (int id : index.within(points.col(j), net.separation())) hit[static_cast<std::size_t>(id)] = 1;
  }
  return static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
}

std::size_t count_caps_meeting(const Net& net, const std::vector<Cap>& caps) {
  if (caps.empty()) return 0;
  const PointIndex index = index_net(net);
  std::vector<char> hit(net.size(), 0);
  const double s = net.separation();
  for (const Cap& c : caps) {
    if (c.dim() != net.d) throw std::invalid_argument("count_caps_meeting: dimension mismatch");
    // Open caps meet iff the angle between centres is below the sum of the
    // cap angles; the chordal sum of radii gives a superset of candidates.
    const double reach = chord_to_angle(s) + chord_to_angle(c.radius);
    auto meets = [&](Eigen::Index i) {
      const double chord = (net.points.col(i) - c.center.coords()).norm();
      return reach > std::numbers::pi || chord_to_angle(chord) < reach;
    };
    if (c.radius > 64.0 * s) {
      for (Eigen::Index i = 0; i < net.points.cols(); ++i) {
        if (meets(i)) hit[static_cast<std::size_t>(i)] = 1;
      }
      continue;
    }
    for (int id : index.within(c.center.coords(), s + c.radius)) {
      if (meets(id)) hit[static_cast<std::size_t>(id)] = 1;
    }
  }
  return static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
}

BoxDimension box_dimension(const Eigen::MatrixXd& points, int n_lo, int n_hi, const NetFamily& nets) {
  if (n_lo < 1 || n_hi <= n_lo) throw std::invalid_argument("box_dimension: need 1 <= n_lo < n_hi");
  std::vector<int> levels;
  std::vector<std::size_t> counts;
  for (int m = n_lo; m <= n_hi; ++m) {
    levels.push_back(m);
    counts.push_back(count_caps_meeting(nets.level(m), points));
  }
  return fit_box_dimension(std::move(levels), std::move(counts));
}

BoxDimension box_dimension(const std::function<std::vector<Cap>(int)>& caps_at_level, int n_lo, int n_hi,
                           const NetFamily& nets) {
  if (n_lo < 1 || n_hi <= n_lo) throw std::invalid_argument("box_dimension: need 1 <= n_lo < n_hi");
  std::vector<int> levels;
  std::vector<std::size_t> counts;
  for (int m = n_lo; m <= n_hi; ++m) {
    levels.push_back(m);
    counts.push_back(count_caps_meeting(nets.level(m), caps_at_level(m)));
  }
  return fit_box_dimension(std::move(levels), std::move(counts));
}

BoxDimension box_dimension(const std::function<bool(Eigen::Index, int)>& member, const Net& probe_net, int n_lo,
                           int n_hi, const NetFamily& nets) {
  if (n_lo < 1 || n_hi <= n_lo) throw std::invalid_argument("box_dimension: need 1 <= n_lo < n_hi");
  if (n_hi > probe_net.level) throw std::invalid_argument("box_dimension: probe net coarser than the finest level");
  std::vector<int> levels;
  std::vector<std::size_t> counts;
  for (int m = n_lo; m <= n_hi; ++m) {
    std::vector<Eigen::Index> ids;
    for (Eigen::Index i = 0; i < probe_net.points.cols(); ++i) {
      if (member(i, m)) ids.push_back(i);
    }
    Eigen::MatrixXd pts(probe_net.points.rows(), static_cast<Eigen::Index>(ids.size()));
    for (std::size_t k = 0; k < ids.size(); ++k) pts.col(static_cast<Eigen::Index>(k)) = probe_net.points.col(ids[k]);
    levels.push_back(m);
    counts.push_back(count_caps_meeting(nets.level(m), pts));
  }
  return fit_box_dimension(std::move(levels), std::move(counts));
}

SpectrumEstimate spectrum(const CapFunction& f, const std::vector<double>& betas, const NetFamily& nets,
                          const SpectrumConfig& config) {
  if (nets.d != f.d) throw std::invalid_argument("spectrum: dimension mismatch");
  if (!(config.tol > 0.0)) throw std::invalid_argument("spectrum: tol must be positive");
  if (config.n_tail < 1) throw std::invalid_argument("spectrum: n_tail must be >= 1");
  if (config.n_hi > config.probe_level) throw std::invalid_argument("spectrum: n_hi exceeds the probe level");
  const int d = f.d;
  for (double b : betas) {
    if (!(b >= 0.0) || b > d) throw std::invalid_argument("spectrum: beta must lie in [0, d]");
  }
  const Net& probes = nets.level(config.probe_level);
  const int n_min = std::max(1, config.n_lo - config.n_tail + 1);
  const ProfileTable table = profile_table(f, probes.points, n_min, config.n_hi, config.eval);

  // Tail estimates per box level, shared by all betas.
  const int levels = config.n_hi - config.n_lo + 1;
  Eigen::MatrixXd est(levels, probes.points.cols());
  for (int m = config.n_lo; m <= config.n_hi; ++m) {
    for (Eigen::Index i = 0; i < probes.points.cols(); ++i) {
      est(m - config.n_lo, i) = table.beta(i, m, config.n_tail, d).value;
    }
  }

  SpectrumEstimate out;
  out.d = d;
  for (double beta : betas) {
    auto member = [&](Eigen::Index i, int m) { return std::abs(est(m - config.n_lo, i) - beta) <= config.tol; };
    const BoxDimension box = box_dimension(member, probes, config.n_lo, config.n_hi, nets);
    SpectrumPoint p;
    p.beta = beta;
    p.dim = std::clamp(box.dim, 0.0, static_cast<double>(d));
    p.r2 = box.r2;
    p.n_lo = config.n_lo;
    p.n_hi = config.n_hi;
    p.empty = box.empty;
    p.counts = box.counts;
    out.points.push_back(std::move(p));
  }
  return out;
}

}  // namespace capfield
