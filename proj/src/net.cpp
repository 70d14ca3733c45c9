#include "capfield/net.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Geometry>
#include <Eigen/QR>

namespace capfield {

// ---------------------------------------------------------------------------
// PointIndex

PointIndex::PointIndex(int ambient_dim, double cell_size) : ambient_(ambient_dim), cell_(cell_size) {
  if (ambient_ < 2 || ambient_ > kMaxAmbient) {
    throw std::invalid_argument("PointIndex: ambient dimension must lie in [2, " + std::to_string(kMaxAmbient) + "]");
  }
  if (!(cell_ > 0.0)) throw std::invalid_argument("PointIndex: cell size must be positive");
}

PointIndex::Cell PointIndex::cell_of(const Eigen::Ref<const Eigen::VectorXd>& q) const {
  Cell c{};
  for (int i = 0; i < ambient_; ++i) c[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor(q[i] / cell_));
  return c;
}

std::uint64_t PointIndex::key(const Cell& cell) const {
  std::uint64_t h = 0x9E3779B97F4A7C15ULL;
  for (int i = 0; i < ambient_; ++i) {
    h ^= static_cast<std::uint64_t>(cell[static_cast<std::size_t>(i)]) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h *= 0xBF58476D1CE4E5B9ULL;
  }
  return h;
}

template <typename Fn>
void PointIndex::for_each_in_shell(const Cell& base, int k, Fn&& fn) const {
  // Cells whose Chebyshev offset from `base` is exactly k.
  const auto dims = static_cast<std::size_t>(ambient_);
  Cell offset{};
  for (std::size_t i = 0; i < dims; ++i) offset[i] = -k;
  Cell cell{};
  for (;;) {
    bool on_shell = k == 0;
    for (std::size_t i = 0; i < dims && !on_shell; ++i) on_shell = std::abs(offset[i]) == k;
    if (on_shell) {
      for (std::size_t i = 0; i < dims; ++i) cell[i] = base[i] + offset[i];
      auto it = buckets_.find(key(cell));
      if (it != buckets_.end()) fn(it->second);
    }
    std::size_t i = 0;
    while (i < dims && offset[i] == k) offset[i++] = -k;
    if (i == dims) break;
    ++offset[i];
  }
}

int PointIndex::insert(const Eigen::Ref<const Eigen::VectorXd>& p) {
  const int id = static_cast<int>(size());
  coords_.insert(coords_.end(), p.data(), p.data() + ambient_);
  buckets_[key(cell_of(p))].push_back(id);
  return id;
}

bool PointIndex::any_within(const Eigen::Ref<const Eigen::VectorXd>& q, double radius) const {
  const auto base = cell_of(q);
  const int reach = static_cast<int>(std::ceil(radius / cell_));
  bool found = false;
  for (int k = 0; k <= reach && !found; ++k) {
    for_each_in_shell(base, k, [&](const std::vector<int>& ids) {
      for (int id : ids) {
        if (found) return;
        if ((point(id) - q).norm() < radius) found = true;
      }
    });
  }
  return found;
}

std::vector<int> PointIndex::within(const Eigen::Ref<const Eigen::VectorXd>& q, double radius) const {
  const auto base = cell_of(q);
  const int reach = static_cast<int>(std::ceil(radius / cell_));
  std::vector<int> out;
  for (int k = 0; k <= reach; ++k) {
    for_each_in_shell(base, k, [&](const std::vector<int>& ids) {
      for (int id : ids) {
        if ((point(id) - q).norm() < radius) out.push_back(id);
      }
    });
  }
  return out;
}

std::pair<int, double> PointIndex::nearest(const Eigen::Ref<const Eigen::VectorXd>& q) const {
  if (size() == 0) return {-1, std::numeric_limits<double>::infinity()};
  const auto base = cell_of(q);
  int best_id = -1;
  double best = std::numeric_limits<double>::infinity();
  // Points in shell k+1 or beyond are at distance >= k * cell.
  const int max_shell = static_cast<int>(std::ceil(4.0 / cell_)) + 2;
  for (int k = 0; k <= max_shell; ++k) {
    if (best_id >= 0 && best <= (k - 1) * cell_) break;
    for_each_in_shell(base, k, [&](const std::vector<int>& ids) {
      for (int id : ids) {
        const double dist = (point(id) - q).norm();
        if (dist < best) {
          best = dist;
          best_id = id;
        }
      }
    });
  }
  return {best_id, best};
}

double PointIndex::min_adjacent_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size(); ++i) {
    const int id = static_cast<int>(i);
    const auto p = point(id);
    const auto base = cell_of(p);
    for (int k = 0; k <= 1; ++k) {
      for_each_in_shell(base, k, [&](const std::vector<int>& ids) {
        for (int other : ids) {
          if (other <= id) continue;
          best = std::min(best, (point(other) - p).norm());
        }
      });
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Net family

const Net& NetFamily::level(int n) const {
  for (const Net& net : nets) {
    if (net.level == n) return net;
  }
  throw std::out_of_range("NetFamily: missing net level " + std::to_string(n));
}

std::vector<int> NetFamily::birth_levels() const {
  if (nets.empty()) return {};
  std::vector<int> birth(nets.back().size(), nets.back().level);
  for (auto it = nets.rbegin(); it != nets.rend(); ++it) {
    for (std::size_t i = 0; i < it->size(); ++i) birth[i] = it->level;
  }
  return birth;
}

double estimated_net_cardinality(int d, int n) {
  return 1.0 / cap_measure(d, std::ldexp(1.0, -(n + 1)));
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double chord_of_angle(double a) { return 2.0 * std::sin(0.5 * a); }

/// Angles (measured from the north pole, counter to the x axis) of the nested
/// circle nets. Each level walks the candidate stream phase + k * step through
/// every arc between existing points, then closes arcs whose midpoint is still
/// uncovered.
std::vector<std::vector<double>> circle_levels(int n_max, double phase, int oversampling) {
  constexpr double kMargin = 1.0 + 1e-12;
  std::vector<std::vector<double>> levels;
  std::vector<double> order{0.0};  // insertion order, relative to phase, in [0, 2pi)
  for (int n = 1; n <= n_max; ++n) {
    const double sep = std::ldexp(1.0, -n);
    const double min_chord = sep * kMargin;
    const double sep_angle = 2.0 * std::asin(0.5 * sep);
    const auto m = static_cast<std::int64_t>(std::ceil(kTwoPi * oversampling / sep_angle));
    const double step = kTwoPi / static_cast<double>(m);

    std::vector<double> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> added;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const double a = sorted[i];
      const double b = (i + 1 < sorted.size()) ? sorted[i + 1] : sorted[0] + kTwoPi;
      double last = a;
      for (auto k = static_cast<std::int64_t>(std::floor(a / step)) + 1;; ++k) {
        const double c = static_cast<double>(k) * step;
        if (c >= b) break;
        if (chord_of_angle(c - last) >= min_chord && chord_of_angle(b - c) >= min_chord) {
          added.push_back(std::fmod(c, kTwoPi));
          last = c;
        }
      }
    }
    // An arc of length g leaves its midpoint uncovered iff 2 sin(g/4) >= sep,
    // and then the midpoint itself is admissible.
    std::vector<double> all = sorted;
    all.insert(all.end(), added.begin(), added.end());
    for (bool inserted = true; inserted;) {
      inserted = false;
      std::sort(all.begin(), all.end());
      const std::size_t count = all.size();
      for (std::size_t i = 0; i < count; ++i) {
        const double a = all[i];
        const double b = (i + 1 < count) ? all[i + 1] : all[0] + kTwoPi;
        if (chord_of_angle(0.5 * (b - a)) >= min_chord) {
          const double mid = std::fmod(0.5 * (a + b), kTwoPi);
          added.push_back(mid);
          all.push_back(mid);
          inserted = true;
        }
      }
    }
    order.insert(order.end(), added.begin(), added.end());
    std::vector<double> absolute(order.size());
    std::transform(order.begin(), order.end(), absolute.begin(), [&](double c) { return c + phase; });
    levels.push_back(std::move(absolute));
  }
  return levels;
}

Eigen::MatrixXd random_rotation(int ambient, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(ambient, ambient);
  for (int i = 0; i < ambient; ++i) {
    for (int j = 0; j < ambient; ++j) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < ambient; ++i) {
    if (r(i, i) < 0) q.col(i) *= -1.0;
  }
  return q;
}

/// Candidate stream for d >= 2: a rotated spherical Fibonacci lattice for d = 2,
/// seeded uniform points otherwise (or when signed_d < 0).
Eigen::MatrixXd candidate_stream(int signed_d, std::size_t count, std::mt19937_64& rng) {
  const bool uniform = signed_d < 0;
  const int d = std::abs(signed_d);
  const int ambient = d + 1;
  Eigen::MatrixXd pts(ambient, static_cast<Eigen::Index>(count));
  if (d == 2 && !uniform) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    const Eigen::MatrixXd rot = random_rotation(ambient, rng);
    for (std::size_t i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(count);
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * static_cast<double>(i);
      Eigen::Vector3d v(rho * std::cos(phi), rho * std::sin(phi), z);
      pts.col(static_cast<Eigen::Index>(i)) = (rot * v).normalized();
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      pts.col(static_cast<Eigen::Index>(i)) = random_sphere_point(d, rng).coords();
    }
  }
  return pts;
}

void check_budget(int d, int n_max, const NetBuildOptions& options) {
  const double estimate = estimated_net_cardinality(d, n_max);
  if (estimate > options.max_points && !options.force) {
    std::ostringstream msg;
    msg << "build_nets: estimated cardinality " << std::setprecision(3) << estimate << " (d=" << d
        << ", n=" << n_max << ", ~2^" << n_max * d << " points) exceeds the limit " << options.max_points;
    throw ResourceLimitError(msg.str(), estimate);
  }
}

/// On S^2 the point farthest from a finite set is a vertex of its spherical
/// Voronoi diagram, i.e. the circumcenter of three mutually close points.
/// Inserting every circumcenter that is still uncovered, until none remain,
/// makes the net exactly maximal.
template <typename Insert>
void close_circumcenters(const PointIndex& index, double sep, Insert&& try_insert) {
  // Delaunay neighbours of a point lie within twice the covering radius.
  const double reach = 2.5 * sep;
  bool changed = true;
  std::size_t start = 0;
  while (changed) {
    changed = false;
    const std::size_t end = index.size();
    for (std::size_t i = 0; i < end; ++i) {
      const Eigen::Vector3d p = index.point(static_cast<int>(i));
      const std::vector<int> nb = index.within(p, reach);
      for (std::size_t a = 0; a < nb.size(); ++a) {
        for (std::size_t b = a + 1; b < nb.size(); ++b) {
          // After the first sweep only triangles touching new points matter.
          if (i < start && static_cast<std::size_t>(nb[a]) < start && static_cast<std::size_t>(nb[b]) < start) continue;
          const Eigen::Vector3d u = index.point(nb[a]);
          const Eigen::Vector3d v = index.point(nb[b]);
          Eigen::Vector3d n = (u - p).cross(v - p);
          const double len = n.norm();
          if (!(len > 1e-14)) continue;
          n /= len;
          if (n.dot(p) < 0.0) n = -n;
          if ((n - p).norm() < sep) continue;
          if (try_insert(n)) changed = true;
        }
      }
    }
    start = end;
  }
}

}  // namespace

NetFamily build_nets(int d, int n_max, std::uint64_t seed, const NetBuildOptions& options) {
  if (d < 1) throw std::invalid_argument("build_nets: d must be >= 1");
  if (n_max < 1) throw std::invalid_argument("build_nets: n_max must be >= 1");
  if (options.oversampling < 1) throw std::invalid_argument("build_nets: oversampling must be >= 1");
  check_budget(d, n_max, options);

  std::mt19937_64 rng(seed);
  NetFamily family;
  family.d = d;
  family.seed = seed;
  family.candidate_spacing_ratio = 1.0 / options.oversampling;

  if (d == 1) {
    std::uniform_real_distribution<double> phase_dist(0.0, kTwoPi);
    const double phase = phase_dist(rng);
    const auto levels = circle_levels(n_max, phase, options.oversampling);
    for (int n = 1; n <= n_max; ++n) {
      const auto& angles = levels[static_cast<std::size_t>(n - 1)];
      Net net;
      net.d = 1;
      net.level = n;
      net.points.resize(2, static_cast<Eigen::Index>(angles.size()));
      for (std::size_t i = 0; i < angles.size(); ++i) {
        net.points(0, static_cast<Eigen::Index>(i)) = std::sin(angles[i]);
        net.points(1, static_cast<Eigen::Index>(i)) = std::cos(angles[i]);
      }
      family.nets.push_back(std::move(net));
    }
    return family;
  }

  const int ambient = d + 1;
  std::vector<double> flat;  // accumulated points, column-major
  for (int n = 1; n <= n_max; ++n) {
    const double sep = std::ldexp(1.0, -n);
    PointIndex index(ambient, sep);
    for (std::size_t i = 0; i < flat.size() / static_cast<std::size_t>(ambient); ++i) {
      index.insert(Eigen::Map<const Eigen::VectorXd>(flat.data() + i * static_cast<std::size_t>(ambient), ambient));
    }
    const double per_point = std::pow(static_cast<double>(options.oversampling) / 4.0, d);
    const auto count = static_cast<std::size_t>(std::ceil(per_point * estimated_net_cardinality(d, n)));
    auto try_insert = [&](const Eigen::Ref<const Eigen::VectorXd>& c) {
      if (index.any_within(c, sep)) return false;
      index.insert(c);
      flat.insert(flat.end(), c.data(), c.data() + ambient);
      return true;
    };
    for (int pass = 0; pass < std::max(1, options.passes); ++pass) {
      const Eigen::MatrixXd candidates = candidate_stream(d, count, rng);
      for (Eigen::Index j = 0; j < candidates.cols(); ++j) try_insert(candidates.col(j));
    }
    if (d == 2) {
      close_circumcenters(index, sep, try_insert);
    } else {
      // Uniform passes pick up points left uncovered between candidates.
      constexpr int kRepairPasses = 4;
      for (int pass = 0; pass < kRepairPasses; ++pass) {
        const Eigen::MatrixXd candidates = candidate_stream(-d, count, rng);
        std::size_t inserted = 0;
        for (Eigen::Index j = 0; j < candidates.cols(); ++j) inserted += try_insert(candidates.col(j)) ? 1 : 0;
        if (inserted == 0) break;
      }
    }
    Net net;
    net.d = d;
    net.level = n;
    net.points = Eigen::Map<const Eigen::MatrixXd>(flat.data(), ambient,
                                                   static_cast<Eigen::Index>(flat.size() / static_cast<std::size_t>(ambient)));
    family.nets.push_back(std::move(net));
  }
  return family;
}

double min_pairwise_distance(const Net& net) {
  const std::size_t count = net.size();
  if (count < 2) return std::numeric_limits<double>::infinity();
  const double cell = 2.0 * net.separation();
  PointIndex index(net.d + 1, cell);
  for (std::size_t i = 0; i < count; ++i) index.insert(net.points.col(static_cast<Eigen::Index>(i)));
  const double adjacent = index.min_adjacent_distance();
  // Any pair closer than one cell shares or neighbours a cell.
  if (adjacent < cell) return adjacent;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      best = std::min(best, (net.points.col(static_cast<Eigen::Index>(i)) -
                             net.points.col(static_cast<Eigen::Index>(j))).norm());
    }
  }
  return best;
}

NetReport verify_net(const Net& net, std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("verify_net: samples must be >= 1");
  NetReport report;
  report.d = net.d;
  report.level = net.level;
  report.cardinality = net.size();
  report.samples = samples;
  const double sep = net.separation();

  for (std::size_t i = 0; i < net.size(); ++i) {
    const double norm = net.points.col(static_cast<Eigen::Index>(i)).norm();
    if (!(std::abs(norm - 1.0) <= SpherePoint::kNormTolerance)) {
      report.failures.push_back("unit_norm: point " + std::to_string(i) + " has norm " + std::to_string(norm));
      break;
    }
  }

  report.min_separation = min_pairwise_distance(net);
  report.separation_ok = report.min_separation >= sep;
  if (!report.separation_ok) {
    report.failures.push_back("separation: min pairwise distance " + std::to_string(report.min_separation) +
                              " < 2^-" + std::to_string(net.level));
  }

  PointIndex index(net.d + 1, sep);
  for (std::size_t i = 0; i < net.size(); ++i) index.insert(net.points.col(static_cast<Eigen::Index>(i)));
  std::mt19937_64 rng(seed);
  double gap = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const SpherePoint q = random_sphere_point(net.d, rng);
    gap = std::max(gap, index.nearest(q.coords()).second);
  }
  report.covering_gap = gap;
  report.covering_ok = gap < sep;
  if (!report.covering_ok) {
    report.failures.push_back("covering: sampled gap " + std::to_string(gap) + " >= 2^-" + std::to_string(net.level));
  }
  report.cardinality_ratio = static_cast<double>(net.size()) * std::ldexp(1.0, -net.level * net.d);
  return report;
}

std::vector<std::string> verify_nesting(const NetFamily& family) {
  std::vector<std::string> failures;
  for (std::size_t i = 0; i + 1 < family.nets.size(); ++i) {
    const Net& coarse = family.nets[i];
    const Net& fine = family.nets[i + 1];
    if (fine.level != coarse.level + 1) {
      failures.push_back("nesting: levels " + std::to_string(coarse.level) + " and " + std::to_string(fine.level) +
                         " are not consecutive");
      continue;
    }
    if (fine.size() < coarse.size() ||
        fine.points.leftCols(coarse.points.cols()) != coarse.points) {
      failures.push_back("nesting: R_" + std::to_string(coarse.level) + " is not a prefix of R_" +
                         std::to_string(fine.level));
    }
  }
  return failures;
}

}  // namespace capfield
