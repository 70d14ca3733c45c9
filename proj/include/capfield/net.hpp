#ifndef CAPFIELD_NET_HPP
#define CAPFIELD_NET_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "capfield/sphere.hpp"

namespace capfield {

/// Thrown when an operation's estimated point count exceeds the guardrail.
class ResourceLimitError : public std::runtime_error {
 public:
  ResourceLimitError(const std::string& what, double estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

/// Uniform-grid hash over R^(d+1), d + 1 <= 8. Buckets are keyed by a hash of the integer
/// cell coordinates, so colliding cells only cost extra distance checks.
class PointIndex {
 public:
  PointIndex(int ambient_dim, double cell_size);

  int insert(const Eigen::Ref<const Eigen::VectorXd>& p);
  std::size_t size() const { return coords_.size() / static_cast<std::size_t>(ambient_); }
  Eigen::Map<const Eigen::VectorXd> point(int id) const {
    return Eigen::Map<const Eigen::VectorXd>(coords_.data() + static_cast<std::size_t>(id) * ambient_, ambient_);
  }

  /// True if some indexed point is at distance < radius from q (radius <= cell size).
  bool any_within(const Eigen::Ref<const Eigen::VectorXd>& q, double radius) const;
  /// Ids of all indexed points at distance < radius from q.
  std::vector<int> within(const Eigen::Ref<const Eigen::VectorXd>& q, double radius) const;
  /// Nearest indexed point (id, distance); id = -1 when empty.
  std::pair<int, double> nearest(const Eigen::Ref<const Eigen::VectorXd>& q) const;
  /// Minimum distance over pairs in adjacent cells (+inf if none).
  double min_adjacent_distance() const;

 private:
  static constexpr int kMaxAmbient = 8;
  using Cell = std::array<std::int64_t, kMaxAmbient>;

  Cell cell_of(const Eigen::Ref<const Eigen::VectorXd>& q) const;
  std::uint64_t key(const Cell& cell) const;
  template <typename Fn>
  void for_each_in_shell(const Cell& base, int k, Fn&& fn) const;

  int ambient_;
  double cell_;
  std::vector<double> coords_;
  std::unordered_map<std::uint64_t, std::vector<int>> buckets_;
};

/// Level-n net: a 2^-n separated point set whose open 2^-n caps cover S^d.
/// Points are the columns of `points`; for nested families the first
/// card(R_{n-1}) columns are exactly R_{n-1}.
struct Net {
  int d = 1;
  int level = 1;
  Eigen::MatrixXd points;

  std::size_t size() const { return static_cast<std::size_t>(points.cols()); }
  SpherePoint point(std::size_t i) const { return SpherePoint(points.col(static_cast<Eigen::Index>(i))); }
  double separation() const { return std::ldexp(1.0, -level); }
};

struct NetBuildOptions {
  /// Candidate spacing is (net separation) / oversampling.
  int oversampling = 16;
  /// Candidate passes for d >= 2 before the covering repair.
  int passes = 2;
  double max_points = 1e7;
  bool force = false;
};

/// Nested nets R_1 ⊆ ... ⊆ R_{n_max}.
struct NetFamily {
  int d = 1;
  std::uint64_t seed = 0;
  /// Candidate points per unit of net separation (recorded maximality resolution).
  double candidate_spacing_ratio = 0.0;
  std::vector<Net> nets;

  int max_level() const { return nets.empty() ? 0 : nets.back().level; }
  const Net& level(int n) const;
  /// First level at which net point i of the finest net appears.
  std::vector<int> birth_levels() const;
};

/// Packing upper bound 1 / sigma(kappa(., 2^-(n+1))) on card(R_n).
double estimated_net_cardinality(int d, int n);

/// Greedy nets over a quasi-random candidate stream (rotated by `seed`).
/// For d = 1 the remaining arcs are closed by midpoint insertion, which makes
/// each level exactly maximal, and for d = 2 uncovered Voronoi vertices are
/// inserted until none remain. For d >= 3 maximality holds up to the
/// density of the candidate and repair streams.
NetFamily build_nets(int d, int n_max, std::uint64_t seed, const NetBuildOptions& options = {});

struct NetReport {
  int d = 1;
  int level = 1;
  std::size_t cardinality = 0;
  double min_separation = 0.0;
  bool separation_ok = false;
  double covering_gap = 0.0;
  bool covering_ok = false;
  std::size_t samples = 0;
  double cardinality_ratio = 0.0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

/// Exact minimum pairwise distance of the net points.
double min_pairwise_distance(const Net& net);

/// Exact separation, sampled covering gap, and card / 2^(nd).
NetReport verify_net(const Net& net, std::size_t samples, std::uint64_t seed);

/// Checks nesting R_n ⊆ R_{n+1} as column prefixes; returns failure messages.
std::vector<std::string> verify_nesting(const NetFamily& family);

}  // namespace capfield

#endif  // CAPFIELD_NET_HPP
