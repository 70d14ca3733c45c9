#ifndef CAPFIELD_CONSTRUCTIONS_HPP
#define CAPFIELD_CONSTRUCTIONS_HPP

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "capfield/net.hpp"
#include "capfield/poisson.hpp"

namespace capfield {

/// N_{n,alpha} = floor(n / alpha) + 1.
int limsup_net_level(int n, double alpha);

/// One layer D_{n,alpha}: caps of radius 2^-n at the points of R_N.
struct LimsupLevel {
  int d = 1;
  double alpha = 2.0;
  int n = 1;
  int N = 1;
  std::vector<Cap> caps;

  double radius() const { return std::ldexp(1.0, -n); }
  /// card(R_N) sigma(kappa(., 2^-n)), an upper bound on sigma(D_{n,alpha}).
  double measure_bound() const;
};

struct LimsupFamily {
  int d = 1;
  double alpha = 2.0;
  std::vector<LimsupLevel> levels;
};

LimsupLevel limsup_cover_sets(const NetFamily& nets, double alpha, int n);
LimsupFamily limsup_family(const NetFamily& nets, double alpha, int n_lo, int n_hi);

/// Membership in a union of caps, backed by a grid index of the centers.
class CapUnion {
 public:
  explicit CapUnion(const std::vector<Cap>& caps);
  bool contains(const SpherePoint& y) const;
  std::size_t size() const { return caps_.size(); }
  const std::vector<Cap>& caps() const { return caps_; }

 private:
  std::vector<Cap> caps_;
  double max_radius_ = 0.0;
  std::unique_ptr<PointIndex> index_;
};

/// Picks a cap uniformly, then a point uniformly inside it.
SpherePoint sample_in_union(const std::vector<Cap>& caps, std::mt19937_64& rng);

/// Weight 2^((n-N)d) / (n+1) carried by the level-N caps of the raw function.
double saturating_weight(int d, int n, int N);

/// Raw multi-scale sum (1/(n+1)) Σ_{N=1}^{n+1} Σ_{x∈R_N} 2^((n-N)d) 1_{kappa(x, 2·2^-n)},
/// one term per (N, x) in level order. Needs nets up to level n+1.
CapFunction saturating_raw(const NetFamily& nets, int n);

/// The raw sum normalized to unit L1 norm.
CapFunction saturating_function(const NetFamily& nets, int n);

/// Countable coverings R_1, R_2, ... of a set E with omega_n weights.
struct CoveringSequence {
  int d = 1;
  std::vector<std::vector<Cap>> coverings;  // coverings[j-1] = R_j
  /// omega[n-1] = omega_n; empty means omega_n = n.
  std::vector<double> omega;

  double omega_at(int n) const;
  /// Caps of all coverings with 2^-(n+1) < radius <= 2^-n, for n = 1..max_bucket().
  std::vector<std::vector<Cap>> buckets() const;
  /// Failures of |kappa| <= 2^-j and Σ_{kappa in R_j} phi(|kappa|) <= 2^-j.
  std::vector<std::string> check(const GaugeSpec& gauge) const;
};

/// Single-point covering sequence R_j = {kappa(y, 2^-j)}, j = 1..levels.
CoveringSequence point_covering(const SpherePoint& y, int levels);

struct DivergenceBuild {
  CapFunction f;
  /// Per-bucket terms omega_n Σ_{kappa in C_n} phi(|kappa|) of the L1 bound.
  std::vector<double> series_terms;
  /// max / first of tau(s) s^d / phi(s) over the dyadic grid.
  double gauge_ratio = 0.0;
};

/// Σ_n omega_n tau(2^-n) Σ_{kappa in C_n} 1_{kappa(center, 2·2^-n)}.
/// Throws std::invalid_argument when tau(s) s^d / phi(s) grows by more than
/// 1e6 on the grid or when the tail of the series terms does not decay.
DivergenceBuild divergence_function(const CoveringSequence& cov, const GaugeSpec& gauge);

/// g + f_n / n.
CapFunction residual_witness(const CapFunction& g, const NetFamily& nets, int n);

/// Σ_k 2^-k f_{2^k} over 2^k <= truncation.
CapFunction mixture_witness(const NetFamily& nets, int truncation);

}  // namespace capfield

#endif  // CAPFIELD_CONSTRUCTIONS_HPP
