#ifndef CAPFIELD_SPHERE_HPP
#define CAPFIELD_SPHERE_HPP

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <boost/math/special_functions/beta.hpp>

namespace capfield {

/// A unit vector in R^(d+1). The dimension d of the sphere is size() - 1.
class SpherePoint {
 public:
  static constexpr double kNormTolerance = 1e-12;

  SpherePoint() = default;
  explicit SpherePoint(Eigen::VectorXd coords);

  /// Normalizes `v`; throws if `v` is (numerically) zero.
  static SpherePoint normalized(const Eigen::VectorXd& v);
  /// (0, ..., 0, 1) on S^d.
  static SpherePoint north_pole(int d);
  /// Point at polar angle `theta` from the north pole of S^1: (sin t, cos t).
  static SpherePoint on_circle(double theta);

  int dim() const { return static_cast<int>(coords_.size()) - 1; }
  const Eigen::VectorXd& coords() const { return coords_; }
  double operator[](Eigen::Index i) const { return coords_[i]; }
  SpherePoint antipode() const;

  friend bool operator==(const SpherePoint& a, const SpherePoint& b) {
    return a.coords_ == b.coords_;
  }

 private:
  Eigen::VectorXd coords_;
};

/// Euclidean (chordal) distance ||p - q||, in [0, 2].
double chordal_distance(const SpherePoint& p, const SpherePoint& q);

/// Open spherical cap kappa(center, radius) = { xi : ||xi - center|| < radius }.
struct Cap {
  SpherePoint center;
  double radius = 0.0;

  Cap() = default;
  Cap(SpherePoint c, double r);

  int dim() const { return center.dim(); }
  bool contains(const SpherePoint& xi) const { return chordal_distance(xi, center) < radius; }
};

/// S(center, inner, outer) = { xi : inner <= ||xi - center|| < outer }.
struct Slice {
  SpherePoint center;
  double inner = 0.0;
  double outer = 0.0;

  Slice(SpherePoint c, double inner_radius, double outer_radius);

  bool contains(const SpherePoint& xi) const {
    const double t = chordal_distance(xi, center);
    return inner <= t && t < outer;
  }
};

enum class GaugeKind { Power, PowerLog };

/// Gauges tau(s) = s^-beta, phi(s) = s^gamma, psi(s) = s^psi_gamma. The
/// power-log kind multiplies tau and phi by (1 + log(1/s)).
struct GaugeSpec {
  GaugeKind kind = GaugeKind::Power;
  double beta = 0.0;
  double gamma = 0.0;
  double psi_gamma = 0.0;

  double tau(double s) const;
  double phi(double s) const;
  double psi(double s) const;
  double psi_inverse(double v) const;
  /// Throws std::invalid_argument unless beta > 0, gamma > 0, psi_gamma > 0.
  void validate() const;
};

/// Normalized surface measure of a cap of chordal radius delta on S^d:
/// sigma(kappa(y, delta)) = I_{delta^2 / 4}(d/2, d/2).
template <typename Scalar>
Scalar cap_measure(int d, Scalar delta) {
  if (d < 1) throw std::invalid_argument("cap_measure: d must be >= 1");
  if (!(delta > Scalar(0)) || delta > Scalar(2)) {
    throw std::invalid_argument("cap_measure: delta must lie in (0, 2]");
  }
  if (delta == Scalar(2)) return Scalar(1);
  const Scalar half_d = Scalar(d) / Scalar(2);
  return boost::math::ibeta(half_d, half_d, delta * delta / Scalar(4));
}

/// Radius r -> psi^{-1}(phi(r)) with the same center, clamped to 2.
Cap dilate_cap(const Cap& cap, const GaugeSpec& gauge);

/// Vitali-type greedy selection: caps sorted by decreasing radius, a cap is
/// kept when its center is at distance >= sum of radii from every kept cap.
/// Every input cap is then contained in the 5-dilate of a kept one.
std::vector<Cap> five_r_disjointify(const std::vector<Cap>& caps);

/// True when kappa(inner) is contained in kappa(outer.center, factor * outer.radius)
/// by the triangle inequality.
bool within_dilate(const Cap& inner, const Cap& outer, double factor);

/// Uniform point on S^d.
SpherePoint random_sphere_point(int d, std::mt19937_64& rng);

/// Uniform point inside an open cap (polar angle drawn through the inverse
/// incomplete beta function, direction uniform on the tangent sphere).
SpherePoint random_point_in_cap(const Cap& cap, std::mt19937_64& rng);

/// Point at polar angle theta from `center` in the tangent direction `tangent`
/// (tangent must be a unit vector orthogonal to center).
SpherePoint geodesic_point(const SpherePoint& center, const Eigen::VectorXd& tangent, double theta);

/// Polar angle of a cap of chordal radius delta: 2 asin(delta / 2).
inline double chord_to_angle(double delta) { return 2.0 * std::asin(std::min(delta, 2.0) / 2.0); }
inline double angle_to_chord(double theta) { return 2.0 * std::sin(theta / 2.0); }

}  // namespace capfield

#endif  // CAPFIELD_SPHERE_HPP
