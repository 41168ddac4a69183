#pragma once

// Exact hyperbolic geometry of the Poincare disk (curvature -1).
//
// Tangent and cotangent vectors at a point z are expressed in the conformal
// orthonormal frame E1 = (1-|z|^2)/2 d/du, E2 = (1-|z|^2)/2 d/dv. In that
// frame a unit (co)vector is just an angle, and since the metric is
// conformal the Euclidean direction of a tangent vector coincides with its
// frame direction.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace hypwave {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Points closer to the ideal boundary than this (in |z|^2) are rejected.
inline constexpr double kBoundaryMargin = 1e-12;
/// Allowed drift of |a|^2 - |b|^2 away from 1.
inline constexpr double kDeterminantTolerance = 1e-10;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::hypot(x, y); }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double angle() const { return std::atan2(y, x); }
  static Vec2 from_angle(double a) { return {std::cos(a), std::sin(a)}; }

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
};

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

class DiskPoint {
 public:
  DiskPoint() = default;
  DiskPoint(double u, double v);
  explicit DiskPoint(Complex z);

  Complex z() const { return z_; }
  double u() const { return z_.real(); }
  double v() const { return z_.imag(); }
  double norm_sq() const { return std::norm(z_); }
  /// Conformal factor 2 / (1 - |z|^2) of the metric at this point.
  double conformal_factor() const { return 2.0 / (1.0 - norm_sq()); }

  static bool is_valid(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()) &&
                                           std::norm(z) < 1.0 - kBoundaryMargin; }

 private:
  Complex z_{0.0, 0.0};
};

/// Orientation-preserving disk isometry z -> (a z + b) / (conj(b) z + conj(a)).
class MobiusMap {
 public:
  MobiusMap() = default;
  MobiusMap(Complex a, Complex b) : a_(a), b_(b) {}

  static MobiusMap identity() { return {}; }
  /// Rotation about the origin by `angle`.
  static MobiusMap rotation(double angle);
  /// Hyperbolic translation along the diameter through z taking 0 to z.
  static MobiusMap translation_from_origin(const DiskPoint& z);
  /// Inverse of translation_from_origin: takes z to 0.
  static MobiusMap translation_to_origin(const DiskPoint& z);
  /// Rescales (a, b) to unit determinant. Throws if det <= 0.
  static MobiusMap normalized(Complex a, Complex b);

  Complex a() const { return a_; }
  Complex b() const { return b_; }
  double det() const { return std::norm(a_) - std::norm(b_); }
  bool has_unit_det() const { return std::abs(det() - 1.0) < kDeterminantTolerance; }

  /// Throws InvariantViolation if the determinant drifted from 1 and
  /// GeometryError if the image reaches the ideal boundary.
  DiskPoint apply(const DiskPoint& z) const;
  /// Unchecked action on a complex number.
  Complex apply_raw(Complex z) const { return (a_ * z + b_) / (std::conj(b_) * z + std::conj(a_)); }
  /// Rotation angle of tangent directions at z, i.e. arg of the derivative.
  double direction_shift(const DiskPoint& z) const;
  /// Hyperbolic distance from the origin to the image of the origin.
  double displacement() const;

  MobiusMap inverse() const { return {std::conj(a_), -b_}; }
  friend MobiusMap operator*(const MobiusMap& f, const MobiusMap& g);

 private:
  Complex a_{1.0, 0.0};
  Complex b_{0.0, 0.0};
};

/// Unit cotangent vector over a disk point; `angle` is its direction in the
/// conformal frame at `base`.
class PhasePoint {
 public:
  PhasePoint() = default;
  PhasePoint(DiskPoint base, double angle) : base_(base), angle_(wrap_angle(angle)) {}
  /// Validates |dir| = 1 within 1e-10.
  PhasePoint(DiskPoint base, Vec2 dir);

  const DiskPoint& base() const { return base_; }
  double angle() const { return angle_; }
  Vec2 dir() const { return Vec2::from_angle(angle_); }
  PhasePoint reversed() const { return {base_, angle_ + kPi}; }

 private:
  DiskPoint base_;
  double angle_ = 0.0;
};

/// Image of a phase point under an isometry.
PhasePoint apply(const MobiusMap& m, const PhasePoint& p);

/// Orthonormal frame at `origin`; e1 points along `rotation` (frame angle),
/// e2 along rotation + pi/2.
class FrameChart {
 public:
  FrameChart() = default;
  explicit FrameChart(DiskPoint origin, double rotation = 0.0)
      : origin_(origin), rotation_(wrap_angle(rotation)) {}

  const DiskPoint& origin() const { return origin_; }
  double rotation() const { return rotation_; }
  /// Frame vectors as Euclidean tangent vectors (length (1-|z|^2)/2).
  Vec2 e1() const;
  Vec2 e2() const;
  /// Frame components of a unit (co)vector with the given conformal angle.
  Vec2 components(double angle) const { return Vec2::from_angle(angle - rotation_); }

 private:
  DiskPoint origin_;
  double rotation_ = 0.0;
};

/// Riemannian inner product of two Euclidean tangent vectors at z.
double metric_inner(const DiskPoint& z, Vec2 a, Vec2 b);

double hyp_distance(const DiskPoint& z, const DiskPoint& w);

DiskPoint mobius_apply(const MobiusMap& m, const DiskPoint& z);

/// Unperturbed geodesic flow, closed form: conjugates the phase point to the
/// origin where geodesics are diameters.
PhasePoint geodesic_flow(const PhasePoint& rho, double t);

/// exp of the frame vector scale * (y1 e1 + y2 e2).
DiskPoint exp_frame(const FrameChart& chart, Vec2 y, double scale);

/// Phase-space distance: sqrt(d_base^2 + d_angle^2) with the direction at `q`
/// parallel-transported to the base of `p` along the connecting geodesic.
double phase_distance(const PhasePoint& p, const PhasePoint& q);

/// Unit-speed geodesic segment parametrised by s in [0, length], with the
/// closed-form distance profile to a point: cosh d(gamma(s), w) =
/// cosh(a) cosh(s - s_star).
class GeodesicSegment {
 public:
  GeodesicSegment(const PhasePoint& start, double length);

  const PhasePoint& start() const { return start_; }
  double length() const { return length_; }
  DiskPoint point_at(double s) const;
  PhasePoint phase_at(double s) const;

  struct Profile {
    double offset;  // distance a from w to the full geodesic
    double foot;    // parameter s_star of the foot of the perpendicular
    double distance_at(double s) const;
  };
  Profile profile(const DiskPoint& w) const;
  /// Distance from w to the segment restricted to [lo, hi].
  double distance_to(const DiskPoint& w, double lo, double hi) const;
  double distance_to(const DiskPoint& w) const { return distance_to(w, 0.0, length_); }

 private:
  PhasePoint start_;
  double length_;
  MobiusMap normalizer_;    // start -> 0, direction -> +real axis
  MobiusMap denormalizer_;  // inverse of normalizer_
};

/// Euclidean coordinate phase-space state used by the ODE route:
/// position (u, v) and covector (xi_u, xi_v).
struct CanonicalState {
  double u, v, xi_u, xi_v;
};
CanonicalState to_canonical(const PhasePoint& p);
/// Projects back; the covector is normalised to a direction (its hyperbolic
/// length is returned separately through `speed` when requested).
PhasePoint from_canonical(const CanonicalState& s, double* speed = nullptr);

/// Adaptive Dormand-Prince integrator for H = |xi|_g^2 / 2 + coupling * V(x).
/// `grad_potential` returns the Euclidean gradient of V in disk coordinates.
struct HamiltonianOptions {
  double tolerance = 1e-11;
  double min_step = 1e-9;
  double initial_step = 1e-2;
  double coupling = 0.0;
  std::function<Vec2(const DiskPoint&)> grad_potential;
};
CanonicalState integrate_hamiltonian(const CanonicalState& start, double t,
                                     const HamiltonianOptions& options);

/// ODE route for the unperturbed flow; used as a cross-check.
PhasePoint geodesic_flow_ode(const PhasePoint& rho, double t, double tolerance = 1e-11);

}  // namespace hypwave
