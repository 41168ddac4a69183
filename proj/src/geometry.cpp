#include "hypwave/geometry.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <sstream>

#include "hypwave/errors.hpp"

namespace hypwave {
namespace {

std::string describe(Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << z.real() << ", " << z.imag() << ")";
  return os.str();
}

DiskPoint checked_point(Complex z, const char* what) {
  if (!DiskPoint::is_valid(z)) {
    throw GeometryError(std::string(what) + ": point " + describe(z) +
                        " is on or outside the ideal boundary");
  }
  return DiskPoint(z);
}

}  // namespace

double wrap_angle(double a) {
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

DiskPoint::DiskPoint(double u, double v) : DiskPoint(Complex(u, v)) {}

DiskPoint::DiskPoint(Complex z) : z_(z) {
  if (!is_valid(z)) {
    throw GeometryError("disk point " + describe(z) + " is on or outside the ideal boundary");
  }
}

MobiusMap MobiusMap::rotation(double angle) {
  return {std::polar(1.0, 0.5 * angle), Complex(0.0, 0.0)};
}

MobiusMap MobiusMap::translation_from_origin(const DiskPoint& z) {
  const double s = std::sqrt(1.0 - z.norm_sq());
  return {Complex(1.0 / s, 0.0), z.z() / s};
}

MobiusMap MobiusMap::translation_to_origin(const DiskPoint& z) {
  return translation_from_origin(z).inverse();
}

MobiusMap MobiusMap::normalized(Complex a, Complex b) {
  const double d = std::norm(a) - std::norm(b);
  if (!(d > 0.0)) throw InvariantViolation("Mobius coefficients with non-positive determinant");
  const double s = std::sqrt(d);
  return {a / s, b / s};
}

DiskPoint MobiusMap::apply(const DiskPoint& z) const {
  if (!has_unit_det()) {
    std::ostringstream os;
    os << "Mobius map determinant " << det() << " is not 1";
    throw InvariantViolation(os.str());
  }
  return checked_point(apply_raw(z.z()), "mobius_apply");
}

double MobiusMap::direction_shift(const DiskPoint& z) const {
  return wrap_angle(-2.0 * std::arg(std::conj(b_) * z.z() + std::conj(a_)));
}

double MobiusMap::displacement() const { return 2.0 * std::atanh(std::abs(b_) / std::abs(a_)); }

MobiusMap operator*(const MobiusMap& f, const MobiusMap& g) {
  return {f.a_ * g.a_ + f.b_ * std::conj(g.b_), f.a_ * g.b_ + f.b_ * std::conj(g.a_)};
}

PhasePoint::PhasePoint(DiskPoint base, Vec2 dir) : base_(base) {
  if (std::abs(dir.norm() - 1.0) > 1e-10) {
    throw InvariantViolation("phase point direction is not a unit vector");
  }
  angle_ = dir.angle();
}

PhasePoint apply(const MobiusMap& m, const PhasePoint& p) {
  return {m.apply(p.base()), p.angle() + m.direction_shift(p.base())};
}

Vec2 FrameChart::e1() const {
  const double s = 0.5 * (1.0 - origin_.norm_sq());
  return s * Vec2::from_angle(rotation_);
}

Vec2 FrameChart::e2() const {
  const double s = 0.5 * (1.0 - origin_.norm_sq());
  return s * Vec2::from_angle(rotation_ + 0.5 * kPi);
}

double metric_inner(const DiskPoint& z, Vec2 a, Vec2 b) {
  const double lambda = z.conformal_factor();
  return lambda * lambda * a.dot(b);
}

double hyp_distance(const DiskPoint& z, const DiskPoint& w) {
  const double num = std::abs(z.z() - w.z());
  const double den = std::abs(1.0 - std::conj(w.z()) * z.z());
  return 2.0 * std::atanh(std::min(num / den, 1.0));
}

DiskPoint mobius_apply(const MobiusMap& m, const DiskPoint& z) { return m.apply(z); }

PhasePoint geodesic_flow(const PhasePoint& rho, double t) {
  if (t == 0.0) return rho;
  const MobiusMap to_base = MobiusMap::translation_from_origin(rho.base());
  const Complex w = std::polar(std::tanh(0.5 * t), rho.angle());
  const DiskPoint end = checked_point(to_base.apply_raw(w), "geodesic_flow");
  // Along the diameter the velocity direction is rho.angle for either sign
  // of t; the derivative of to_base at w rotates it into place.
  const double shift = wrap_angle(-2.0 * std::arg(std::conj(to_base.b()) * w + std::conj(to_base.a())));
  return {end, rho.angle() + shift};
}

DiskPoint exp_frame(const FrameChart& chart, Vec2 y, double scale) {
  const double len = y.norm();
  if (len == 0.0) return chart.origin();
  const PhasePoint start(chart.origin(), chart.rotation() + y.angle());
  return geodesic_flow(start, scale * len).base();
}

double phase_distance(const PhasePoint& p, const PhasePoint& q) {
  const MobiusMap to_p = MobiusMap::translation_to_origin(p.base());
  const Complex q0 = to_p.apply_raw(q.base().z());
  const DiskPoint q_img(q0);
  const double q_angle = q.angle() + to_p.direction_shift(q.base());
  const MobiusMap slide = MobiusMap::translation_to_origin(q_img);
  const double transported = q_angle + slide.direction_shift(q_img);
  const double d_base = 2.0 * std::atanh(std::abs(q0));
  const double d_angle = wrap_angle(p.angle() - transported);
  return std::hypot(d_base, d_angle);
}

// --- GeodesicSegment -------------------------------------------------------

GeodesicSegment::GeodesicSegment(const PhasePoint& start, double length)
    : start_(start), length_(length) {
  normalizer_ = MobiusMap::rotation(-start.angle()) * MobiusMap::translation_to_origin(start.base());
  denormalizer_ = normalizer_.inverse();
}

DiskPoint GeodesicSegment::point_at(double s) const {
  return checked_point(denormalizer_.apply_raw(Complex(std::tanh(0.5 * s), 0.0)),
                       "geodesic segment");
}

PhasePoint GeodesicSegment::phase_at(double s) const {
  const Complex w(std::tanh(0.5 * s), 0.0);
  const DiskPoint p = checked_point(denormalizer_.apply_raw(w), "geodesic segment");
  const double shift = -2.0 * std::arg(std::conj(denormalizer_.b()) * w + std::conj(denormalizer_.a()));
  return {p, shift};
}

double GeodesicSegment::Profile::distance_at(double s) const {
  // sinh^2(d/2) = sinh^2(a/2) cosh(D) + sinh^2(D/2), accurate for small d.
  const double delta = s - foot;
  const double sa = std::sinh(0.5 * offset);
  const double sd = std::sinh(0.5 * delta);
  return 2.0 * std::asinh(std::sqrt(sa * sa * std::cosh(delta) + sd * sd));
}

GeodesicSegment::Profile GeodesicSegment::profile(const DiskPoint& w) const {
  const Complex q = normalizer_.apply_raw(w.z());
  const double r2 = std::norm(q);
  Profile out{};
  out.offset = std::asinh(2.0 * std::abs(q.imag()) / (1.0 - r2));
  const double re = q.real();
  if (std::abs(re) < 1e-300) {
    out.foot = 0.0;
  } else {
    // The perpendicular through q is the circle orthogonal to the unit circle
    // centred at c on the real axis; its foot x solves x^2 - 2cx + 1 = 0.
    const double c = (1.0 + r2) / (2.0 * re);
    const double root = std::sqrt(std::max(c * c - 1.0, 0.0));
    const double foot_x = 1.0 / (c + std::copysign(root, c));
    out.foot = 2.0 * std::atanh(foot_x);
  }
  return out;
}

double GeodesicSegment::distance_to(const DiskPoint& w, double lo, double hi) const {
  const Profile p = profile(w);
  const double s = std::clamp(p.foot, lo, hi);
  return p.distance_at(s);
}

// --- Canonical coordinates and the ODE route ---------------------------------

CanonicalState to_canonical(const PhasePoint& p) {
  const double lambda = p.base().conformal_factor();
  return {p.base().u(), p.base().v(), lambda * std::cos(p.angle()), lambda * std::sin(p.angle())};
}

PhasePoint from_canonical(const CanonicalState& s, double* speed) {
  const DiskPoint base = checked_point(Complex(s.u, s.v), "from_canonical");
  if (speed != nullptr) *speed = std::hypot(s.xi_u, s.xi_v) / base.conformal_factor();
  return {base, std::atan2(s.xi_v, s.xi_u)};
}

CanonicalState integrate_hamiltonian(const CanonicalState& start, double t,
                                     const HamiltonianOptions& options) {
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 4>;

  if (t < 0.0) {
    // H is even in xi, so the backward flow is the conjugate of the forward
    // flow by the momentum reversal.
    CanonicalState rev{start.u, start.v, -start.xi_u, -start.xi_v};
    CanonicalState out = integrate_hamiltonian(rev, -t, options);
    return {out.u, out.v, -out.xi_u, -out.xi_v};
  }

  auto system = [&options](const State& y, State& dy, double) {
    const double r2 = y[0] * y[0] + y[1] * y[1];
    const double g = 0.25 * (1.0 - r2) * (1.0 - r2);  // inverse metric factor
    const double xi2 = y[2] * y[2] + y[3] * y[3];
    dy[0] = g * y[2];
    dy[1] = g * y[3];
    dy[2] = 0.5 * xi2 * (1.0 - r2) * y[0];
    dy[3] = 0.5 * xi2 * (1.0 - r2) * y[1];
    if (options.coupling != 0.0 && options.grad_potential) {
      if (r2 >= 1.0 - kBoundaryMargin) throw GeometryError("Hamiltonian trajectory left the disk");
      const Vec2 grad = options.grad_potential(DiskPoint(y[0], y[1]));
      dy[2] -= options.coupling * grad.x;
      dy[3] -= options.coupling * grad.y;
    }
  };

  auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<State>>(options.tolerance,
                                                                      options.tolerance);
  State y{start.u, start.v, start.xi_u, start.xi_v};
  double time = 0.0;
  double dt = std::min(options.initial_step, t);
  int guard = 0;
  while (time < t) {
    if (time + dt > t) dt = t - time;
    const auto result = stepper.try_step(system, y, time, dt);
    if (result == ode::fail) {
      if (dt < options.min_step) {
        std::ostringstream os;
        os << "step size " << dt << " fell below " << options.min_step << " at t = " << time;
        throw StepUnderflowError(os.str());
      }
    }
    if (++guard > 50'000'000) throw StepUnderflowError("Hamiltonian integration did not finish");
  }
  return {y[0], y[1], y[2], y[3]};
}

PhasePoint geodesic_flow_ode(const PhasePoint& rho, double t, double tolerance) {
  HamiltonianOptions opts;
  opts.tolerance = tolerance;
  return from_canonical(integrate_hamiltonian(to_canonical(rho), t, opts));
}

}  // namespace hypwave
