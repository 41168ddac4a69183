#include "hypwave/lagrangian.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <sstream>

#include "hypwave/errors.hpp"
#include "hypwave/surface.hpp"

namespace hypwave {

LagrangianState::LagrangianState(const LagrangianParams& params) : params_(params) {
  const double inradius = FuchsianGroup::bolza().config().inradius;
  if (params_.amplitude_radius == 0.0) params_.amplitude_radius = 0.25 * inradius;
  if (!(params_.amplitude_radius > 0.0)) throw ValidationError("amplitude radius must be positive");
  if (!(params_.amplitude_norm >= 0.0)) throw ValidationError("amplitude norm must be non-negative");
  const double reach = hyp_distance(DiskPoint(), params_.amplitude_center) + params_.amplitude_radius;
  if (!(reach < inradius * (1.0 - 1e-12))) {
    std::ostringstream os;
    os << "amplitude disk reaches distance " << reach << " from the origin; it must stay inside "
       << inradius << " to lie on a single sheet";
    throw ValidationError(os.str());
  }
  boundary_ = std::polar(1.0, params_.boundary_angle);

  // ||a0||^2 = 2 pi int_0^R chi(r/R)^2 sinh(r) dr, split at the plateau edge.
  const double R = params_.amplitude_radius;
  auto integrand = [&](double r) {
    const double c = params_.profile(r / R);
    return c * c * std::sinh(r);
  };
  using GL = boost::math::quadrature::gauss<double, 30>;
  const double edge = params_.profile.flat_until() * R;
  double mass = 0.0;
  if (edge > 0.0) mass += GL::integrate(integrand, 0.0, edge);
  const int panels = 8;
  for (int i = 0; i < panels; ++i) {
    mass += GL::integrate(integrand, edge + (R - edge) * i / panels, edge + (R - edge) * (i + 1) / panels);
  }
  mass *= kTwoPi;
  peak_ = params_.amplitude_norm / std::sqrt(mass);
}

double LagrangianState::busemann(const DiskPoint& x) const {
  return std::log(std::norm(boundary_ - x.z()) / (1.0 - x.norm_sq()));
}

Vec2 LagrangianState::gradient(const DiskPoint& x) const {
  const Complex d = x.z() - boundary_;
  const Complex g = 2.0 * d / std::norm(d) + 2.0 * x.z() / (1.0 - x.norm_sq());
  return {g.real(), g.imag()};
}

double LagrangianState::gradient_angle(const DiskPoint& x) const { return gradient(x).angle(); }

DiskPoint LagrangianState::landing(const DiskPoint& x, double t) const {
  return geodesic_flow(characteristic(x), -t).base();
}

double LagrangianState::amplitude_a0(const DiskPoint& x) const {
  const double d = hyp_distance(x, params_.amplitude_center);
  return peak_ * params_.profile(d / params_.amplitude_radius);
}

}  // namespace hypwave
