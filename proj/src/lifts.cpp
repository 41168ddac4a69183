#include "hypwave/lifts.hpp"

#include <sstream>

#include "hypwave/errors.hpp"

namespace hypwave {
namespace {

void check_base_point(const DiskPoint& x, double t) {
  if (!(t >= 0.0)) throw PreconditionError("lift horizon must be non-negative");
  if (!FuchsianGroup::bolza().in_domain(x, 1e-9)) {
    std::ostringstream os;
    os.precision(17);
    os << "base point (" << x.u() << ", " << x.v() << ") is not in the fundamental octagon";
    throw DomainError(os.str());
  }
}

}  // namespace

double lift_search_radius(const DiskPoint& x, double t, const LagrangianState& state) {
  return hyp_distance(DiskPoint(), state.amplitude_center()) + state.amplitude_radius() + t +
         hyp_distance(DiskPoint(), x) + 1e-9;
}

LiftSet enumerate_lifts(const DiskPoint& x, double t, const LagrangianState& state) {
  check_base_point(x, t);
  LiftSet out{x, t, {}};
  const auto ball = FuchsianGroup::bolza().ball(lift_search_radius(x, t, state));
  const double reach = t + state.amplitude_radius();
  for (const auto& g : *ball) {
    const DiskPoint lift = g.map.apply(x);
    if (hyp_distance(lift, state.amplitude_center()) >= reach) continue;
    const DiskPoint land = state.landing(lift, t);
    if (hyp_distance(land, state.amplitude_center()) < state.amplitude_radius()) {
      out.elements.push_back({g.map, g.word, lift, land});
    }
  }
  return out;
}

LiftSet lifts_in_window(const DiskPoint& x, double t_lo, double t_hi, const LagrangianState& state) {
  check_base_point(x, t_lo);
  if (t_hi < t_lo) throw PreconditionError("empty time window");
  LiftSet out{x, t_hi, {}};
  const auto ball = FuchsianGroup::bolza().ball(lift_search_radius(x, t_hi, state));
  const double reach = t_hi + state.amplitude_radius();
  for (const auto& g : *ball) {
    const DiskPoint lift = g.map.apply(x);
    if (hyp_distance(lift, state.amplitude_center()) >= reach) continue;
    const GeodesicSegment ray(state.characteristic(lift).reversed(), t_hi);
    if (ray.distance_to(state.amplitude_center(), t_lo, t_hi) < state.amplitude_radius()) {
      out.elements.push_back({g.map, g.word, lift, state.landing(lift, t_hi)});
    }
  }
  return out;
}

}  // namespace hypwave
