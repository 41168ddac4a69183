#include "hypwave/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hypwave/errors.hpp"

namespace hypwave {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

void require_in_domain(const PropagationJob& job, const DiskPoint& x) {
  if (!in_propagated_domain(job, x)) {
    std::ostringstream os;
    os.precision(17);
    os << "point (" << x.u() << ", " << x.v() << ") is not reached by the state at t = " << job.t();
    throw DomainError(os.str());
  }
}

}  // namespace

PropagationJob::PropagationJob(const JobParams& params, std::shared_ptr<const RandomPotential> potential,
                               std::shared_ptr<const LagrangianState> state)
    : params_(params), potential_(std::move(potential)), state_(std::move(state)) {
  require(potential_ != nullptr && state_ != nullptr, "job needs a potential and a state");
  require(params_.h > 0.0 && params_.h <= 1.0, "h must lie in (0, 1]");
  if (!(params_.beta > 0.0 && params_.beta < 0.5)) throw AdmissibilityError("beta must lie in (0, 1/2)");
  require(params_.delta >= 0.0, "delta must be non-negative");
  require(params_.eps0 > 0.0, "eps0 must be positive");
  require(params_.t >= 0.0, "t must be non-negative");
  require(params_.horizon_const > 0.0, "horizon_const must be positive");
  require(params_.quadrature_tolerance > 0.0, "quadrature tolerance must be positive");
  require(std::abs(potential_->h() - params_.h) <= 1e-12 * params_.h &&
              std::abs(potential_->beta() - params_.beta) <= 1e-12,
          "potential was built for different (h, beta)");

  if (params_.t > horizon() * (1.0 + 1e-12) + 1e-12) {
    std::ostringstream os;
    os << "t = " << params_.t << " exceeds the horizon " << horizon() << " = " << params_.horizon_const
       << " log(1/h)";
    throw HorizonTooLargeError(os.str());
  }

  const auto c = parameter_conditions(params_.h, params_.beta, params_.delta, params_.eps0);
  const bool base = potential_->kase() == PotentialCase::base;
  if (!c.delta_small || !c.delta_large || (base && !c.base_condition)) {
    std::ostringstream os;
    os << "parameters (h, beta, delta, eps0) = (" << params_.h << ", " << params_.beta << ", "
       << params_.delta << ", " << params_.eps0 << ") violate:";
    if (!c.delta_small) os << " delta h^(-2 beta - eps0) <= 1;";
    if (!c.delta_large) os << " delta^2 h^(beta - 2) >= h^(-eps0);";
    if (base && !c.base_condition) os << " delta h^(beta - 1) <= h^eps0;";
    throw AdmissibilityError(os.str());
  }
}

double PropagationJob::horizon() const { return params_.horizon_const * std::log(1.0 / params_.h); }

PropagationJob PropagationJob::with_time(double t) const {
  JobParams p = params_;
  p.t = t;
  return PropagationJob(p, potential_, state_);
}

PhasePoint characteristic(const PropagationJob& job, const DiskPoint& x) {
  return job.state().characteristic(x);
}

bool in_propagated_domain(const PropagationJob& job, const DiskPoint& x) {
  const auto& s = job.state();
  return hyp_distance(s.landing(x, job.t()), s.amplitude_center()) < s.amplitude_radius();
}

double phi_unperturbed(const PropagationJob& job, const DiskPoint& x) {
  require_in_domain(job, x);
  return job.state().busemann(x) - 0.5 * job.t();
}

Footprint phase_footprint(const PropagationJob& job, const DiskPoint& x) {
  const double per_unit = job.params().quadrature_steps_per_unit_time;
  return job.potential().footprint(characteristic(job, x), job.t(), true,
                                   job.params().quadrature_tolerance, per_unit);
}

double contract(std::span<const std::pair<int, double>> weights, std::span<const double> omegas) {
  double sum = 0.0;
  for (const auto& [j, w] : weights) sum += omegas[j] * w;
  return -sum;
}

double theta_phase(const PropagationJob& job, const DiskPoint& x) {
  return theta_phase(job, x, job.potential().omegas());
}

double theta_phase(const PropagationJob& job, const DiskPoint& x, std::span<const double> omegas) {
  require_in_domain(job, x);
  require(omegas.size() == job.potential().size(), "weight vector does not match the net");
  return contract(phase_footprint(job, x).weights(), omegas);
}

Intervals normalize_intervals(Intervals intervals, double t) {
  std::sort(intervals.begin(), intervals.end());
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto [a, b] = intervals[i];
    if (!(a >= 0.0 && b <= t && a <= b)) {
      std::ostringstream os;
      os << "interval [" << a << ", " << b << "] is not inside [0, " << t << "]";
      throw ValidationError(os.str());
    }
    if (i > 0 && a < intervals[i - 1].second) {
      std::ostringstream os;
      os << "intervals [" << intervals[i - 1].first << ", " << intervals[i - 1].second << "] and [" << a
         << ", " << b << "] overlap";
      throw ValidationError(os.str());
    }
  }
  return intervals;
}

double theta_phase_excised(const PropagationJob& job, const DiskPoint& x, const Intervals& intervals) {
  return theta_phase_excised(job, x, intervals, job.potential().omegas());
}

double theta_phase_excised(const PropagationJob& job, const DiskPoint& x, const Intervals& intervals,
                           std::span<const double> omegas) {
  require_in_domain(job, x);
  require(omegas.size() == job.potential().size(), "weight vector does not match the net");
  const Intervals iv = normalize_intervals(intervals, job.t());
  return contract(phase_footprint(job, x).weights(iv), omegas);
}

double laplace_busemann_fd(const LagrangianState& state, const DiskPoint& x, double step) {
  const Complex z = x.z();
  auto B = [&](Complex w) { return state.busemann(DiskPoint(w)); };
  const double e = step * (1.0 - x.norm_sq());
  const double c = B(z);
  const double fuu = (B(z + e) - 2.0 * c + B(z - e)) / (e * e);
  const double fvv = (B(z + Complex(0, e)) - 2.0 * c + B(z - Complex(0, e))) / (e * e);
  const double lambda = x.conformal_factor();
  return (fuu + fvv) / (lambda * lambda);
}

double jacobian(const LagrangianState& state, const DiskPoint& x, double t, AmplitudeMethod method) {
  if (method == AmplitudeMethod::analytic) return std::exp(-t);
  // Simpson rule for int_0^t Delta B(y^{-s}(x)) ds.
  const int n = 64;
  const PhasePoint rho = state.characteristic(x);
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = t * i / n;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * laplace_busemann_fd(state, geodesic_flow(rho, -s).base());
  }
  return std::exp(-sum * t / (3.0 * n));
}

double amplitude_b0(const PropagationJob& job, const DiskPoint& x, AmplitudeMethod method) {
  const auto& s = job.state();
  const double a = s.amplitude_a0(s.landing(x, job.t()));
  if (a == 0.0) return 0.0;
  return a * std::sqrt(jacobian(s, x, job.t(), method));
}

Vec2 xi_direction(const PropagationJob& job, const DiskPoint& lift, const MobiusMap& g,
                  const FrameChart& chart) {
  const MobiusMap back = g.inverse();
  const DiskPoint base = back.apply(lift);
  if (hyp_distance(base, chart.origin()) > 1e-9) {
    throw PreconditionError("frame chart is not based at the projection of the lift");
  }
  const double angle = job.state().gradient_angle(lift) + back.direction_shift(lift);
  return chart.components(angle);
}

Vec2 xi_direction(const PropagationJob& job, const DiskPoint& lift, const FrameChart& chart) {
  return xi_direction(job, lift, FuchsianGroup::bolza().reduce(lift).lift, chart);
}

std::vector<LiftContribution> lift_contributions(const PropagationJob& job, const LiftSet& lifts,
                                                 const FrameChart& chart,
                                                 const std::vector<Intervals>& excised) {
  require(excised.empty() || excised.size() == lifts.size(), "one interval list per lift expected");
  std::vector<LiftContribution> out;
  out.reserve(lifts.size());
  const auto& omegas = job.potential().omegas();
  for (std::size_t i = 0; i < lifts.size(); ++i) {
    const Lift& l = lifts.elements[i];
    LiftContribution c;
    c.lift = l.map;
    c.word = l.word;
    c.point = l.point;
    c.b0 = amplitude_b0(job, l.point);
    c.phi0 = phi_unperturbed(job, l.point);
    c.xi = xi_direction(job, l.point, l.map, chart);
    const Footprint fp = phase_footprint(job, l.point);
    c.theta = contract(fp.weights(), omegas);
    c.theta_excised =
        excised.empty() ? c.theta : contract(fp.weights(normalize_intervals(excised[i], job.t())), omegas);
    out.push_back(std::move(c));
  }
  return out;
}

PhasePoint perturbed_flow(const PropagationJob& job, const PhasePoint& rho, double t,
                          std::span<const double> omegas, double tolerance) {
  if (job.potential().kase() != PotentialCase::base) {
    throw PreconditionError("the perturbed flow is only available for the base-manifold potential");
  }
  require(omegas.size() == job.potential().size(), "weight vector does not match the net");
  HamiltonianOptions opts;
  opts.tolerance = tolerance;
  opts.coupling = job.delta();
  opts.grad_potential = [&](const DiskPoint& x) {
    const double e = 1e-6 * (1.0 - x.norm_sq());
    const Complex z = x.z();
    auto q = [&](Complex w) { return job.potential().eval_q(PhasePoint(DiskPoint(w), 0.0), omegas); };
    return Vec2{(q(z + e) - q(z - e)) / (2.0 * e), (q(z + Complex(0, e)) - q(z - Complex(0, e))) / (2.0 * e)};
  };
  return from_canonical(integrate_hamiltonian(to_canonical(rho), t, opts));
}

}  // namespace hypwave
