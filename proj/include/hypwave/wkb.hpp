#pragma once

// Leading-order WKB data along the unperturbed backward characteristics:
// phi_{t,0} = B - t/2, the random phase theta_t, the amplitude b0 and the
// local wave direction xi.

#include <memory>
#include <span>
#include <vector>

#include "hypwave/lagrangian.hpp"
#include "hypwave/lifts.hpp"
#include "hypwave/potential.hpp"

namespace hypwave {

struct JobParams {
  double h = 0.05;
  double beta = 0.3;
  double delta = 0.0;
  double eps0 = 0.05;
  double t = 0.0;
  double horizon_const = 0.5;  // t <= horizon_const * log(1/h)
  /// Minimum Simpson steps per unit time in the symbol case; 0 selects
  /// max(64, 8 / h^beta) per trajectory.
  int quadrature_steps_per_unit_time = 0;
  double quadrature_tolerance = 1e-10;
};

class PropagationJob {
 public:
  /// Validates the parameters: throws AdmissibilityError when a parameter
  /// inequality fails (delta = 0 is always accepted), HorizonTooLargeError
  /// when t exceeds the horizon and ValidationError on inconsistent inputs.
  PropagationJob(const JobParams& params, std::shared_ptr<const RandomPotential> potential,
                 std::shared_ptr<const LagrangianState> state);

  const JobParams& params() const { return params_; }
  double h() const { return params_.h; }
  double beta() const { return params_.beta; }
  double delta() const { return params_.delta; }
  double t() const { return params_.t; }
  double horizon() const;
  const RandomPotential& potential() const { return *potential_; }
  const LagrangianState& state() const { return *state_; }
  std::shared_ptr<const RandomPotential> potential_ptr() const { return potential_; }
  std::shared_ptr<const LagrangianState> state_ptr() const { return state_; }

  /// Copy with a different propagation time (re-validated).
  PropagationJob with_time(double t) const;

 private:
  JobParams params_;
  std::shared_ptr<const RandomPotential> potential_;
  std::shared_ptr<const LagrangianState> state_;
};

/// The characteristic phase point (x~, d phi_{t,0}(x~)).
PhasePoint characteristic(const PropagationJob& job, const DiskPoint& x);

/// True when the backward characteristic of time t lands in supp a0.
bool in_propagated_domain(const PropagationJob& job, const DiskPoint& x);

/// B(x~) - t/2. Throws DomainError outside the propagated domain.
double phi_unperturbed(const PropagationJob& job, const DiskPoint& x);

/// Line integrals of every bump along s -> Phi^{-s}(rho_x), s in [0, t].
Footprint phase_footprint(const PropagationJob& job, const DiskPoint& x);

/// theta_t = -int_0^t q_w(Phi^{-s} rho_x) ds for the given weights
/// (default: draw 0 of the potential). Throws DomainError outside the
/// propagated domain.
double theta_phase(const PropagationJob& job, const DiskPoint& x);
double theta_phase(const PropagationJob& job, const DiskPoint& x, std::span<const double> omegas);

using Intervals = std::vector<std::pair<double, double>>;
/// Sorts and validates time intervals inside [0, t]; throws ValidationError
/// if any two overlap or one leaves [0, t].
Intervals normalize_intervals(Intervals intervals, double t);
/// Same integral over [0, t] minus the intervals.
double theta_phase_excised(const PropagationJob& job, const DiskPoint& x, const Intervals& intervals);
double theta_phase_excised(const PropagationJob& job, const DiskPoint& x, const Intervals& intervals,
                           std::span<const double> omegas);

/// -sum_j w_j I_j for a sparse footprint.
double contract(std::span<const std::pair<int, double>> weights, std::span<const double> omegas);

enum class AmplitudeMethod { analytic, laplacian };

/// b0(t, x~) = a0(y^{-t}(x~)) (J^{-t})^{1/2}. The analytic route uses
/// Delta B = 1, i.e. J^{-t} = e^{-t}; the laplacian route integrates a
/// finite-difference Laplace-Beltrami of the phase along the characteristic.
double amplitude_b0(const PropagationJob& job, const DiskPoint& x,
                    AmplitudeMethod method = AmplitudeMethod::analytic);

/// J^{-t}(x~) = exp(-int_0^t Delta phi(y^{-s}(x~)) ds) by the selected route.
double jacobian(const LagrangianState& state, const DiskPoint& x, double t,
                AmplitudeMethod method = AmplitudeMethod::analytic);

/// Finite-difference Laplace-Beltrami of B at x.
double laplace_busemann_fd(const LagrangianState& state, const DiskPoint& x, double step = 1e-4);

/// Frame components of d phi_{t,0} at the lift x~ = g.x, expressed in the
/// chart at x (chart.origin must be x).
Vec2 xi_direction(const PropagationJob& job, const DiskPoint& lift, const MobiusMap& g,
                  const FrameChart& chart);
/// Same, recovering g by reduction; throws PreconditionError unless
/// chart.origin is the reduced point of x~.
Vec2 xi_direction(const PropagationJob& job, const DiskPoint& lift, const FrameChart& chart);

struct LiftContribution {
  MobiusMap lift;
  Word word;
  DiskPoint point;
  double b0 = 0.0;
  double theta = 0.0;
  double phi0 = 0.0;
  Vec2 xi;
  double theta_excised = 0.0;
};

/// Per-lift data for the lift set of x (weights of draw 0).
std::vector<LiftContribution> lift_contributions(const PropagationJob& job, const LiftSet& lifts,
                                                 const FrameChart& chart,
                                                 const std::vector<Intervals>& excised = {});

/// Validation mode: the fully perturbed Hamiltonian flow of
/// |xi|^2/2 + delta q_w (base case only), by the adaptive ODE integrator.
PhasePoint perturbed_flow(const PropagationJob& job, const PhasePoint& rho, double t,
                          std::span<const double> omegas, double tolerance = 1e-10);

}  // namespace hypwave
