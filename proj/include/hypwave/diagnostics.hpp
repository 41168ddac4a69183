#pragma once

// Exceptional-set machinery: bad points whose trajectories come back close
// to themselves, the neighbourhoods V_{t,eps}(x) swept by trajectories
// through x, and the close-approach time intervals removed from the phases.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hypwave/wkb.hpp"

namespace hypwave {

/// eps = 0.05 beta.
double default_eps(double beta);

/// Base distance below which two trajectory points count as a close
/// approach: h^(beta - eps).
double approach_threshold(const PropagationJob& job, double eps);

struct ApproachIntervals {
  Intervals intervals;  // sorted, disjoint, inside [0, t]
  double total_length = 0.0;
};

/// Sorts and merges overlapping or touching intervals.
Intervals merge_intervals(Intervals intervals);

/// Times s in [0, t] at which Phi^{-s}(rho_a) comes within the approach
/// threshold of Phi^{-s'}(rho_b) on the surface for some s' in [0, t].
/// The distance to each translate of the b-trajectory is convex in s, so
/// every translate contributes one interval, located by golden-section search
/// and bisection.
ApproachIntervals close_approach_intervals(const DiskPoint& a, const DiskPoint& b, const PropagationJob& job,
                                           double eps);

/// For each lift, the union of its close-approach intervals with every other
/// lift of the list.
std::vector<Intervals> excision_sets(std::span<const DiskPoint> lifts, const PropagationJob& job, double eps);

/// y in V_{t,eps}(x): some lift trajectory of x passes within h^(beta - eps)
/// of y at a time s in [-t, t].
bool in_V_neighborhood(const DiskPoint& x, const DiskPoint& y, const PropagationJob& job, double eps);

struct BadPointWitness {
  Word word;              // lift x~ = g.x
  double t1 = 0.0;        // time at which x~ is in A_{x,t1}
  double t2 = 0.0;        // return time
  double distance = 0.0;  // dist_X(pi Phi^{t2}(rho_x~), x)
};

struct BadPointResult {
  bool bad = false;
  std::optional<BadPointWitness> witness;
};

/// x in X_{T0,T,gamma}: for some lift x~ in A_{x,t1}, t1 in [T0, T], the
/// forward trajectory returns within h^gamma of x at a time t2 in [r_I, T].
/// Pre: r_I <= T0 <= T <= horizon (PreconditionError).
BadPointResult is_bad_point(const DiskPoint& x, double T0, double T, double gamma, const PropagationJob& job);

struct BadSetProbe {
  double T0 = 0.0, T = 0.0, gamma = 0.0;
  int n_probes = 0;
  double bad_fraction = 0.0;
  std::vector<DiskPoint> examples;  // first flagged probes (at most 20)
};

/// Monte-Carlo volume fraction of the bad set over area-uniform probes.
BadSetProbe bad_fraction(const PropagationJob& job, double T0, double T, double gamma, int n_probes,
                         std::uint64_t seed);

}  // namespace hypwave
