#pragma once

// Lift sets A_{x,t}: the preimages g.x of a base point whose backward
// characteristic of time t lands in the support of the initial amplitude.

#include <vector>

#include "hypwave/lagrangian.hpp"
#include "hypwave/surface.hpp"

namespace hypwave {

struct Lift {
  MobiusMap map;     // deck transformation g with point = g.x
  Word word;
  DiskPoint point;   // the lift x~
  DiskPoint landing; // base of the backward characteristic at time t
};

struct LiftSet {
  DiskPoint x;
  double t = 0.0;
  std::vector<Lift> elements;  // shortlex order of the words

  std::size_t size() const { return elements.size(); }
  bool empty() const { return elements.empty(); }
};

/// Pre: t >= 0 and x in the closed fundamental octagon (DomainError otherwise).
LiftSet enumerate_lifts(const DiskPoint& x, double t, const LagrangianState& state);

/// Lifts whose backward characteristic meets the amplitude support at some
/// time in [t_lo, t_hi], i.e. the union of A_{x,t} over that window.
LiftSet lifts_in_window(const DiskPoint& x, double t_lo, double t_hi,
                        const LagrangianState& state);

/// Radius of the group ball that contains every candidate lift for a
/// backward horizon t.
double lift_search_radius(const DiskPoint& x, double t, const LagrangianState& state);

}  // namespace hypwave
