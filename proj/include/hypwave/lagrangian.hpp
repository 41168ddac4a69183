#pragma once

// Initial monochromatic Lagrangian state: the Busemann phase of an ideal
// boundary point and a compactly supported radial amplitude on one sheet.

#include "hypwave/bump.hpp"
#include "hypwave/geometry.hpp"

namespace hypwave {

struct LagrangianParams {
  double boundary_angle = 0.0;  // ideal point p = exp(i boundary_angle)
  DiskPoint amplitude_center;
  double amplitude_radius = 0.0;  // 0 selects a quarter of the inradius
  double amplitude_norm = 1.0;
  BumpProfile profile;
};

class LagrangianState {
 public:
  /// Throws ValidationError unless the amplitude disk lies strictly inside
  /// the inscribed disk of the fundamental octagon.
  explicit LagrangianState(const LagrangianParams& params = {});

  const LagrangianParams& params() const { return params_; }
  Complex boundary_point() const { return boundary_; }
  const DiskPoint& amplitude_center() const { return params_.amplitude_center; }
  double amplitude_radius() const { return params_.amplitude_radius; }
  double amplitude_norm() const { return params_.amplitude_norm; }
  double peak() const { return peak_; }

  /// B(x) = log(|p - x|^2 / (1 - |x|^2)); B(0) = 0, |grad B| = 1, Delta B = 1.
  double busemann(const DiskPoint& x) const;
  /// Frame angle of grad B (points away from the boundary point).
  double gradient_angle(const DiskPoint& x) const;
  /// Euclidean gradient of B in disk coordinates.
  Vec2 gradient(const DiskPoint& x) const;
  /// The point (x, dB(x)) of the Lagrangian graph.
  PhasePoint characteristic(const DiskPoint& x) const {
    return {x, gradient_angle(x)};
  }
  /// Base point of the backward characteristic after time t.
  DiskPoint landing(const DiskPoint& x, double t) const;

  double amplitude_a0(const DiskPoint& x) const;

 private:
  LagrangianParams params_;
  Complex boundary_;
  double peak_ = 0.0;
};

}  // namespace hypwave
