#pragma once

// The locally rescaled wave psi(y) = psi_t(exp_x(h y)) as a finite sum of
// plane waves, one per lift of x that the propagated state reaches.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hypwave/wkb.hpp"

namespace hypwave {

enum class FieldVariant { full, excised };
/// `synthetic` replaces every phase by an iid uniform angle per (draw, lift),
/// which separates summation and statistics from the dynamics.
enum class PhaseMode { dynamic, synthetic };

const char* to_string(FieldVariant v);
FieldVariant parse_field_variant(const std::string& s);

/// b0 e^{i phase} e^{i xi.y}
struct PlaneWave {
  double b0 = 0.0;
  double phase = 0.0;
  Vec2 xi;
};

/// Grid points may be at most this far from the origin (wavelength units).
inline constexpr double kMaxGridRadius = 10.0;

std::vector<Complex> superpose(std::span<const PlaneWave> waves, std::span<const Vec2> grid);

struct LocalFieldSample {
  DiskPoint x;
  std::uint64_t omega_seed = 0;  // key of the weight stream, seed ^ draw
  std::uint64_t draw = 0;
  std::vector<Vec2> grid;
  std::vector<Complex> values;
  int lift_count = 0;
  double t = 0.0, h = 0.0, delta = 0.0;
  double b0_sq_sum = 0.0;
  bool empty = true;  // the state does not reach x

  /// Values divided by sqrt(sum b0^2); an empty sample is returned unchanged.
  LocalFieldSample normalized() const;
};

/// Per-point data shared by every weight draw: lift contributions and the
/// footprint weights of every lift, so that a draw costs one contraction per
/// lift.
class LocalField {
 public:
  /// Pre: chart.origin() == x and x in the fundamental octagon.
  LocalField(const PropagationJob& job, const DiskPoint& x, const FrameChart& chart,
             FieldVariant variant = FieldVariant::full);

  const PropagationJob& job() const { return job_; }
  const DiskPoint& x() const { return x_; }
  const FrameChart& chart() const { return chart_; }
  FieldVariant variant() const { return variant_; }
  std::size_t lift_count() const { return lifts_.size(); }
  const std::vector<LiftContribution>& lifts() const { return lifts_; }
  /// Excised intervals per lift (empty lists for the full variant).
  const std::vector<Intervals>& excised() const { return excised_; }

  /// theta (or the excised phase for that variant) of one lift for draw d.
  double theta(std::size_t lift, std::uint64_t draw) const;
  /// Total phase of one lift for draw d: (phi0 + delta theta) / h reduced to
  /// (-pi, pi], or the synthetic uniform angle.
  double phase(std::size_t lift, std::uint64_t draw, PhaseMode mode = PhaseMode::dynamic) const;
  std::vector<PlaneWave> waves(std::uint64_t draw, PhaseMode mode = PhaseMode::dynamic) const;
  /// `frame_rotation` turns the chart by that angle before sampling, which
  /// rotates every xi by its negative.
  LocalFieldSample sample(std::uint64_t draw, std::span<const Vec2> grid, PhaseMode mode = PhaseMode::dynamic,
                          double frame_rotation = 0.0) const;

 private:
  PropagationJob job_;
  DiskPoint x_;
  FrameChart chart_;
  FieldVariant variant_;
  std::vector<LiftContribution> lifts_;
  std::vector<Intervals> excised_;
  std::vector<std::vector<std::pair<int, double>>> weights_;
};

/// One sample of draw `draw`. An unreached x gives an empty sample.
LocalFieldSample sample_field(const PropagationJob& job, const DiskPoint& x, const FrameChart& chart,
                              std::span<const Vec2> grid, FieldVariant variant = FieldVariant::full,
                              std::uint64_t draw = 0);

/// Throws ValidationError if a grid point lies beyond kMaxGridRadius.
void validate_grid(std::span<const Vec2> grid);

}  // namespace hypwave
