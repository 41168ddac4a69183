#include "hypwave/field.hpp"

#include <cmath>
#include <sstream>

#include "hypwave/diagnostics.hpp"
#include "hypwave/errors.hpp"
#include "hypwave/rng.hpp"

namespace hypwave {

const char* to_string(FieldVariant v) { return v == FieldVariant::full ? "full" : "excised"; }

FieldVariant parse_field_variant(const std::string& s) {
  if (s == "full") return FieldVariant::full;
  if (s == "excised") return FieldVariant::excised;
  throw ConfigError("unknown field variant '" + s + "' (expected full or excised)");
}

void validate_grid(std::span<const Vec2> grid) {
  for (const Vec2& y : grid) {
    if (!(y.norm() <= kMaxGridRadius)) {
      std::ostringstream os;
      os << "grid point (" << y.x << ", " << y.y << ") lies beyond radius " << kMaxGridRadius;
      throw ValidationError(os.str());
    }
  }
}

std::vector<Complex> superpose(std::span<const PlaneWave> waves, std::span<const Vec2> grid) {
  std::vector<Complex> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    Complex s = 0.0;
    for (const auto& w : waves) s += w.b0 * std::polar(1.0, w.phase + w.xi.dot(grid[k]));
    out[k] = s;
  }
  return out;
}

LocalFieldSample LocalFieldSample::normalized() const {
  LocalFieldSample out = *this;
  if (empty || b0_sq_sum <= 0.0) return out;
  const double s = 1.0 / std::sqrt(b0_sq_sum);
  for (auto& v : out.values) v *= s;
  return out;
}

LocalField::LocalField(const PropagationJob& job, const DiskPoint& x, const FrameChart& chart,
                       FieldVariant variant)
    : job_(job), x_(x), chart_(chart), variant_(variant) {
  if (std::abs(chart.origin().z() - x.z()) > 1e-12) {
    throw PreconditionError("the chart must be centred at the sample point");
  }
  const LiftSet set = enumerate_lifts(x, job.t(), job.state());
  std::vector<DiskPoint> points;
  for (const auto& l : set.elements) points.push_back(l.point);
  excised_.assign(set.size(), Intervals{});
  if (variant == FieldVariant::excised && set.size() > 1) {
    excised_ = excision_sets(points, job, default_eps(job.beta()));
  }
  lifts_ = lift_contributions(job, set, chart, variant == FieldVariant::excised ? excised_ : std::vector<Intervals>{});
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Footprint fp = phase_footprint(job, points[i]);
    weights_.push_back(fp.weights(normalize_intervals(excised_[i], job.t())));
  }
}

double LocalField::theta(std::size_t lift, std::uint64_t draw) const {
  if (draw == 0) return variant_ == FieldVariant::full ? lifts_.at(lift).theta : lifts_.at(lift).theta_excised;
  return contract(weights_.at(lift), job_.potential().omegas_for_draw(draw));
}

double LocalField::phase(std::size_t lift, std::uint64_t draw, PhaseMode mode) const {
  if (mode == PhaseMode::synthetic) {
    return kTwoPi * uniform_at(job_.potential().params().seed, stream::kSynthetic + draw, lift);
  }
  const double th = job_.delta() == 0.0 ? 0.0 : theta(lift, draw);
  return std::remainder((lifts_.at(lift).phi0 + job_.delta() * th) / job_.h(), kTwoPi);
}

std::vector<PlaneWave> LocalField::waves(std::uint64_t draw, PhaseMode mode) const {
  std::vector<PlaneWave> out;
  out.reserve(lifts_.size());
  std::vector<double> omegas;
  if (mode == PhaseMode::dynamic && job_.delta() != 0.0) omegas = job_.potential().omegas_for_draw(draw);
  for (std::size_t i = 0; i < lifts_.size(); ++i) {
    PlaneWave w;
    w.b0 = lifts_[i].b0;
    w.xi = lifts_[i].xi;
    if (mode == PhaseMode::synthetic || job_.delta() == 0.0) {
      w.phase = phase(i, draw, mode);
    } else {
      w.phase = std::remainder((lifts_[i].phi0 + job_.delta() * contract(weights_[i], omegas)) / job_.h(), kTwoPi);
    }
    out.push_back(w);
  }
  return out;
}

LocalFieldSample LocalField::sample(std::uint64_t draw, std::span<const Vec2> grid, PhaseMode mode,
                                   double frame_rotation) const {
  validate_grid(grid);
  LocalFieldSample s;
  s.x = x_;
  s.draw = draw;
  s.omega_seed = job_.potential().params().seed ^ draw;
  s.grid.assign(grid.begin(), grid.end());
  s.lift_count = static_cast<int>(lifts_.size());
  s.t = job_.t();
  s.h = job_.h();
  s.delta = job_.delta();
  s.empty = lifts_.empty();
  for (const auto& l : lifts_) s.b0_sq_sum += l.b0 * l.b0;
  auto w = waves(draw, mode);
  if (frame_rotation != 0.0) {
    for (auto& pw : w) pw.xi = Vec2::from_angle(pw.xi.angle() - frame_rotation);
  }
  s.values = superpose(w, grid);
  return s;
}

LocalFieldSample sample_field(const PropagationJob& job, const DiskPoint& x, const FrameChart& chart,
                              std::span<const Vec2> grid, FieldVariant variant, std::uint64_t draw) {
  validate_grid(grid);
  return LocalField(job, x, chart, variant).sample(draw, grid);
}

}  // namespace hypwave
