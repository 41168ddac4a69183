#include "hypwave/experiment.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "hypwave/errors.hpp"
#include "hypwave/parallel.hpp"
#include "hypwave/rng.hpp"
#include "hypwave/surface.hpp"

namespace hypwave {
namespace {

PropagationJob build(const ExperimentConfig& cfg, double h, double horizon_const, double amplitude_fraction) {
  const ModelSettings& m = cfg.model;
  NetParams np;
  np.h = h;
  np.beta = m.beta;
  np.kase = m.kase;
  np.seed = m.net_seed;
  np.profile = m.bump;
  np.omega = m.omega;
  np.mesh_fraction = m.mesh_fraction;
  LagrangianParams lp;
  lp.boundary_angle = m.boundary_angle;
  lp.amplitude_radius = amplitude_fraction * injectivity_radius();
  lp.profile = m.amplitude;
  JobParams jp;
  jp.h = h;
  jp.beta = m.beta;
  jp.delta = m.delta ? *m.delta : std::pow(h, m.alpha);
  jp.eps0 = m.eps0;
  jp.t = m.t ? *m.t : m.t_factor * std::log(1.0 / h);
  jp.horizon_const = horizon_const;
  return PropagationJob(jp, build_net(np), std::make_shared<LagrangianState>(lp));
}

}  // namespace

double injectivity_radius() { return FuchsianGroup::bolza().config().inradius; }

PropagationJob make_job(const ExperimentConfig& cfg, double h) {
  return build(cfg, h, cfg.model.horizon_const, cfg.model.amplitude_fraction);
}

PropagationJob make_screening_job(const ExperimentConfig& cfg, double h) {
  return build(cfg, h, cfg.diagnostics.horizon_const, cfg.model.amplitude_fraction);
}

PropagationJob make_bad_set_job(const ExperimentConfig& cfg, double h) {
  return build(cfg, h, cfg.diagnostics.horizon_const, cfg.diagnostics.amplitude_fraction);
}

void check_admissibility(const ExperimentConfig& cfg) {
  if (cfg.h_list.empty()) throw ConfigError("h_list must not be empty");
  if (cfg.ensemble.n_omega * cfg.ensemble.n_x < kMinGaussianitySamples) {
    throw ConfigError("ensemble.n_omega * ensemble.n_x must be at least " + std::to_string(kMinGaussianitySamples));
  }
  if (cfg.mean_phase.draws < 100) throw ConfigError("meanphase.draws must be at least 100");
  if (cfg.berry.n_waves < 64) throw ConfigError("berry.n_waves must be at least 64");
  if (cfg.berry.draws < kMinGaussianitySamples) {
    throw ConfigError("berry.draws must be at least " + std::to_string(kMinGaussianitySamples));
  }
  for (double h : cfg.h_list) {
    make_job(cfg, h);
    make_screening_job(cfg, h);
  }
}

std::vector<Vec2> make_grid(const EnsembleSettings& e) {
  std::vector<Vec2> g;
  for (int k = 0; k < e.grid_points; ++k) g.push_back({e.grid_step * k, 0.0});
  validate_grid(g);
  return g;
}

std::vector<DiskPoint> select_points(const PropagationJob& job, const PropagationJob& screen,
                                     const DiagnosticSettings& d, int n, std::uint64_t seed) {
  CounterRng rng(seed, stream::kProbes + 3);
  const double T0 = d.T0 ? *d.T0 : injectivity_radius();
  std::vector<DiskPoint> out;
  const long max_tries = 1000L * std::max(n, 1);
  for (long tries = 0; static_cast<int>(out.size()) < n; ++tries) {
    if (tries >= max_tries) {
      std::ostringstream os;
      os << "found only " << out.size() << " of " << n << " reached, non-bad points in " << max_tries << " tries";
      throw ResourceError(os.str());
    }
    const DiskPoint x = uniform_point(rng);
    if (enumerate_lifts(x, job.t(), job.state()).empty()) continue;
    if (is_bad_point(x, T0, d.T, d.gamma, screen).bad) continue;
    out.push_back(x);
  }
  return out;
}

std::vector<std::vector<LocalFieldSample>> sample_ensemble(const PropagationJob& job,
                                                           const std::vector<DiskPoint>& points, int n_omega,
                                                           const std::vector<Vec2>& grid, std::uint64_t seed,
                                                           unsigned jobs, PhaseMode mode) {
  return parallel_map<std::vector<LocalFieldSample>>(points.size(), jobs, [&](std::size_t i) {
    const double turn = kTwoPi * uniform_at(seed, stream::kFrames, i);
    const LocalField f(job, points[i], FrameChart(points[i], turn));
    std::vector<LocalFieldSample> out;
    out.reserve(n_omega);
    for (int d = 0; d < n_omega; ++d) out.push_back(f.sample(d, grid, mode).normalized());
    return out;
  });
}

FieldStatistics field_statistics(const std::vector<std::vector<LocalFieldSample>>& ensemble, double h) {
  std::vector<LocalFieldSample> all;
  double lifts = 0.0;
  for (const auto& per : ensemble) {
    if (!per.empty()) lifts += per.front().lift_count;
    all.insert(all.end(), per.begin(), per.end());
  }
  if (all.empty()) throw PreconditionError("empty ensemble");
  std::vector<IndexPair> pairs;
  for (std::size_t k = 0; k < all.front().grid.size(); ++k) pairs.push_back({0, k});
  FieldStatistics s;
  s.h = h;
  s.covariance = empirical_covariance(all, pairs);
  s.within_band = true;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double K = kernel({}, s.covariance.separations[k]);
    const double dev = std::abs(s.covariance.estimates[k] - K);
    s.kernel.push_back(K);
    s.max_deviation = std::max(s.max_deviation, dev);
    if (dev > std::max(0.1, 3.0 * s.covariance.std_errors[k])) s.within_band = false;
  }
  s.gaussianity = gaussianity(all, 0);
  s.mean_lifts = lifts / static_cast<double>(ensemble.size());
  return s;
}

MeanPhaseSummary mean_phase_summary(const PropagationJob& job, const std::vector<DiskPoint>& points, int n_draws,
                                    unsigned jobs) {
  MeanPhaseSummary s;
  s.h = job.h();
  s.per_point = parallel_map<MeanPhaseResult>(points.size(), jobs,
                                              [&](std::size_t i) { return mean_phase(job, points[i], n_draws); });
  const double n = static_cast<double>(points.size());
  if (n == 0) throw PreconditionError("no points for the mean phase");
  double m = 0.0, m2 = 0.0;
  for (const auto& r : s.per_point) {
    m += r.value;
    m2 += r.value * r.value;
  }
  s.mean_value = m / n;
  s.std_error = n > 1 ? std::sqrt(std::max(0.0, m2 / n - s.mean_value * s.mean_value) / (n - 1.0)) : 0.0;
  return s;
}

BerrySelfTest berry_self_test(const BerrySettings& b, std::uint64_t seed, unsigned jobs) {
  if (b.separations < 2) throw ConfigError("the Berry self-test needs at least two separations");
  std::vector<Vec2> grid;
  for (int k = 0; k < b.separations; ++k) grid.push_back({b.r_max * k / (b.separations - 1), 0.0});
  const BerryKernel K{b.lambda, 2};
  const auto rows = parallel_map<std::vector<Complex>>(
      b.draws, jobs, [&](std::size_t d) { return sample_berry(K, b.n_waves, seed, d, grid); });
  std::vector<IndexPair> pairs;
  for (std::size_t k = 0; k < grid.size(); ++k) pairs.push_back({0, k});
  BerrySelfTest r;
  r.covariance = empirical_covariance(rows, grid, pairs);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    r.kernel.push_back(kernel(K, r.covariance.separations[k]));
    if (std::abs(r.covariance.estimates[k] - r.kernel.back()) > 3.0 * r.covariance.std_errors[k]) ++r.outside_band;
  }
  std::vector<Complex> at0;
  for (const auto& row : rows) at0.push_back(row[0]);
  r.gaussianity = gaussianity(at0);
  r.pass = r.outside_band == 0 && std::abs(r.gaussianity.fourth_moment_ratio - 2.0) <= 0.15;
  return r;
}

}  // namespace hypwave
