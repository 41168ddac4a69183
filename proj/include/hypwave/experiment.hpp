#pragma once

// Experiment settings and the ensemble runs shared by the command-line tool
// and the acceptance checks.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypwave/berry.hpp"
#include "hypwave/diagnostics.hpp"
#include "hypwave/stats.hpp"

namespace hypwave {

struct ModelSettings {
  double beta = 0.3;
  double alpha = 0.8;            // delta = h^alpha unless `delta` is set
  std::optional<double> delta;
  double eps0 = 0.05;
  double horizon_const = 0.5;
  double t_factor = 0.5;         // t = t_factor log(1/h) unless `t` is set
  std::optional<double> t;
  PotentialCase kase = PotentialCase::base;
  OmegaDistribution omega = OmegaDistribution::uniform;
  BumpProfile bump = BumpProfile::with_plateau(0.8);
  double mesh_fraction = 0.125;
  std::uint64_t net_seed = 1;
  double boundary_angle = 0.4;
  double amplitude_fraction = 0.95;  // of the inradius
  BumpProfile amplitude = BumpProfile::with_plateau(0.8);
};

struct EnsembleSettings {
  int n_omega = 512;
  int n_x = 64;
  int grid_points = 12;   // y_k = (k step, 0), k < grid_points
  double grid_step = 0.5;
};

struct DiagnosticSettings {
  std::optional<double> T0;  // default r_I
  double T = 2.9;
  double gamma = 0.3;
  double horizon_const = 1.0;
  int n_probes = 500;
  double amplitude_fraction = 0.25;  // support used for the bad-set volume
};

struct BerrySettings {
  double lambda = 1.0;
  int n_waves = 64;
  int draws = 10000;
  int separations = 20;
  double r_max = 8.0;
};

struct MeanPhaseSettings {
  int draws = 400;
  int points = 200;  // non-bad points averaged per h
};

struct ExperimentConfig {
  std::vector<double> h_list{0.05, 0.02, 0.01};
  ModelSettings model;
  EnsembleSettings ensemble;
  DiagnosticSettings diagnostics;
  BerrySettings berry;
  MeanPhaseSettings mean_phase;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  std::string out_dir = "out";
};

double injectivity_radius();

/// Validated job at one h (throws AdmissibilityError, HorizonTooLargeError,
/// ValidationError).
PropagationJob make_job(const ExperimentConfig& cfg, double h);
/// Same model with the diagnostics horizon, for screening bad points.
PropagationJob make_screening_job(const ExperimentConfig& cfg, double h);
/// Amplitude support of the bad-set volume estimate.
PropagationJob make_bad_set_job(const ExperimentConfig& cfg, double h);
/// Checks ensemble sizes (ConfigError) and builds every job of the
/// configuration; the first failure propagates.
void check_admissibility(const ExperimentConfig& cfg);

std::vector<Vec2> make_grid(const EnsembleSettings& e);

/// n area-uniform points that the state reaches and that are not bad for
/// (T0, T, gamma) under the screening job.
std::vector<DiskPoint> select_points(const PropagationJob& job, const PropagationJob& screen,
                                     const DiagnosticSettings& d, int n, std::uint64_t seed);

/// Samples psi / sqrt(sum b0^2) at every point for draws 0..n_omega-1. Point
/// i uses one frame, turned by a uniform angle (stream kFrames, index i).
/// Result[i] holds the draws of point i.
std::vector<std::vector<LocalFieldSample>> sample_ensemble(const PropagationJob& job,
                                                           const std::vector<DiskPoint>& points, int n_omega,
                                                           const std::vector<Vec2>& grid, std::uint64_t seed,
                                                           unsigned jobs, PhaseMode mode = PhaseMode::dynamic);

struct FieldStatistics {
  double h = 0.0;
  CovarianceEstimate covariance;  // pairs (0, k)
  std::vector<double> kernel;     // unit Berry kernel at the separations
  double max_deviation = 0.0;     // max_k |estimate - kernel|
  bool within_band = false;       // every |estimate - kernel| <= max(0.1, 3 stderr)
  GaussianityReport gaussianity;  // at y = 0
  double mean_lifts = 0.0;
};

FieldStatistics field_statistics(const std::vector<std::vector<LocalFieldSample>>& ensemble, double h);

struct MeanPhaseSummary {
  double h = 0.0;
  std::vector<MeanPhaseResult> per_point;
  double mean_value = 0.0;  // average over points
  double std_error = 0.0;   // spread of the per-point values / sqrt(points)
};

MeanPhaseSummary mean_phase_summary(const PropagationJob& job, const std::vector<DiskPoint>& points, int n_draws,
                                    unsigned jobs);

struct BerrySelfTest {
  CovarianceEstimate covariance;
  std::vector<double> kernel;
  int outside_band = 0;  // separations with |estimate - kernel| > 3 stderr
  GaussianityReport gaussianity;
  bool pass = false;     // no separation outside the band and ratio within 2 +- 0.15
};

BerrySelfTest berry_self_test(const BerrySettings& b, std::uint64_t seed, unsigned jobs);

}  // namespace hypwave
