#pragma once

// Ensemble estimators that confront simulated fields with the Berry field:
// covariance, Gaussianity, mean phase and phase independence.

#include <cstdint>
#include <span>
#include <vector>

#include "hypwave/field.hpp"

namespace hypwave {

struct IndexPair {
  std::size_t i = 0, j = 0;  // grid indices of y and y'
};

struct CovarianceEstimate {
  std::vector<double> separations;  // |y - y'|
  std::vector<Complex> estimates;   // mean of psi(y) conj psi(y')
  std::vector<double> std_errors;   // sample std of the products / sqrt(n)
  int n_samples = 0;
};

/// Rows are draws, columns grid points. Pre: >= 2 rows of equal length.
CovarianceEstimate empirical_covariance(std::span<const std::vector<Complex>> values, std::span<const Vec2> grid,
                                        std::span<const IndexPair> pairs);
/// Throws ValidationError when the samples differ in grid or job
/// parameters, or when one of them is empty.
CovarianceEstimate empirical_covariance(std::span<const LocalFieldSample> samples, std::span<const IndexPair> pairs);

/// sum over the waves of b0^2 e^{i xi.(y - y')}: the covariance of the sum
/// when the phases are independent and uniform.
Complex exact_covariance(std::span<const PlaneWave> waves, Vec2 y, Vec2 y2);

struct GaussianityReport {
  double fourth_moment_ratio = 0.0;  // E|psi|^4 / (E|psi|^2)^2, uncentred
  double ks_real = 0.0;              // KS distance of the standardised real part to N(0, 1)
  double ks_imag = 0.0;
  int n = 0;
};

inline constexpr int kMinGaussianitySamples = 100;

/// Pre: n >= 100 (PreconditionError). Throws DegenerateSampleError when every
/// value vanishes. A component with zero spread is a point mass, at KS
/// distance 1/2 from the normal law.
GaussianityReport gaussianity(std::span<const Complex> values);
GaussianityReport gaussianity(std::span<const LocalFieldSample> samples, std::size_t probe);

/// Sup distance between the empirical law of `x` and N(0, 1).
double ks_normal(std::vector<double> x);

struct MeanPhaseResult {
  double value = 0.0;      // |mean over draws of e^{i Theta / h}|
  double std_error = 0.0;  // bootstrap
  int n_draws = 0;
  int lift_count = 0;
  Word word;               // the lift used (shortest word)
};

/// |E_w e^{i Theta^0 / h}| over draws 0..n-1 for the shortest-word lift, with
/// the phase excised against the other lifts. Pre: n >= 100 and a reached x;
/// x should lie outside the bad set (checked by the caller).
MeanPhaseResult mean_phase(const PropagationJob& job, const DiskPoint& x, int n_draws,
                           PhaseMode mode = PhaseMode::dynamic);
MeanPhaseResult mean_phase(const LocalField& field, int n_draws, PhaseMode mode = PhaseMode::dynamic,
                           std::size_t lift = 0);

struct PhaseCorrelation {
  double corr = 0.0;  // |Cov(z, z')| / sqrt(Var z Var z') with z = e^{i Theta / h}
  double std_error = 0.0;
  int n_draws = 0;
};

/// Correlation across draws of the phases of one lift of x and one of x'.
/// With `excised`, each phase omits its close approaches to every other lift
/// of either point, and the lift kept longest is used (shortest word on
/// ties). Throws DegenerateSampleError for a deterministic phase (delta = 0,
/// or a lift excised over its whole trajectory).
PhaseCorrelation phase_independence(const PropagationJob& job, const DiskPoint& x, const DiskPoint& x2,
                                    int n_draws, FieldVariant variant = FieldVariant::excised);
/// Explicit lifts in the cover and explicit excised intervals.
PhaseCorrelation phase_independence(const PropagationJob& job, const DiskPoint& lift, const Intervals& cut,
                                    const DiskPoint& lift2, const Intervals& cut2, int n_draws);

/// Correlation of two equally long phase sequences (angles).
PhaseCorrelation phase_correlation(std::span<const double> a, std::span<const double> b, std::uint64_t seed);

}  // namespace hypwave
