#pragma once

// CSV and JSON serialisation of samples and reports. Doubles are written in
// shortest round-trip form, so equal results give byte-identical files.

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "hypwave/berry.hpp"
#include "hypwave/diagnostics.hpp"
#include "hypwave/stats.hpp"

namespace hypwave {

using Json = nlohmann::ordered_json;

std::string format_double(double v);

/// Columns x_u, x_v, seed, y1, y2, re, im; one row per grid point and sample.
void write_field_csv(std::ostream& os, std::span<const LocalFieldSample> samples);
/// Same columns for raw rows (e.g. Berry draws) over one grid.
void write_field_csv(std::ostream& os, const DiskPoint& x, std::span<const std::vector<Complex>> rows,
                     std::span<const Vec2> grid);

/// Columns r, re, im, stderr, kernel_reference.
void write_covariance_csv(std::ostream& os, const CovarianceEstimate& est, const BerryKernel& reference);

Json to_json(const PropagationJob& job);
Json to_json(const CovarianceEstimate& est);
Json to_json(const GaussianityReport& r);
Json to_json(const MeanPhaseResult& r);
Json to_json(const PhaseCorrelation& r);
Json to_json(const BadSetProbe& p);
Json to_json(const AdmissibilityReport& r);
Json to_json(const DiskPoint& x);
Json to_json(const LiftContribution& c);

}  // namespace hypwave
