#include "hypwave/io.hpp"

#include <charconv>
#include <ostream>

namespace hypwave {
namespace {

Json word_json(const Word& w) {
  Json a = Json::array();
  for (auto g : w) a.push_back(static_cast<int>(g));
  return a;
}

void row(std::ostream& os, const DiskPoint& x, std::uint64_t seed, Vec2 y, Complex v) {
  os << format_double(x.u()) << ',' << format_double(x.v()) << ',' << seed << ',' << format_double(y.x) << ','
     << format_double(y.y) << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_field_csv(std::ostream& os, std::span<const LocalFieldSample> samples) {
  os << "x_u,x_v,seed,y1,y2,re,im\n";
  for (const auto& s : samples) {
    for (std::size_t k = 0; k < s.values.size(); ++k) row(os, s.x, s.omega_seed, s.grid[k], s.values[k]);
  }
}

void write_field_csv(std::ostream& os, const DiskPoint& x, std::span<const std::vector<Complex>> rows,
                     std::span<const Vec2> grid) {
  os << "x_u,x_v,seed,y1,y2,re,im\n";
  for (std::size_t d = 0; d < rows.size(); ++d) {
    for (std::size_t k = 0; k < grid.size(); ++k) row(os, x, d, grid[k], rows[d][k]);
  }
}

void write_covariance_csv(std::ostream& os, const CovarianceEstimate& est, const BerryKernel& reference) {
  os << "r,re,im,stderr,kernel_reference\n";
  for (std::size_t k = 0; k < est.estimates.size(); ++k) {
    os << format_double(est.separations[k]) << ',' << format_double(est.estimates[k].real()) << ','
       << format_double(est.estimates[k].imag()) << ',' << format_double(est.std_errors[k]) << ','
       << format_double(kernel(reference, est.separations[k])) << '\n';
  }
}

Json to_json(const DiskPoint& x) { return Json::array({x.u(), x.v()}); }

Json to_json(const PropagationJob& job) {
  const auto& p = job.params();
  const auto& np = job.potential().params();
  const auto& lp = job.state().params();
  Json j;
  j["h"] = p.h;
  j["beta"] = p.beta;
  j["delta"] = p.delta;
  j["eps0"] = p.eps0;
  j["t"] = p.t;
  j["horizon_const"] = p.horizon_const;
  j["potential"] = {{"case", to_string(np.kase)},
                    {"seed", np.seed},
                    {"profile", np.profile.name()},
                    {"plateau", np.profile.plateau},
                    {"omega_distribution", to_string(np.omega)},
                    {"mesh_fraction", np.mesh_fraction},
                    {"radius", job.potential().radius()},
                    {"n_centers", job.potential().size()}};
  j["state"] = {{"boundary_angle", lp.boundary_angle},
                {"amplitude_center", to_json(lp.amplitude_center)},
                {"amplitude_radius", job.state().amplitude_radius()},
                {"amplitude_norm", lp.amplitude_norm},
                {"profile", lp.profile.name()},
                {"plateau", lp.profile.plateau}};
  return j;
}

Json to_json(const CovarianceEstimate& est) {
  Json rows = Json::array();
  for (std::size_t k = 0; k < est.estimates.size(); ++k) {
    rows.push_back({{"r", est.separations[k]},
                    {"re", est.estimates[k].real()},
                    {"im", est.estimates[k].imag()},
                    {"stderr", est.std_errors[k]}});
  }
  return {{"n_samples", est.n_samples}, {"rows", rows}};
}

Json to_json(const GaussianityReport& r) {
  return {{"fourth_moment_ratio", r.fourth_moment_ratio}, {"ks_real", r.ks_real}, {"ks_imag", r.ks_imag}, {"n", r.n}};
}

Json to_json(const MeanPhaseResult& r) {
  return {{"value", r.value},
          {"stderr", r.std_error},
          {"n_draws", r.n_draws},
          {"lift_count", r.lift_count},
          {"word", word_json(r.word)}};
}

Json to_json(const PhaseCorrelation& r) {
  return {{"corr", r.corr}, {"stderr", r.std_error}, {"n_draws", r.n_draws}};
}

Json to_json(const LiftContribution& c) {
  return {{"word", word_json(c.word)},
          {"point", to_json(c.point)},
          {"b0", c.b0},
          {"phi0", c.phi0},
          {"theta", c.theta},
          {"theta_excised", c.theta_excised},
          {"xi", {c.xi.x, c.xi.y}}};
}

Json to_json(const BadSetProbe& p) {
  Json ex = Json::array();
  for (const auto& x : p.examples) ex.push_back(to_json(x));
  return {{"T0", p.T0}, {"T", p.T},           {"gamma", p.gamma},
          {"n_probes", p.n_probes}, {"bad_fraction", p.bad_fraction}, {"flagged_points", ex}};
}

Json to_json(const AdmissibilityReport& r) {
  return {{"h", r.h},
          {"beta", r.beta},
          {"delta", r.delta},
          {"eps0", r.eps0},
          {"horizon", r.horizon},
          {"profile", r.profile},
          {"overlap_max", r.overlap_max},
          {"overlap_probes", r.overlap_probes},
          {"ck_ratios", r.ck_ratios},
          {"line_integral_min", r.line_integral_min},
          {"line_integral_samples", r.line_integral_samples},
          {"delta_small", r.delta_small},
          {"delta_large", r.delta_large},
          {"base_condition", r.base_condition},
          {"all_conditions", r.all_conditions()}};
}

}  // namespace hypwave
