// Acceptance checks at the default configuration. Prints one PASS or FAIL
// line per criterion and exits non-zero when any fails.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hypwave/experiment.hpp"
#include "hypwave/surface.hpp"
#include "oracles.hpp"

using namespace hypwave;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

DiskPoint random_point(CounterRng& r, double max_radius = 0.9) {
  return DiskPoint(std::polar(max_radius * std::sqrt(r.uniform()), r.uniform(-kPi, kPi)));
}

double covector_speed(const CanonicalState& s) {
  const double lambda = 2.0 / (1.0 - s.u * s.u - s.v * s.v);
  return std::hypot(s.xi_u, s.xi_v) / lambda;
}

Outcome geometry_suite() {
  CounterRng r(101, 0);
  double iso = 0.0, cocycle = 0.0, energy = 0.0, relation = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const MobiusMap m = MobiusMap::translation_from_origin(random_point(r, 0.8)) * MobiusMap::rotation(r.uniform(-kPi, kPi));
    const DiskPoint z = random_point(r), w = random_point(r);
    iso = std::max(iso, std::abs(hyp_distance(m.apply(z), m.apply(w)) - hyp_distance(z, w)));
  }
  for (int i = 0; i < 40; ++i) {
    const PhasePoint p(random_point(r, 0.7), r.uniform(-kPi, kPi));
    const double s = r.uniform(-2, 2), t = r.uniform(-2, 2);
    cocycle = std::max(cocycle, phase_distance(geodesic_flow(geodesic_flow(p, s), t), geodesic_flow(p, s + t)));
    cocycle = std::max(cocycle,
                       phase_distance(geodesic_flow_ode(geodesic_flow_ode(p, s), t), geodesic_flow_ode(p, s + t)));
  }
  // H = |xi|_g^2 / 2 + c |z|^2 along the adaptive integrator
  HamiltonianOptions opt;
  opt.coupling = 0.05;
  opt.grad_potential = [](const DiskPoint& z) { return Vec2{2.0 * z.u(), 2.0 * z.v()}; };
  auto H = [&](const CanonicalState& s) {
    return 0.5 * covector_speed(s) * covector_speed(s) + opt.coupling * (s.u * s.u + s.v * s.v);
  };
  for (int i = 0; i < 20; ++i) {
    const CanonicalState s0 = to_canonical(PhasePoint(random_point(r, 0.6), r.uniform(-kPi, kPi)));
    for (double t : {1.0, 3.0}) energy = std::max(energy, std::abs(H(integrate_hamiltonian(s0, t, opt)) - H(s0)));
  }
  const MobiusMap rel = FuchsianGroup::bolza().relator();
  for (int i = 0; i < 100; ++i) {
    const DiskPoint z = random_point(r, 0.95);
    relation = std::max(relation, std::abs(rel.apply(z).z() - z.z()));
  }
  const bool pass = iso <= 1e-10 && cocycle <= 1e-7 && energy <= 1e-8 && relation <= 1e-9;
  return {pass, fmt("isometry %.2e, cocycle %.2e, energy %.2e, relation %.2e", iso, cocycle, energy, relation)};
}

Outcome oracle_calibration(const ExperimentConfig& cfg) {
  const BerrySelfTest b = berry_self_test(cfg.berry, cfg.seed, cfg.jobs);
  return {b.pass, fmt("%zu separations, %d outside 3 sigma, fourth-moment ratio %.3f",
                      b.covariance.separations.size(), b.outside_band, b.gaussianity.fourth_moment_ratio)};
}

Outcome jacobian_amplitude() {
  const double rI = injectivity_radius();
  auto setup = [&](double h, double radius, double c) {
    NetParams np;
    np.h = h;
    LagrangianParams lp;
    lp.boundary_angle = 0.4;
    lp.amplitude_radius = radius;
    JobParams jp;
    jp.h = h;
    jp.delta = std::pow(h, 0.8);
    jp.horizon_const = c;
    return PropagationJob(jp, build_net(np), std::make_shared<LagrangianState>(lp));
  };
  const PropagationJob base = setup(0.001, 0.95 * rI, 1.0);
  const LagrangianState& st = base.state();
  CounterRng rng(102, 0);
  double ratio_err = 0.0, fd_err = 0.0;
  for (int i = 0; i < 10; ++i) {
    const DiskPoint y = oracle::random_in_support(st, rng);
    for (double t : {1.0, 2.0, 4.0}) {
      const DiskPoint x0 = oracle::forward_point(st, y, t), x1 = oracle::forward_point(st, y, t + 1.0);
      const double ratio = amplitude_b0(base.with_time(t + 1.0), x1) / amplitude_b0(base.with_time(t), x0);
      ratio_err = std::max(ratio_err, std::abs(ratio - std::exp(-0.5)));
      fd_err = std::max(fd_err, std::abs(oracle::fd_jacobian(st, x0, t) / jacobian(st, x0, t) - 1.0));
    }
  }

  // L2 mass of b0 over a disk containing the forward image of the support
  const PropagationJob small = setup(0.01, 0.5, 0.5);
  double mass_err = 0.0;
  for (double t : {1.0, 2.0}) {
    const PropagationJob job = small.with_time(t);
    const double rmax = std::tanh(0.5 * (t + 0.5) + 0.05);
    const int nr = 1500, na = 1500;
    double mass = 0.0;
    for (int i = 0; i < nr; ++i) {
      const double r = rmax * (i + 0.5) / nr;
      const double lambda = 2.0 / (1.0 - r * r);
      for (int j = 0; j < na; ++j) {
        const double b = amplitude_b0(job, DiskPoint(std::polar(r, kTwoPi * (j + 0.5) / na)));
        mass += b * b * lambda * lambda * r;
      }
    }
    mass *= (rmax / nr) * (kTwoPi / na);
    mass_err = std::max(mass_err, std::abs(mass - 1.0));
  }

  // sup b0(t) by the finite-difference Laplacian route, least-squares slope of log sup
  std::vector<DiskPoint> ys{st.amplitude_center()};
  for (int i = 0; i < 200; ++i) ys.push_back(oracle::random_in_support(st, rng));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (double t = 1.0; t <= 5.0 + 1e-9; t += 0.5) {
    const PropagationJob job = base.with_time(t);
    double sup = 0.0;
    for (const DiskPoint& y : ys) {
      sup = std::max(sup, amplitude_b0(job, oracle::forward_point(st, y, t), AmplitudeMethod::laplacian));
    }
    const double ly = std::log(sup);
    sx += t;
    sy += ly;
    sxx += t * t;
    sxy += t * ly;
    ++n;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const bool pass = ratio_err <= 1e-6 && fd_err <= 1e-6 && mass_err <= 0.01 && std::abs(slope + 0.5) <= 0.025;
  return {pass, fmt("decay ratio error %.2e, Jacobian vs finite differences %.2e, L2 mass error %.2e, slope %.4f",
                    ratio_err, fd_err, mass_err, slope)};
}

Outcome phase_correctness(const ExperimentConfig& cfg) {
  const double h = cfg.h_list.back();
  CounterRng rng(103, 0);
  double quad_err = 0.0;
  int checked = 0, bound_ok = 0;
  for (std::uint64_t net = 1; net <= 5; ++net) {
    ExperimentConfig c = cfg;
    c.model.net_seed = net;
    const PropagationJob job = make_job(c, h);
    const auto& st = job.state();
    for (int i = 0; i < 10; ++i) {
      const DiskPoint x = oracle::forward_point(st, oracle::random_in_support(st, rng), job.t());
      const auto omegas = job.potential().omegas_for_draw(checked);
      const double theta = theta_phase(job, x, omegas);
      quad_err = std::max(quad_err, std::abs(theta - oracle::theta(job, x, omegas, 0.0, job.t())));

      // |Theta^1| <= delta |I| max|q| with max|q| over I bounded by the sum of
      // |w_j| over the bumps met inside I
      const double a = rng.uniform(0.0, 0.5 * job.t()), b = rng.uniform(0.5 * job.t(), job.t());
      const Intervals cut{{a, a + 0.5 * (b - a) * rng.uniform()}, {b - 0.2 * (b - a) * rng.uniform(), b}};
      double length = 0.0, qmax = 0.0;
      for (const auto& [lo, hi] : cut) length += hi - lo;
      for (const auto& c : phase_footprint(job, x).crossings()) {
        for (const auto& [lo, hi] : cut) {
          if (c.lo < hi && c.hi > lo) {
            qmax += std::abs(omegas[c.center]);
            break;
          }
        }
      }
      const double theta1 = job.delta() * (theta - theta_phase_excised(job, x, cut, omegas));
      bound_ok += std::abs(theta1) <= job.delta() * length * qmax;
      ++checked;
    }
  }
  const bool pass = quad_err <= 1e-8 && bound_ok == checked;
  return {pass, fmt("%d pairs, quadrature error %.2e, excision bound held on %d", checked, quad_err, bound_ok)};
}

Outcome main_claim(const ExperimentConfig& cfg) {
  const auto grid = make_grid(cfg.ensemble);
  std::vector<FieldStatistics> stats;
  for (double h : cfg.h_list) {
    const PropagationJob job = make_job(cfg, h);
    const auto points = select_points(job, make_screening_job(cfg, h), cfg.diagnostics, cfg.ensemble.n_x, cfg.seed);
    stats.push_back(field_statistics(sample_ensemble(job, points, cfg.ensemble.n_omega, grid, cfg.seed, cfg.jobs), h));
  }
  bool trend = true;
  std::string devs;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    devs += fmt("%s%.4f", i ? " / " : "", stats[i].max_deviation);
    if (i > 0 && stats[i].max_deviation > stats[i - 1].max_deviation) trend = false;
  }
  const FieldStatistics& last = stats.back();
  const double ratio = last.gaussianity.fourth_moment_ratio;
  const bool pass = last.within_band && ratio >= 1.7 && ratio <= 2.3 && trend;
  return {pass, fmt("h = %g: within band %s, fourth-moment ratio %.3f; max deviation over h %s (%s)", last.h,
                    last.within_band ? "yes" : "no", ratio, devs.c_str(), trend ? "non-increasing" : "increases")};
}

Outcome mean_phase_decay(const ExperimentConfig& cfg) {
  std::vector<MeanPhaseSummary> s;
  for (double h : cfg.h_list) {
    const PropagationJob job = make_job(cfg, h);
    const auto points = select_points(job, make_screening_job(cfg, h), cfg.diagnostics, cfg.mean_phase.points, cfg.seed);
    s.push_back(mean_phase_summary(job, points, cfg.mean_phase.draws, cfg.jobs));
  }
  bool decreasing = true;
  std::string vals;
  for (std::size_t i = 0; i < s.size(); ++i) {
    vals += fmt("%s%.4f", i ? " / " : "", s[i].mean_value);
    if (i > 0 && s[i].mean_value >= s[i - 1].mean_value) decreasing = false;
  }
  const bool small = s.back().mean_value <= 0.1 + 3.0 * s.back().std_error;
  return {decreasing && small, fmt("|E e^{i Theta0/h}| over h %s, sigma %.4f at h = %g", vals.c_str(),
                                   s.back().std_error, s.back().h)};
}

Outcome independence(const ExperimentConfig& cfg) {
  const double h = cfg.h_list.back();
  const int n = 400;
  const double bound = 3.0 / std::sqrt(static_cast<double>(n));
  const PropagationJob job = make_job(cfg, h);
  const double eps = default_eps(job.beta());
  const auto points = select_points(job, make_screening_job(cfg, h), cfg.diagnostics, 80, cfg.seed);

  int certified = 0, certified_ok = 0;
  double certified_max = 0.0;
  for (std::size_t i = 0; i < points.size() && certified < 20; ++i) {
    for (std::size_t j = i + 1; j < points.size() && certified < 20; ++j) {
      if (in_V_neighborhood(points[i], points[j], job, eps) || in_V_neighborhood(points[j], points[i], job, eps)) {
        continue;
      }
      const double c = phase_independence(job, points[i], points[j], n).corr;
      certified_max = std::max(certified_max, c);
      certified_ok += c <= bound;
      ++certified;
    }
  }

  // x~' a few thresholds down the backward trajectory of x~: the two
  // trajectories share most of their length
  const double thr = approach_threshold(job, eps);
  const double steps[] = {1.5, 2.0, 3.0};
  int engineered = 0, engineered_ok = 0;
  double excised_max = 0.0, full_max = 0.0;
  for (std::size_t i = 0; i < points.size() && engineered < 5; ++i) {
    const DiskPoint a = enumerate_lifts(points[i], job.t(), job.state()).elements.front().point;
    const DiskPoint b =
        GeodesicSegment(characteristic(job, a).reversed(), job.t()).point_at(steps[i % 3] * thr);
    if (!in_propagated_domain(job, b)) continue;
    const auto cut_a = close_approach_intervals(a, b, job, eps).intervals;
    const auto cut_b = close_approach_intervals(b, a, job, eps).intervals;
    const double ex = phase_independence(job, a, cut_a, b, cut_b, n).corr;
    const double full = phase_independence(job, a, {}, b, {}, n).corr;
    excised_max = std::max(excised_max, ex);
    full_max = std::max(full_max, full);
    engineered_ok += ex <= bound;
    ++engineered;
  }
  const bool pass = certified == 20 && certified_ok == 20 && engineered == 5 && engineered_ok == 5;
  return {pass, fmt("bound %.3f; certified %d/%d within (max %.3f); engineered excised %d/%d within (max %.3f), "
                    "full max %.3f",
                    bound, certified_ok, certified, certified_max, engineered_ok, engineered, excised_max, full_max)};
}

Outcome bad_set(const ExperimentConfig& cfg) {
  const DiagnosticSettings& d = cfg.diagnostics;
  const double T0 = d.T0 ? *d.T0 : injectivity_radius();
  std::vector<double> f;
  for (double h : {0.02, 0.01}) {
    f.push_back(bad_fraction(make_bad_set_job(cfg, h), T0, d.T, d.gamma, d.n_probes, cfg.seed).bad_fraction);
  }
  const bool pass = f[0] <= 0.05 && f[1] <= f[0];
  return {pass, fmt("bad fraction %.3f at h = 0.02, %.3f at h = 0.01 (%d probes)", f[0], f[1], d.n_probes)};
}

Outcome hypothesis_audit(const ExperimentConfig& cfg) {
  std::vector<AdmissibilityReport> reps;
  for (double h : cfg.h_list) {
    const PropagationJob job = make_job(cfg, h);
    reps.push_back(verify_hypotheses(job.potential(), job.delta(), cfg.model.eps0, 5.0, 4000, 50));
  }
  bool pass = true;
  double ck_spread = 0.0, c0 = reps.front().line_integral_min;
  std::string overlaps;
  for (const auto& r : reps) {
    pass = pass && r.all_conditions() && r.overlap_max == reps.front().overlap_max && r.ck_ratios.size() == 3;
    for (std::size_t k = 0; k < r.ck_ratios.size() && k < reps.front().ck_ratios.size(); ++k) {
      ck_spread = std::max(ck_spread, std::abs(r.ck_ratios[k] / reps.front().ck_ratios[k] - 1.0));
    }
    c0 = std::min(c0, r.line_integral_min);
    overlaps += fmt("%s%d", overlaps.empty() ? "" : " / ", r.overlap_max);
  }
  pass = pass && ck_spread <= 0.05 && c0 > 0.0;
  return {pass, fmt("overlap %s, C^k ratio spread %.3f (k <= 3), c0 %.4f on %d geodesics", overlaps.c_str(),
                    ck_spread, c0, reps.front().line_integral_samples)};
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  const ExperimentConfig cfg;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks{
      {"geometry suite", geometry_suite},
      {"oracle calibration", [&] { return oracle_calibration(cfg); }},
      {"Jacobian and amplitude", jacobian_amplitude},
      {"phase correctness", [&] { return phase_correctness(cfg); }},
      {"main statistical claim", [&] { return main_claim(cfg); }},
      {"mean-phase decay", [&] { return mean_phase_decay(cfg); }},
      {"independence", [&] { return independence(cfg); }},
      {"bad set", [&] { return bad_set(cfg); }},
      {"hypothesis audit", [&] { return hypothesis_audit(cfg); }},
  };
  int failed = 0;
  for (const auto& [name, run] : checks) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
