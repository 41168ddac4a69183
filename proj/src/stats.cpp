#include "hypwave/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hypwave/diagnostics.hpp"
#include "hypwave/errors.hpp"
#include "hypwave/rng.hpp"

namespace hypwave {
namespace {

constexpr int kBootstrapResamples = 200;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Standard deviation of a statistic over bootstrap resamples of n indices.
template <class Stat>
double bootstrap_std(int n, std::uint64_t seed, Stat&& stat) {
  CounterRng rng(seed, stream::kBootstrap);
  std::vector<int> idx(n);
  double s = 0.0, s2 = 0.0;
  for (int b = 0; b < kBootstrapResamples; ++b) {
    for (int& i : idx) i = static_cast<int>(rng.uniform() * n);
    const double v = stat(idx);
    s += v;
    s2 += v * v;
  }
  const double m = s / kBootstrapResamples;
  return std::sqrt(std::max(0.0, s2 / kBootstrapResamples - m * m));
}

std::vector<double> lift_phases(const PropagationJob& job, const DiskPoint& lift, const Intervals& cut,
                                int n_draws) {
  const auto w = phase_footprint(job, lift).weights(normalize_intervals(cut, job.t()));
  const double phi0 = phi_unperturbed(job, lift);
  std::vector<double> out(n_draws);
  for (int d = 0; d < n_draws; ++d) {
    const double th = job.delta() == 0.0 ? 0.0 : contract(w, job.potential().omegas_for_draw(d));
    out[d] = std::remainder((phi0 + job.delta() * th) / job.h(), kTwoPi);
  }
  return out;
}

void require_draws(int n, int min) {
  if (n < min) {
    std::ostringstream os;
    os << "need at least " << min << " draws, got " << n;
    throw PreconditionError(os.str());
  }
}

}  // namespace

CovarianceEstimate empirical_covariance(std::span<const std::vector<Complex>> values, std::span<const Vec2> grid,
                                        std::span<const IndexPair> pairs) {
  if (values.size() < 2) throw PreconditionError("covariance needs at least two samples");
  for (const auto& row : values) {
    if (row.size() != grid.size()) throw ValidationError("sample length does not match the grid");
  }
  const double n = static_cast<double>(values.size());
  CovarianceEstimate out;
  out.n_samples = static_cast<int>(values.size());
  for (const auto& p : pairs) {
    if (p.i >= grid.size() || p.j >= grid.size()) throw ValidationError("pair index outside the grid");
    Complex mean = 0.0;
    for (const auto& row : values) mean += row[p.i] * std::conj(row[p.j]);
    mean /= n;
    double ss = 0.0;
    for (const auto& row : values) ss += std::norm(row[p.i] * std::conj(row[p.j]) - mean);
    out.separations.push_back((grid[p.i] - grid[p.j]).norm());
    out.estimates.push_back(mean);
    out.std_errors.push_back(std::sqrt(ss / (n - 1.0)) / std::sqrt(n));
  }
  return out;
}

CovarianceEstimate empirical_covariance(std::span<const LocalFieldSample> samples, std::span<const IndexPair> pairs) {
  if (samples.size() < 2) throw PreconditionError("covariance needs at least two samples");
  const auto& ref = samples.front();
  std::vector<std::vector<Complex>> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.empty) throw ValidationError("ensemble contains an empty sample");
    if (s.grid.size() != ref.grid.size()) throw ValidationError("samples do not share a grid");
    for (std::size_t k = 0; k < s.grid.size(); ++k) {
      if (s.grid[k].x != ref.grid[k].x || s.grid[k].y != ref.grid[k].y) {
        throw ValidationError("samples do not share a grid");
      }
    }
    if (s.t != ref.t || s.h != ref.h || s.delta != ref.delta) {
      throw ValidationError("samples come from different job parameters");
    }
    rows.push_back(s.values);
  }
  return empirical_covariance(rows, ref.grid, pairs);
}

Complex exact_covariance(std::span<const PlaneWave> waves, Vec2 y, Vec2 y2) {
  Complex s = 0.0;
  for (const auto& w : waves) s += w.b0 * w.b0 * std::polar(1.0, w.xi.dot(y - y2));
  return s;
}

double ks_normal(std::vector<double> x) {
  if (x.empty()) throw PreconditionError("KS distance of an empty sample");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = normal_cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

GaussianityReport gaussianity(std::span<const Complex> values) {
  require_draws(static_cast<int>(values.size()), kMinGaussianitySamples);
  const double n = static_cast<double>(values.size());
  double m2 = 0.0, m4 = 0.0;
  for (const Complex& v : values) {
    const double a = std::norm(v);
    m2 += a;
    m4 += a * a;
  }
  m2 /= n;
  m4 /= n;
  if (!(m2 > 0.0)) throw DegenerateSampleError("every sample vanishes at the probe");
  GaussianityReport r;
  r.n = static_cast<int>(values.size());
  r.fourth_moment_ratio = m4 / (m2 * m2);
  auto ks_component = [&](auto part) {
    std::vector<double> x;
    x.reserve(values.size());
    double mean = 0.0;
    for (const Complex& v : values) mean += part(v);
    mean /= n;
    double var = 0.0;
    for (const Complex& v : values) var += (part(v) - mean) * (part(v) - mean);
    const double sd = std::sqrt(var / (n - 1.0));
    if (!(sd > 1e-14 * std::sqrt(m2))) return 0.5;
    for (const Complex& v : values) x.push_back((part(v) - mean) / sd);
    return ks_normal(std::move(x));
  };
  r.ks_real = ks_component([](Complex v) { return v.real(); });
  r.ks_imag = ks_component([](Complex v) { return v.imag(); });
  return r;
}

GaussianityReport gaussianity(std::span<const LocalFieldSample> samples, std::size_t probe) {
  std::vector<Complex> v;
  v.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.empty) throw ValidationError("ensemble contains an empty sample");
    if (probe >= s.values.size()) throw ValidationError("probe index outside the grid");
    v.push_back(s.values[probe]);
  }
  return gaussianity(v);
}

MeanPhaseResult mean_phase(const LocalField& field, int n_draws, PhaseMode mode, std::size_t lift) {
  require_draws(n_draws, 100);
  if (lift >= field.lift_count()) throw PreconditionError("the state does not reach x through the requested lift");
  std::vector<Complex> z(n_draws);
  for (int d = 0; d < n_draws; ++d) z[d] = std::polar(1.0, field.phase(lift, d, mode));
  auto stat = [&](const std::vector<int>& idx) {
    Complex s = 0.0;
    for (int i : idx) s += z[i];
    return std::abs(s) / static_cast<double>(idx.size());
  };
  std::vector<int> all(n_draws);
  for (int i = 0; i < n_draws; ++i) all[i] = i;
  MeanPhaseResult r;
  r.value = stat(all);
  r.std_error = bootstrap_std(n_draws, field.job().potential().params().seed, stat);
  r.n_draws = n_draws;
  r.lift_count = static_cast<int>(field.lift_count());
  r.word = field.lifts()[lift].word;
  return r;
}

MeanPhaseResult mean_phase(const PropagationJob& job, const DiskPoint& x, int n_draws, PhaseMode mode) {
  require_draws(n_draws, 100);
  return mean_phase(LocalField(job, x, FrameChart(x), FieldVariant::excised), n_draws, mode);
}

PhaseCorrelation phase_correlation(std::span<const double> a, std::span<const double> b, std::uint64_t seed) {
  if (a.size() != b.size()) throw ValidationError("phase sequences differ in length");
  const int n = static_cast<int>(a.size());
  require_draws(n, 2);
  std::vector<Complex> za(n), zb(n);
  for (int i = 0; i < n; ++i) {
    za[i] = std::polar(1.0, a[i]);
    zb[i] = std::polar(1.0, b[i]);
  }
  auto corr = [&](const std::vector<int>& idx) {
    const double m = static_cast<double>(idx.size());
    Complex ma = 0.0, mb = 0.0, c = 0.0;
    for (int i : idx) {
      ma += za[i];
      mb += zb[i];
      c += za[i] * std::conj(zb[i]);
    }
    ma /= m;
    mb /= m;
    c = c / m - ma * std::conj(mb);
    const double va = std::max(0.0, 1.0 - std::norm(ma));
    const double vb = std::max(0.0, 1.0 - std::norm(mb));
    if (!(va > 1e-12 && vb > 1e-12)) return -1.0;
    return std::min(1.0, std::abs(c) / std::sqrt(va * vb));
  };
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  PhaseCorrelation r;
  r.corr = corr(all);
  if (r.corr < 0.0) throw DegenerateSampleError("a phase does not vary across draws");
  r.n_draws = n;
  r.std_error = bootstrap_std(n, seed, [&](const std::vector<int>& idx) { return std::max(0.0, corr(idx)); });
  return r;
}

PhaseCorrelation phase_independence(const PropagationJob& job, const DiskPoint& lift, const Intervals& cut,
                                    const DiskPoint& lift2, const Intervals& cut2, int n_draws) {
  require_draws(n_draws, 100);
  const auto a = lift_phases(job, lift, cut, n_draws);
  const auto b = lift_phases(job, lift2, cut2, n_draws);
  return phase_correlation(a, b, job.potential().params().seed);
}

PhaseCorrelation phase_independence(const PropagationJob& job, const DiskPoint& x, const DiskPoint& x2,
                                    int n_draws, FieldVariant variant) {
  require_draws(n_draws, 100);
  const LiftSet A = enumerate_lifts(x, job.t(), job.state());
  const LiftSet B = enumerate_lifts(x2, job.t(), job.state());
  if (A.empty() || B.empty()) throw PreconditionError("the state does not reach both points");
  // Lifts of both points in one list; a lift shared by both appears once.
  std::vector<DiskPoint> pts;
  auto index_of = [&](const DiskPoint& p) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (std::abs(pts[i].z() - p.z()) < 1e-12) return i;
    }
    pts.push_back(p);
    return pts.size() - 1;
  };
  for (const auto& l : A.elements) index_of(l.point);
  for (const auto& l : B.elements) index_of(l.point);
  std::vector<Intervals> cuts(pts.size());
  if (variant == FieldVariant::excised && pts.size() > 1) cuts = excision_sets(pts, job, default_eps(job.beta()));
  auto excised_length = [&](std::size_t i) {
    double len = 0.0;
    for (const auto& [lo, hi] : normalize_intervals(cuts[i], job.t())) len += hi - lo;
    return len;
  };
  // lift sets are ordered by word length, so the first minimum wins ties
  auto pick = [&](const LiftSet& s) {
    std::size_t best = index_of(s.elements[0].point);
    for (const auto& l : s.elements) {
      const std::size_t i = index_of(l.point);
      if (excised_length(i) < excised_length(best) - 1e-12) best = i;
    }
    return best;
  };
  const std::size_t ia = pick(A);
  const std::size_t ib = pick(B);
  return phase_independence(job, pts[ia], cuts[ia], pts[ib], cuts[ib], n_draws);
}

}  // namespace hypwave
