#include "hypwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "hypwave/errors.hpp"
#include "hypwave/surface.hpp"

namespace hypwave {
namespace {

const FuchsianGroup& group() { return FuchsianGroup::bolza(); }

constexpr int kSearchIterations = 80;

// The backward trajectory s -> Phi^{-s}(rho_x~) as a segment of length t.
GeodesicSegment backward_segment(const PropagationJob& job, const DiskPoint& lift, double t) {
  return GeodesicSegment(characteristic(job, lift).reversed(), t);
}

// Sublevel interval {s in [0, len] : f(s) < thr} of a convex function.
std::optional<std::pair<double, double>> sublevel(const std::function<double(double)>& f, double len, double thr) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.0, b = len;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < kSearchIterations && b - a > 1e-13; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  double smin = 0.5 * (a + b);
  double fmin = f(smin);
  for (double s : {0.0, len}) {
    const double v = f(s);
    if (v < fmin) fmin = v, smin = s;
  }
  if (!(fmin < thr)) return std::nullopt;

  auto edge = [&](double inside, double outside) {
    for (int i = 0; i < kSearchIterations; ++i) {
      const double m = 0.5 * (inside + outside);
      (f(m) < thr ? inside : outside) = m;
    }
    return inside;
  };
  const double lo = f(0.0) < thr ? 0.0 : edge(smin, 0.0);
  const double hi = f(len) < thr ? len : edge(smin, len);
  return std::make_pair(lo, hi);
}

}  // namespace

double default_eps(double beta) { return 0.05 * beta; }

double approach_threshold(const PropagationJob& job, double eps) { return std::pow(job.h(), job.beta() - eps); }

Intervals merge_intervals(Intervals intervals) {
  std::sort(intervals.begin(), intervals.end());
  Intervals out;
  for (const auto& iv : intervals) {
    if (!out.empty() && iv.first <= out.back().second) {
      out.back().second = std::max(out.back().second, iv.second);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

ApproachIntervals close_approach_intervals(const DiskPoint& a, const DiskPoint& b, const PropagationJob& job,
                                           double eps) {
  const double t = job.t();
  const double thr = approach_threshold(job, eps);
  const GeodesicSegment A = backward_segment(job, a, t);
  const GeodesicSegment B = backward_segment(job, b, t);

  // Translates g.B that can come within thr of A have midpoints within
  // t + thr of the midpoint of A. Both midpoints are reduced so the
  // candidates come from a ball of bounded radius.
  const Reduction ra = group().reduce(A.point_at(0.5 * t));
  const Reduction rb = group().reduce(B.point_at(0.5 * t));
  const double reach = t + thr;
  const auto ball = group().ball(reach + hyp_distance(DiskPoint(), ra.point) +
                                 hyp_distance(DiskPoint(), rb.point) + 1e-9);
  const MobiusMap rb_inv = rb.lift.inverse();

  Intervals found;
  for (const auto& k : *ball) {
    if (hyp_distance(k.map.apply(rb.point), ra.point) > reach) continue;
    const MobiusMap g = ra.lift * k.map * rb_inv;
    const GeodesicSegment image(apply(g, B.start()), t);
    auto f = [&](double s) { return image.distance_to(A.point_at(s)); };
    if (auto iv = sublevel(f, t, thr)) found.push_back(*iv);
  }
  ApproachIntervals out;
  out.intervals = merge_intervals(std::move(found));
  for (const auto& [lo, hi] : out.intervals) out.total_length += hi - lo;
  return out;
}

std::vector<Intervals> excision_sets(std::span<const DiskPoint> lifts, const PropagationJob& job, double eps) {
  std::vector<Intervals> out(lifts.size());
  for (std::size_t i = 0; i < lifts.size(); ++i) {
    Intervals all;
    for (std::size_t j = 0; j < lifts.size(); ++j) {
      if (i == j) continue;
      const auto iv = close_approach_intervals(lifts[i], lifts[j], job, eps);
      all.insert(all.end(), iv.intervals.begin(), iv.intervals.end());
    }
    out[i] = merge_intervals(std::move(all));
  }
  return out;
}

bool in_V_neighborhood(const DiskPoint& x, const DiskPoint& y, const PropagationJob& job, double eps) {
  const double t = job.t();
  const double thr = std::pow(job.h(), job.beta() - eps);
  const DiskPoint yr = group().reduce(y).point;
  const LiftSet lifts = enumerate_lifts(x, t, job.state());
  if (lifts.empty()) return false;
  const auto ball = group().ball(t + thr + hyp_distance(DiskPoint(), x) + hyp_distance(DiskPoint(), yr) + 1e-9);
  for (const Lift& l : lifts.elements) {
    const GeodesicSegment seg(geodesic_flow(characteristic(job, l.point), -t), 2.0 * t);
    for (const auto& k : *ball) {
      const DiskPoint q = l.map.apply(k.map.apply(yr));
      if (hyp_distance(q, l.point) > t + thr) continue;
      if (seg.distance_to(q) < thr) return true;
    }
  }
  return false;
}

BadPointResult is_bad_point(const DiskPoint& x, double T0, double T, double gamma, const PropagationJob& job) {
  const double r_inj = group().config().inradius;
  if (!(T0 >= r_inj * (1.0 - 1e-12) && T0 <= T && T <= job.horizon() * (1.0 + 1e-12))) {
    std::ostringstream os;
    os << "bad-set window needs r_I = " << r_inj << " <= T0 = " << T0 << " <= T = " << T
       << " <= horizon = " << job.horizon();
    throw PreconditionError(os.str());
  }
  const double thr = std::pow(job.h(), gamma);
  const auto& state = job.state();
  const LiftSet lifts = lifts_in_window(x, T0, T, state);
  const auto ball = group().ball(T + thr + 2.0 * hyp_distance(DiskPoint(), x) + 1e-9);

  BadPointResult out;
  for (const Lift& l : lifts.elements) {
    const GeodesicSegment fwd(characteristic(job, l.point), T);
    for (const auto& k : *ball) {
      const DiskPoint q = l.map.apply(k.map.apply(x));
      if (hyp_distance(q, l.point) > T + thr) continue;
      const double d = fwd.distance_to(q, r_inj, T);
      if (!(d < thr)) continue;
      const GeodesicSegment back(characteristic(job, l.point).reversed(), T);
      BadPointWitness w;
      w.word = l.word;
      w.t1 = std::clamp(back.profile(state.amplitude_center()).foot, T0, T);
      w.t2 = std::clamp(fwd.profile(q).foot, r_inj, T);
      w.distance = d;
      out.bad = true;
      out.witness = std::move(w);
      return out;
    }
  }
  return out;
}

BadSetProbe bad_fraction(const PropagationJob& job, double T0, double T, double gamma, int n_probes,
                         std::uint64_t seed) {
  if (n_probes <= 0) throw ValidationError("bad-set estimate needs at least one probe");
  BadSetProbe out{T0, T, gamma, n_probes, 0.0, {}};
  CounterRng rng(seed, stream::kProbes + 2);
  int bad = 0;
  for (int i = 0; i < n_probes; ++i) {
    const DiskPoint x = uniform_point(rng);
    if (is_bad_point(x, T0, T, gamma, job).bad) {
      ++bad;
      if (out.examples.size() < 20) out.examples.push_back(x);
    }
  }
  out.bad_fraction = static_cast<double>(bad) / n_probes;
  return out;
}

}  // namespace hypwave
