#include "hypwave/potential.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <map>
#include <sstream>

#include "disk_grid.hpp"
#include "hypwave/errors.hpp"
#include "hypwave/rng.hpp"
#include "hypwave/surface.hpp"

namespace hypwave {
namespace {

constexpr double kPieceLength = 1.0;  // footprint search granularity
constexpr int kMaxHalvings = 16;

const FuchsianGroup& group() { return FuchsianGroup::bolza(); }

// Brings a lifted phase point into the fundamental octagon.
PhasePoint reduce_phase(const PhasePoint& rho) {
  const Reduction red = group().reduce(rho.base());
  const MobiusMap back = red.lift.inverse();
  return {red.point, rho.angle() + back.direction_shift(rho.base())};
}

double distance(PotentialCase kase, const PhasePoint& a, const PhasePoint& b) {
  if (kase == PotentialCase::base) return hyp_distance(a.base(), b.base());
  return phase_distance(a, b);
}

// All images g.c with hyp_distance(0, g.c) <= circumradius + reach.
template <class F>
void for_each_image(const PhasePoint& c, double reach, F&& f) {
  const double rc = group().config().circumradius;
  const double limit = rc + reach;
  const auto ball = group().ball(hyp_distance(DiskPoint(), c.base()) + limit + 1e-9);
  for (const auto& g : *ball) {
    const PhasePoint img = apply(g.map, c);
    const double r0 = hyp_distance(DiskPoint(), img.base());
    if (r0 <= limit) f(img, r0);
  }
}

}  // namespace

const char* to_string(PotentialCase c) { return c == PotentialCase::base ? "base" : "symbol"; }

const char* to_string(OmegaDistribution d) {
  switch (d) {
    case OmegaDistribution::uniform: return "uniform";
    case OmegaDistribution::constant: return "constant";
    case OmegaDistribution::zero: return "zero";
  }
  return "uniform";
}

PotentialCase parse_potential_case(const std::string& s) {
  if (s == "base") return PotentialCase::base;
  if (s == "symbol") return PotentialCase::symbol;
  throw ConfigError("unknown potential case '" + s + "' (expected base or symbol)");
}

OmegaDistribution parse_omega_distribution(const std::string& s) {
  if (s == "uniform") return OmegaDistribution::uniform;
  if (s == "constant") return OmegaDistribution::constant;
  if (s == "zero") return OmegaDistribution::zero;
  throw ConfigError("unknown omega distribution '" + s + "' (expected uniform, constant or zero)");
}

double draw_omega(OmegaDistribution d, std::uint64_t seed, std::uint64_t index) {
  switch (d) {
    case OmegaDistribution::uniform: {
      const double s3 = std::sqrt(3.0);
      return -s3 + 2.0 * s3 * uniform_at(seed, stream::kOmega, index);
    }
    case OmegaDistribution::constant: return 1.0;
    case OmegaDistribution::zero: return 0.0;
  }
  return 0.0;
}

// --- RandomPotential ---------------------------------------------------------

std::vector<double> RandomPotential::omegas_for_draw(std::uint64_t draw) const {
  std::vector<double> out(centers_.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = draw_omega(params_.omega, params_.seed ^ draw, j);
  return out;
}

void RandomPotential::index_images() {
  image_reach_ = radius_ + 0.5 * kPieceLength + 1e-9;
  images_.clear();
  for (std::size_t j = 0; j < centers_.size(); ++j) {
    for_each_image(centers_[j], image_reach_, [&](const PhasePoint& img, double r0) {
      images_.push_back({static_cast<int>(j), img, r0});
    });
  }
  std::stable_sort(images_.begin(), images_.end(),
                   [](const Image& a, const Image& b) { return a.radius_from_origin < b.radius_from_origin; });

  auto grid = std::make_shared<detail::DiskGrid>(0.5 * std::tanh(0.5 * radius_));
  const double limit = group().config().circumradius + radius_;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (images_[i].radius_from_origin <= limit) {
      grid->insert(static_cast<int>(i), images_[i].at.base().z(), radius_);
    }
  }
  grid_ = std::move(grid);
}

double RandomPotential::bump_value(const PhasePoint& image, const PhasePoint& rho) const {
  return params_.profile(distance(params_.kase, image, rho) / radius_);
}

std::vector<std::pair<int, double>> RandomPotential::active(const PhasePoint& rho) const {
  const PhasePoint p = reduce_phase(rho);
  std::vector<std::pair<int, double>> out;
  for (int idx : grid_->at(p.base().z())) {
    const Image& img = images_[idx];
    const double v = bump_value(img.at, p);
    if (v > 0.0) out.emplace_back(img.center, v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double RandomPotential::eval_q(const PhasePoint& rho, std::span<const double> omegas) const {
  if (omegas.size() != centers_.size()) throw ValidationError("weight vector does not match the net");
  double q = 0.0;
  for (const auto& [j, v] : active(rho)) q += omegas[j] * v;
  return q;
}

Footprint RandomPotential::footprint(const PhasePoint& rho, double length, bool backward,
                                     double tolerance, double steps_per_unit) const {
  if (!(length >= 0.0)) throw PreconditionError("footprint length must be non-negative");
  const GeodesicSegment seg(backward ? rho.reversed() : rho, length);
  const double rc = group().config().circumradius;
  std::vector<Crossing> found;

  const int pieces = std::max(1, static_cast<int>(std::ceil(length / kPieceLength)));
  for (int k = 0; k < pieces; ++k) {
    const double s0 = length * k / pieces, s1 = length * (k + 1) / pieces;
    const double half = 0.5 * (s1 - s0);
    const Reduction red = group().reduce(seg.point_at(0.5 * (s0 + s1)));
    const double search = half + radius_;
    const double limit = rc + search;
    for (const Image& img : images_) {
      if (img.radius_from_origin > limit + 1e-9) break;
      if (hyp_distance(red.point, img.at.base()) > search) continue;
      const PhasePoint lifted = apply(red.lift, img.at);
      const auto prof = seg.profile(lifted.base());
      if (!(prof.offset < radius_)) continue;
      const double w = std::acosh(std::cosh(radius_) / std::cosh(prof.offset));
      const double lo = std::max(0.0, prof.foot - w), hi = std::min(length, prof.foot + w);
      if (!(lo < hi)) continue;
      const bool dup = std::any_of(found.begin(), found.end(), [&](const Crossing& c) {
        return c.center == img.center && hyp_distance(c.image.base(), lifted.base()) < 1e-6;
      });
      if (!dup) found.push_back({img.center, lo, hi, prof.offset, prof.foot, lifted});
    }
  }
  std::sort(found.begin(), found.end(), [](const Crossing& a, const Crossing& b) {
    return a.lo != b.lo ? a.lo < b.lo : a.center < b.center;
  });
  if (steps_per_unit <= 0.0) steps_per_unit = 8.0 / radius_;
  return Footprint(this, rho, length, backward, std::move(found), tolerance, steps_per_unit);
}

std::shared_ptr<const RandomPotential> RandomPotential::from_centers(const NetParams& params,
                                                                     std::vector<PhasePoint> centers,
                                                                     std::vector<double> omegas) {
  if (centers.size() != omegas.size()) throw ValidationError("centres and weights differ in length");
  std::shared_ptr<RandomPotential> p(new RandomPotential());
  p->params_ = params;
  p->radius_ = std::pow(params.h, params.beta);
  p->separation_ = 0.0;
  p->centers_ = std::move(centers);
  p->omegas_ = std::move(omegas);
  p->index_images();
  return p;
}

std::shared_ptr<const RandomPotential> build_net(const NetParams& params) {
  if (!(params.beta > 0.0 && params.beta < 0.5)) {
    std::ostringstream os;
    os << "beta = " << params.beta << " is outside (0, 1/2)";
    throw AdmissibilityError(os.str());
  }
  if (!(params.h > 0.0)) throw AdmissibilityError("h must be positive");
  if (!(params.mesh_fraction > 0.0 && params.mesh_fraction <= 0.5)) {
    throw ConfigError("mesh_fraction must lie in (0, 1/2]");
  }
  const double r = std::pow(params.h, params.beta);
  const double m = params.mesh_fraction * r;
  const bool symbol = params.kase == PotentialCase::symbol;
  const double cover = symbol ? m * std::sqrt(1.25) : m;
  const double sep = r - cover;
  const double rc = group().config().circumradius;

  // Candidate grid: hyperbolic polar rings of spacing m, arc spacing <= m,
  // times an angle grid of spacing <= m in the symbol case.
  std::vector<PhasePoint> candidates;
  const int n_angles = symbol ? static_cast<int>(std::ceil(kTwoPi / m)) : 1;
  for (int k = 0;; ++k) {
    const double rho = k * m;
    if (rho > rc + m) break;
    const int n = k == 0 ? 1 : static_cast<int>(std::ceil(kTwoPi * std::sinh(rho) / m));
    for (int i = 0; i < n; ++i) {
      const DiskPoint z(std::polar(std::tanh(0.5 * rho), kTwoPi * i / n));
      if (!group().in_domain(z, 1e-12)) continue;
      for (int a = 0; a < n_angles; ++a) candidates.emplace_back(z, symbol ? -kPi + kTwoPi * (a + 0.5) / n_angles : 0.0);
    }
  }

  std::vector<PhasePoint> centers;
  std::vector<PhasePoint> accepted_images;
  detail::DiskGrid grid(0.5 * std::tanh(0.5 * std::max(sep, 1e-3)));
  for (const PhasePoint& cand : candidates) {
    bool ok = true;
    for (int idx : grid.at(cand.base().z())) {
      if (distance(params.kase, accepted_images[idx], cand) < sep) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    centers.push_back(cand);
    for_each_image(cand, sep, [&](const PhasePoint& img, double) {
      grid.insert(static_cast<int>(accepted_images.size()), img.base().z(), sep);
      accepted_images.push_back(img);
    });
  }

  std::shared_ptr<RandomPotential> p(new RandomPotential());
  p->params_ = params;
  p->radius_ = r;
  p->separation_ = sep;
  p->centers_ = std::move(centers);
  p->omegas_.resize(p->centers_.size());
  for (std::size_t j = 0; j < p->omegas_.size(); ++j) p->omegas_[j] = draw_omega(params.omega, params.seed, j);
  p->index_images();
  return p;
}

// --- Footprint ---------------------------------------------------------------

Footprint::Footprint(const RandomPotential* potential, const PhasePoint& rho, double length,
                     bool backward, std::vector<Crossing> crossings, double tolerance,
                     double steps_per_unit)
    : potential_(potential),
      rho_(rho),
      length_(length),
      backward_(backward),
      crossings_(std::move(crossings)),
      tolerance_(tolerance),
      steps_per_unit_(steps_per_unit) {}

PhasePoint Footprint::phase_at(double s) const {
  return geodesic_flow(rho_, backward_ ? -s : s);
}

double Footprint::integrate(const Crossing& c, double a, double b) const {
  a = std::max(a, c.lo);
  b = std::min(b, c.hi);
  if (!(a < b)) return 0.0;
  const double r = potential_->radius();
  const BumpProfile& chi = potential_->params().profile;

  if (potential_->kase() == PotentialCase::base) {
    // Closed-form distance profile; split where the profile leaves its plateau.
    const GeodesicSegment::Profile prof{c.offset, c.foot};
    auto f = [&](double s) { return chi(prof.distance_at(s) / r); };
    std::vector<double> cuts{a, b};
    const double edge = chi.flat_until() * r;
    if (edge > 0.0 && c.offset < edge) {
      const double w = std::acosh(std::cosh(edge) / std::cosh(c.offset));
      for (double s : {c.foot - w, c.foot + w}) {
        if (s > a && s < b) cuts.push_back(s);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    using GL = boost::math::quadrature::gauss<double, 20>;
    auto composite = [&](double lo, double hi, int n) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += GL::integrate(f, lo + (hi - lo) * i / n, lo + (hi - lo) * (i + 1) / n);
      return sum;
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      int n = 2;
      double coarse = composite(cuts[i], cuts[i + 1], n);
      for (int it = 0;; ++it) {
        n *= 2;
        const double fine = composite(cuts[i], cuts[i + 1], n);
        if (std::abs(fine - coarse) <= tolerance_) {
          total += fine;
          break;
        }
        if (it >= kMaxHalvings) {
          std::ostringstream os;
          os << "bump line integral did not converge: step-halving difference " << std::abs(fine - coarse);
          throw ToleranceError(os.str());
        }
        coarse = fine;
      }
    }
    return total;
  }

  // Symbol case: composite Simpson with step halving on the phase-space bump.
  auto f = [&](double s) { return potential_->bump_value(c.image, phase_at(s)); };
  int n = std::max(64, 2 * static_cast<int>(std::ceil(0.5 * steps_per_unit_ * (b - a))));
  auto simpson = [&](int steps) {
    const double hstep = (b - a) / steps;
    double sum = f(a) + f(b);
    for (int i = 1; i < steps; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * hstep);
    return sum * hstep / 3.0;
  };
  double coarse = simpson(n);
  for (int it = 0;; ++it) {
    n *= 2;
    const double fine = simpson(n);
    if (std::abs(fine - coarse) <= 15.0 * tolerance_) return fine + (fine - coarse) / 15.0;
    if (it >= kMaxHalvings) {
      std::ostringstream os;
      os << "phase-space bump integral did not converge: step-halving difference " << std::abs(fine - coarse);
      throw ToleranceError(os.str());
    }
    coarse = fine;
  }
}

std::vector<std::pair<int, double>> Footprint::weights(
    std::span<const std::pair<double, double>> excised) const {
  std::map<int, double> acc;
  for (const Crossing& c : crossings_) {
    double cursor = c.lo;
    double sum = 0.0;
    for (const auto& [e0, e1] : excised) {
      if (e1 <= cursor) continue;
      if (e0 >= c.hi) break;
      if (e0 > cursor) sum += integrate(c, cursor, e0);
      cursor = std::max(cursor, e1);
      if (cursor >= c.hi) break;
    }
    if (cursor < c.hi) sum += integrate(c, cursor, c.hi);
    acc[c.center] += sum;
  }
  return {acc.begin(), acc.end()};
}

// --- Hypotheses ----------------------------------------------------------------

bool AdmissibilityReport::all_conditions() const {
  return delta_small && delta_large && base_condition;
}

ParameterConditions parameter_conditions(double h, double beta, double delta, double eps0) {
  if (delta == 0.0) return {true, true, true};
  return {delta * std::pow(h, -2.0 * beta - eps0) <= 1.0,
          delta * delta * std::pow(h, beta - 2.0) >= std::pow(h, -eps0),
          delta * std::pow(h, beta - 1.0) <= std::pow(h, eps0)};
}

AdmissibilityReport verify_hypotheses(const RandomPotential& p, double delta, double eps0, double T,
                                      int overlap_probes, int geodesics) {
  if (!(T >= 1.0)) throw PreconditionError("line-integral horizon T must be at least 1");
  AdmissibilityReport rep;
  rep.h = p.h();
  rep.beta = p.beta();
  rep.delta = delta;
  rep.eps0 = eps0;
  rep.horizon = T;
  rep.profile = p.params().profile.name();
  const auto cond = parameter_conditions(p.h(), p.beta(), delta, eps0);
  rep.delta_small = cond.delta_small;
  rep.delta_large = cond.delta_large;
  rep.base_condition = p.kase() == PotentialCase::symbol ? true : cond.base_condition;

  const double rc = group().config().circumradius;
  CounterRng rng(p.params().seed, stream::kProbes + 1);
  auto random_phase = [&]() {
    for (;;) {
      const double rad = std::tanh(0.5 * rc) * std::sqrt(rng.uniform());
      const DiskPoint z(std::polar(rad, rng.uniform(-kPi, kPi)));
      const double a = rng.uniform(-kPi, kPi);
      if (group().in_domain(z)) return PhasePoint(z, a);
    }
  };

  rep.overlap_probes = overlap_probes;
  for (int i = 0; i < overlap_probes; ++i) {
    rep.overlap_max = std::max(rep.overlap_max, static_cast<int>(p.active(random_phase()).size()));
  }

  // Directional derivatives of one bump along random geodesics through it.
  const double r = p.radius();
  const PhasePoint c = p.centers().empty() ? PhasePoint() : p.centers().front();
  rep.ck_ratios.assign(3, 0.0);
  const double e = 1e-2 * r;
  for (int line = 0; line < 50 && !p.centers().empty(); ++line) {
    const double off = r * rng.uniform();
    const PhasePoint through = geodesic_flow(PhasePoint(c.base(), rng.uniform(-kPi, kPi)), off);
    const PhasePoint rho(through.base(), rng.uniform(-kPi, kPi));
    auto f = [&](double s) { return p.bump_value(c, geodesic_flow(rho, s)); };
    for (int i = 0; i <= 200; ++i) {
      const double s = -2.2 * r + 4.4 * r * i / 200;
      const double fm2 = f(s - 2 * e), fm1 = f(s - e), f0 = f(s), fp1 = f(s + e), fp2 = f(s + 2 * e);
      const double d1 = (fp1 - fm1) / (2 * e);
      const double d2 = (fp1 - 2 * f0 + fm1) / (e * e);
      const double d3 = (fp2 - 2 * fp1 + 2 * fm1 - fm2) / (2 * e * e * e);
      rep.ck_ratios[0] = std::max(rep.ck_ratios[0], std::abs(d1) * r);
      rep.ck_ratios[1] = std::max(rep.ck_ratios[1], std::abs(d2) * r * r);
      rep.ck_ratios[2] = std::max(rep.ck_ratios[2], std::abs(d3) * r * r * r);
    }
  }

  rep.line_integral_samples = geodesics;
  rep.line_integral_min = std::numeric_limits<double>::infinity();
  for (int g = 0; g < geodesics; ++g) {
    const Footprint fp = p.footprint(random_phase(), T, false, 1e-9);
    double sum = 0.0;
    for (const auto& [j, w] : fp.weights()) sum += w;
    rep.line_integral_min = std::min(rep.line_integral_min, sum / T);
  }
  if (geodesics == 0) rep.line_integral_min = 0.0;
  return rep;
}

}  // namespace hypwave
