#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "hypwave/errors.hpp"
#include "hypwave/potential.hpp"
#include "hypwave/rng.hpp"
#include "hypwave/surface.hpp"

using namespace hypwave;

namespace {

const FuchsianGroup& G() { return FuchsianGroup::bolza(); }

PhasePoint random_phase(CounterRng& rng) {
  const double rv = std::tanh(0.5 * G().config().circumradius);
  for (;;) {
    const DiskPoint z(std::polar(rv * std::sqrt(rng.uniform()), kTwoPi * rng.uniform()));
    if (G().in_domain(z, 0.0)) return PhasePoint(z, rng.uniform(-kPi, kPi));
  }
}

// q_w at a point of the octagon by scanning every translate of every centre.
double brute_q(const RandomPotential& p, const PhasePoint& rho, std::span<const double> omegas) {
  static const auto translates = group_ball(2.0 * G().config().circumradius + 1.0);
  double q = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : translates) {
      const PhasePoint img = apply(g.map, p.centers()[j]);
      const double d = p.kase() == PotentialCase::base ? hyp_distance(img.base(), rho.base())
                                                        : phase_distance(img, rho);
      best = std::min(best, d);
    }
    q += omegas[j] * p.params().profile(best / p.radius());
  }
  return q;
}

// Adaptive Gauss-Kronrod of q along the trajectory on panels of width r / 2.
double line_integral_oracle(const RandomPotential& p, const PhasePoint& rho, double T, bool backward,
                            std::span<const double> omegas, double a = 0.0, double b = -1.0) {
  if (b < 0.0) b = T;
  auto f = [&](double s) { return p.eval_q(geodesic_flow(rho, backward ? -s : s), omegas); };
  const int panels = static_cast<int>(std::ceil((b - a) / (0.5 * p.radius())));
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a + (b - a) * i / panels, a + (b - a) * (i + 1) / panels, 15, 1e-11);
  }
  return sum;
}

double sum_weights(const std::vector<std::pair<int, double>>& w, std::span<const double> omegas) {
  double s = 0.0;
  for (const auto& [j, v] : w) s += omegas[j] * v;
  return s;
}

}  // namespace

TEST_CASE("net is separated and covers the surface at the bump radius") {
  for (double h : {0.1, 0.02}) {
    NetParams np;
    np.h = h;
    const auto p = build_net(np);
    CHECK(p->radius() == doctest::Approx(std::pow(h, 0.3)));
    for (std::size_t i = 0; i < p->size(); ++i) {
      CHECK(G().in_domain(p->centers()[i].base(), 1e-9));
      for (std::size_t j = i + 1; j < p->size(); ++j) {
        CHECK(G().quotient_distance(p->centers()[i].base(), p->centers()[j].base()) >=
              p->separation() - 1e-9);
      }
    }
    CounterRng rng(31, 0);
    for (int k = 0; k < 200; ++k) {
      const DiskPoint x = random_phase(rng).base();
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : p->centers()) best = std::min(best, G().quotient_distance(x, c.base()));
      CHECK(best <= p->radius());
    }
  }
}

TEST_CASE("potential evaluation matches a brute-force scan of translates") {
  for (auto kase : {PotentialCase::base, PotentialCase::symbol}) {
    NetParams np;
    np.h = kase == PotentialCase::base ? 0.02 : 0.3;
    np.kase = kase;
    np.seed = 5;
    np.mesh_fraction = kase == PotentialCase::base ? 0.125 : 0.25;
    np.profile = BumpProfile::with_plateau(0.2);
    const auto p = build_net(np);
    CounterRng rng(32, 0);
    for (int k = 0; k < 60; ++k) {
      const PhasePoint rho = random_phase(rng);
      CHECK(p->eval_q(rho) == doctest::Approx(brute_q(*p, rho, p->omegas())).epsilon(1e-12));
    }
  }
}

TEST_CASE("potential is invariant under the deck group") {
  NetParams np;
  np.h = 0.05;
  const auto p = build_net(np);
  CounterRng rng(33, 0);
  const auto ball = group_ball(4.0);
  for (int k = 0; k < 40; ++k) {
    const PhasePoint rho = random_phase(rng);
    const auto& g = ball[1 + k % (ball.size() - 1)];
    CHECK(std::abs(p->eval_q(apply(g.map, rho)) - p->eval_q(rho)) < 1e-9);
  }
}

TEST_CASE("weights of a draw are reproducible and centred with unit variance") {
  NetParams np;
  np.h = 0.01;
  np.seed = 77;
  const auto p = build_net(np);
  CHECK(p->omegas_for_draw(0) == p->omegas());
  CHECK(p->omegas_for_draw(3) == build_net(np)->omegas_for_draw(3));
  CHECK(p->omegas_for_draw(3) != p->omegas_for_draw(4));
  double s = 0.0, s2 = 0.0;
  int n = 0;
  for (std::uint64_t d = 0; d < 400; ++d) {
    for (double w : p->omegas_for_draw(d)) {
      CHECK(std::abs(w) <= std::sqrt(3.0));
      s += w;
      s2 += w * w;
      ++n;
    }
  }
  CHECK(std::abs(s / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(s2 / n - 1.0) < 4.0 * std::sqrt(0.8 / n));
  CHECK(draw_omega(OmegaDistribution::constant, 1, 2) == 1.0);
  CHECK(draw_omega(OmegaDistribution::zero, 1, 2) == 0.0);
}

TEST_CASE("footprint line integrals match adaptive quadrature of the potential") {
  for (const auto& profile : {BumpProfile::poly4(), BumpProfile::with_plateau(0.2)}) {
    NetParams np;
    np.h = 0.01;
    np.seed = 9;
    np.profile = profile;
    const auto p = build_net(np);
    CounterRng rng(34, 0);
    for (int k = 0; k < 12; ++k) {
      const PhasePoint rho = random_phase(rng);
      const double T = 3.0 + rng.uniform();
      const bool backward = k % 2 == 0;
      const Footprint fp = p->footprint(rho, T, backward);
      const auto omegas = p->omegas_for_draw(k);
      CHECK(std::abs(sum_weights(fp.weights(), omegas) - line_integral_oracle(*p, rho, T, backward, omegas)) <
            1e-8);
      // Excising a window removes exactly the integral over it.
      const std::vector<std::pair<double, double>> cut{{0.4, 1.1}, {2.0, 2.3}};
      const double kept = line_integral_oracle(*p, rho, T, backward, omegas, 0.0, 0.4) +
                          line_integral_oracle(*p, rho, T, backward, omegas, 1.1, 2.0) +
                          line_integral_oracle(*p, rho, T, backward, omegas, 2.3, T);
      CHECK(std::abs(sum_weights(fp.weights(cut), omegas) - kept) < 1e-8);
    }
  }
}

TEST_CASE("symbol-case footprint matches adaptive quadrature") {
  NetParams np;
  np.h = 0.3;
  np.kase = PotentialCase::symbol;
  np.mesh_fraction = 0.25;
  np.seed = 4;
  const auto p = build_net(np);
  CounterRng rng(35, 0);
  for (int k = 0; k < 6; ++k) {
    const PhasePoint rho = random_phase(rng);
    const Footprint fp = p->footprint(rho, 2.0, true, 1e-11);
    CHECK(std::abs(sum_weights(fp.weights(), p->omegas()) - line_integral_oracle(*p, rho, 2.0, true, p->omegas())) <
          1e-8);
  }
}

TEST_CASE("every crossing lies where the trajectory is inside the bump") {
  NetParams np;
  np.h = 0.02;
  const auto p = build_net(np);
  CounterRng rng(36, 0);
  for (int k = 0; k < 10; ++k) {
    const PhasePoint rho = random_phase(rng);
    const Footprint fp = p->footprint(rho, 4.0, true);
    for (const auto& c : fp.crossings()) {
      const double mid = 0.5 * (c.lo + c.hi);
      CHECK(hyp_distance(fp.phase_at(mid).base(), c.image.base()) < p->radius());
      if (c.lo > 0.0) CHECK(hyp_distance(fp.phase_at(c.lo).base(), c.image.base()) == doctest::Approx(p->radius()));
      if (c.hi < 4.0) CHECK(hyp_distance(fp.phase_at(c.hi).base(), c.image.base()) == doctest::Approx(p->radius()));
    }
  }
}

TEST_CASE("net construction rejects inadmissible parameters") {
  NetParams np;
  np.beta = 0.6;
  CHECK_THROWS_AS(build_net(np), AdmissibilityError);
  np.beta = 0.0;
  CHECK_THROWS_AS(build_net(np), AdmissibilityError);
  np.beta = 0.3;
  np.h = -1.0;
  CHECK_THROWS_AS(build_net(np), AdmissibilityError);
  np.h = 0.05;
  np.mesh_fraction = 0.0;
  CHECK_THROWS_AS(build_net(np), ConfigError);
  CHECK_THROWS_AS(BumpProfile::with_plateau(1.0), ConfigError);
  CHECK_THROWS_AS(parse_potential_case("fibre"), ConfigError);
}

TEST_CASE("parameter inequalities") {
  // delta = h^alpha with beta = 0.3, eps0 = 0.05 is admissible for 0.75 <= alpha <= 0.825.
  for (double h : {0.05, 0.01}) {
    const auto ok = parameter_conditions(h, 0.3, std::pow(h, 0.8), 0.05);
    CHECK((ok.delta_small && ok.delta_large && ok.base_condition));
    CHECK_FALSE(parameter_conditions(h, 0.3, std::pow(h, 0.9), 0.05).delta_large);
    CHECK_FALSE(parameter_conditions(h, 0.3, std::pow(h, 0.6), 0.05).delta_small);
    CHECK_FALSE(parameter_conditions(h, 0.3, std::pow(h, 0.7), 0.05).base_condition);
  }
  const auto zero = parameter_conditions(0.01, 0.3, 0.0, 0.05);
  CHECK((zero.delta_small && zero.delta_large && zero.base_condition));
}

TEST_CASE("hypothesis audit") {
  NetParams np;
  std::vector<AdmissibilityReport> reps;
  for (double h : {0.05, 0.02, 0.01}) {
    np.h = h;
    const auto p = build_net(np);
    reps.push_back(verify_hypotheses(*p, std::pow(h, 0.8), 0.05, 5.0, 4000, 50));
  }
  // max |chi'| for (1 - s^2)^4 is at s = 1/sqrt(7).
  const double s = 1.0 / std::sqrt(7.0);
  const double d1 = 8.0 * s * std::pow(1.0 - s * s, 3);
  for (const auto& r : reps) {
    CHECK(r.all_conditions());
    CHECK(r.overlap_max >= 1);
    CHECK(r.overlap_max <= reps.front().overlap_max + 1);
    CHECK(r.ck_ratios[0] <= d1 * 1.001);
    CHECK(r.ck_ratios[0] >= d1 * 0.95);
    for (int k = 0; k < 3; ++k) CHECK(r.ck_ratios[k] == doctest::Approx(reps.front().ck_ratios[k]).epsilon(0.05));
    CHECK(r.line_integral_min > 0.1);
  }
  CHECK_THROWS_AS(verify_hypotheses(*build_net(np), 0.0, 0.05, 0.5), PreconditionError);
}
