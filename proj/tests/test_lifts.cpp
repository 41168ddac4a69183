#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "hypwave/errors.hpp"
#include "hypwave/lifts.hpp"
#include "hypwave/rng.hpp"

using namespace hypwave;

namespace {

const double kInradius = std::acosh(1.0 + std::sqrt(2.0));

// Uniform point of the octagon for the hyperbolic area: rejection from the
// Euclidean disk through the vertices with density proportional to lambda^2.
DiskPoint uniform_in_domain(CounterRng& rng) {
  const double rv = std::tanh(0.5 * FuchsianGroup::bolza().config().circumradius);
  const double lmax = 4.0 / std::pow(1.0 - rv * rv, 2);
  for (;;) {
    const Complex z = std::polar(rv * std::sqrt(rng.uniform()), kTwoPi * rng.uniform());
    const double l2 = 4.0 / std::pow(1.0 - std::norm(z), 2);
    if (rng.uniform() * lmax > l2) continue;
    const DiskPoint x(z);
    if (FuchsianGroup::bolza().in_domain(x, 0.0)) return x;
  }
}

LagrangianState wide_state(double angle = 0.3) {
  LagrangianParams lp;
  lp.boundary_angle = angle;
  lp.amplitude_radius = 0.95 * kInradius;
  return LagrangianState(lp);
}

std::vector<Word> words(const LiftSet& s) {
  std::vector<Word> w;
  for (const auto& l : s.elements) w.push_back(l.word);
  return w;
}

}  // namespace

TEST_CASE("lift set agrees with a scan of a larger group ball") {
  const LagrangianState st = wide_state();
  CounterRng rng(21, 0);
  const auto ball = group_ball(9.5);
  for (int i = 0; i < 15; ++i) {
    const DiskPoint x = uniform_in_domain(rng);
    for (double t : {0.0, 1.0, 2.5, 4.0}) {
      std::vector<Word> expect;
      for (const auto& g : ball) {
        const DiskPoint lift = g.map.apply(x);
        const PhasePoint back = geodesic_flow(PhasePoint(lift, st.gradient_angle(lift)), -t);
        if (hyp_distance(back.base(), st.amplitude_center()) < st.amplitude_radius()) expect.push_back(g.word);
      }
      const LiftSet got = enumerate_lifts(x, t, st);
      CHECK(words(got) == expect);
      for (const auto& l : got.elements) {
        CHECK(hyp_distance(l.point, l.map.apply(x)) < 1e-12);
        CHECK(hyp_distance(l.landing, st.landing(l.point, t)) < 1e-12);
      }
    }
  }
}

TEST_CASE("t = 0 lift set is the identity inside the support and empty outside") {
  const LagrangianState st;
  const LiftSet in = enumerate_lifts(DiskPoint(Complex(0.05, 0.02)), 0.0, st);
  REQUIRE(in.size() == 1);
  CHECK(in.elements[0].word.empty());
  CHECK(enumerate_lifts(DiskPoint(Complex(0.6, 0.0)), 0.0, st).empty());
}

TEST_CASE("mean lift count equals e^t times the support area over the surface area") {
  // Integrating |A_{x,t}| over the surface gives the area of the t-forward
  // image of the amplitude disk, which the Busemann flow expands by e^t.
  const LagrangianState st = wide_state(1.9);
  const double disk_area = kTwoPi * (std::cosh(st.amplitude_radius()) - 1.0);
  CounterRng rng(22, 0);
  for (double t : {1.0, 2.3}) {
    const int n = 2000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double c = static_cast<double>(enumerate_lifts(uniform_in_domain(rng), t, st).size());
      sum += c;
      sum2 += c * c;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    const double expect = std::exp(t) * disk_area / (4.0 * kPi);
    CHECK(std::abs(mean - expect) < 4.0 * se);
  }
}

TEST_CASE("window lift set covers each fixed-time lift set in the window") {
  const LagrangianState st = wide_state();
  CounterRng rng(23, 0);
  for (int i = 0; i < 10; ++i) {
    const DiskPoint x = uniform_in_domain(rng);
    const LiftSet win = lifts_in_window(x, 1.5, 3.0, st);
    const auto w = words(win);
    for (double t : {1.5, 2.0, 2.5, 3.0}) {
      for (const auto& word : words(enumerate_lifts(x, t, st))) {
        CHECK(std::find(w.begin(), w.end(), word) != w.end());
      }
    }
  }
}

TEST_CASE("lift enumeration preconditions") {
  const LagrangianState st;
  CHECK_THROWS_AS(enumerate_lifts(DiskPoint(Complex(0.8, 0.0)), 1.0, st), DomainError);
  CHECK_THROWS_AS(enumerate_lifts(DiskPoint(), -1.0, st), PreconditionError);
  CHECK_THROWS_AS(lifts_in_window(DiskPoint(), 2.0, 1.0, st), PreconditionError);
}
