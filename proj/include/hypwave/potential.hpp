#pragma once

// Random perturbation q_w = sum_j w_j q_j on a maximal separated net of the
// surface (base case) or of its unit cotangent bundle (symbol case), with
// q_j = chi(dist(rho_j, .) / h^beta).

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hypwave/bump.hpp"
#include "hypwave/geometry.hpp"

namespace hypwave {

namespace detail {
class DiskGrid;
}

enum class PotentialCase { base, symbol };
enum class OmegaDistribution { uniform, constant, zero };

const char* to_string(PotentialCase c);
const char* to_string(OmegaDistribution d);
PotentialCase parse_potential_case(const std::string& s);
OmegaDistribution parse_omega_distribution(const std::string& s);

struct NetParams {
  double h = 0.05;
  double beta = 0.3;
  PotentialCase kase = PotentialCase::base;
  std::uint64_t seed = 0;
  BumpProfile profile;
  OmegaDistribution omega = OmegaDistribution::uniform;
  /// Candidate mesh as a fraction of h^beta. Accepted centres are
  /// (1 - cover) h^beta separated so that the covering radius stays <= h^beta.
  double mesh_fraction = 0.125;
};

/// One bump crossing of a geodesic segment: the parameter window where the
/// base point is within the bump radius of a lifted centre.
struct Crossing {
  int center = 0;
  double lo = 0.0, hi = 0.0;  // window clipped to [0, length]
  double offset = 0.0;        // distance from the lifted centre to the full geodesic
  double foot = 0.0;          // parameter of the perpendicular foot
  PhasePoint image;           // lifted centre (direction used in the symbol case)
};

/// All crossings of one segment, from which line integrals of q_j over any
/// sub-window can be evaluated. The segment follows rho forwards or, when
/// `backward`, traces s -> Phi^{-s}(rho).
class Footprint {
 public:
  Footprint() = default;
  Footprint(const class RandomPotential* potential, const PhasePoint& rho, double length,
            bool backward, std::vector<Crossing> crossings, double tolerance,
            double steps_per_unit = 0.0);

  const std::vector<Crossing>& crossings() const { return crossings_; }
  double length() const { return length_; }
  bool backward() const { return backward_; }
  /// Phase point at parameter s along the traced trajectory.
  PhasePoint phase_at(double s) const;

  /// Sparse (centre, integral of q_j over [0, length] minus `excised`),
  /// sorted by centre. `excised` must be sorted and disjoint.
  std::vector<std::pair<int, double>> weights(
      std::span<const std::pair<double, double>> excised = {}) const;
  /// Integral of q_j for the crossing over [a, b] (clipped to its window).
  double integrate(const Crossing& c, double a, double b) const;

 private:
  const class RandomPotential* potential_ = nullptr;
  PhasePoint rho_;
  double length_ = 0.0;
  bool backward_ = false;
  std::vector<Crossing> crossings_;
  double tolerance_ = 1e-10;
  double steps_per_unit_ = 0.0;  // initial Simpson density in the symbol case
};

class RandomPotential {
 public:
  const NetParams& params() const { return params_; }
  double h() const { return params_.h; }
  double beta() const { return params_.beta; }
  double radius() const { return radius_; }
  double separation() const { return separation_; }
  PotentialCase kase() const { return params_.kase; }
  std::size_t size() const { return centers_.size(); }

  /// Centres in the fundamental octagon; the angle is meaningful only in the
  /// symbol case.
  const std::vector<PhasePoint>& centers() const { return centers_; }
  /// Weights of draw 0.
  const std::vector<double>& omegas() const { return omegas_; }
  /// Weights of draw d: keyed by seed ^ d, so draw 0 reproduces omegas().
  std::vector<double> omegas_for_draw(std::uint64_t draw) const;

  /// q_j of every bump whose support contains the point; lifted points are
  /// reduced first. In the base case only the base point matters.
  std::vector<std::pair<int, double>> active(const PhasePoint& rho) const;
  double eval_q(const PhasePoint& rho, std::span<const double> omegas) const;
  double eval_q(const PhasePoint& rho) const { return eval_q(rho, omegas_); }
  double eval_q(const DiskPoint& x) const { return eval_q(PhasePoint(x, 0.0)); }

  /// q_j(rho) for a single lifted centre image.
  double bump_value(const PhasePoint& image, const PhasePoint& rho) const;

  /// Crossings of the unit-speed trajectory of rho over [0, length]
  /// (backwards in time when `backward`). `tolerance` bounds the
  /// step-halving error estimate of every crossing integral. In the symbol
  /// case Simpson starts from max(64, steps_per_unit * window) steps, with
  /// steps_per_unit = 8 / h^beta when 0 is passed.
  Footprint footprint(const PhasePoint& rho, double length, bool backward,
                      double tolerance = 1e-10, double steps_per_unit = 0.0) const;

  friend std::shared_ptr<const RandomPotential> build_net(const NetParams& params);
  /// Rebuilds a potential from explicit centres and weights.
  static std::shared_ptr<const RandomPotential> from_centers(const NetParams& params,
                                                             std::vector<PhasePoint> centers,
                                                             std::vector<double> omegas);

 private:
  RandomPotential() = default;
  void index_images();

  struct Image {
    int center;
    PhasePoint at;
    double radius_from_origin;
  };

  NetParams params_;
  double radius_ = 0.0;
  double separation_ = 0.0;
  std::vector<PhasePoint> centers_;
  std::vector<double> omegas_;
  std::vector<Image> images_;  // sorted by radius_from_origin

  std::shared_ptr<const detail::DiskGrid> grid_;  // images by support
  double image_reach_ = 0.0;  // images kept up to circumradius + this
};

/// Greedy maximal net; throws AdmissibilityError unless 0 < beta < 1/2.
std::shared_ptr<const RandomPotential> build_net(const NetParams& params);

/// w_j of a draw for the given distribution.
double draw_omega(OmegaDistribution d, std::uint64_t seed, std::uint64_t index);

struct AdmissibilityReport {
  double h = 0.0, beta = 0.0, delta = 0.0, eps0 = 0.0, horizon = 0.0;
  std::string profile;
  int overlap_max = 0;
  int overlap_probes = 0;
  std::vector<double> ck_ratios;  // max |d^k q_j| h^{beta k}, k = 1..3
  double line_integral_min = 0.0; // min over sampled geodesics, divided by T
  int line_integral_samples = 0;
  bool delta_small = false;       // delta h^{-2 beta - eps0} <= 1
  bool delta_large = false;       // delta^2 h^{beta - 2} >= h^{-eps0}
  bool base_condition = false;    // delta h^{beta - 1} <= h^{eps0}
  bool all_conditions() const;
};

struct ParameterConditions {
  bool delta_small, delta_large, base_condition;
};
/// Evaluates the three parameter inequalities; delta = 0 is the unperturbed
/// reference and reports every condition as satisfied.
ParameterConditions parameter_conditions(double h, double beta, double delta, double eps0);

/// Pre: T >= 1.
AdmissibilityReport verify_hypotheses(const RandomPotential& p, double delta, double eps0,
                                      double T, int overlap_probes = 10'000,
                                      int geodesics = 64);

}  // namespace hypwave
