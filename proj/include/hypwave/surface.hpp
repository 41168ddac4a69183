#pragma once

// The Bolza surface: the genus-2 quotient of the disk by the group generated
// by the side pairings of the regular octagon with interior angles pi/4.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "hypwave/geometry.hpp"
#include "hypwave/rng.hpp"

namespace hypwave {

using Word = std::vector<std::uint8_t>;

struct GroupElement {
  MobiusMap map;
  Word word;             // generator indices, map = g[w0] * g[w1] * ...
  double displacement;   // hyp_distance(0, map(0))
};

struct SurfaceConfig {
  double injectivity_radius = 0.0;  // half the systole measured at the origin
  double volume = 0.0;              // 4 pi by Gauss-Bonnet
  double inradius = 0.0;            // centre to side midpoint of the octagon
  double circumradius = 0.0;        // centre to vertex
  std::array<DiskPoint, 8> vertices{};
};

struct Reduction {
  DiskPoint point;  // representative in the closed fundamental octagon
  MobiusMap lift;   // lift.apply(point) reproduces the input
  int steps = 0;
};

class FuchsianGroup {
 public:
  static constexpr double kDefaultMaxRadius = 18.0;
  static constexpr std::size_t kDefaultMaxElements = 20'000'000;

  FuchsianGroup();

  /// Process-wide instance; immutable apart from its internally locked ball cache.
  static const FuchsianGroup& bolza();

  /// g[k] translates the origin towards angle k pi / 4; g[k + 4] = g[k]^-1.
  const std::array<MobiusMap, 8>& side_pairings() const { return generators_; }
  static int inverse_index(int k) { return (k + 4) % 8; }
  /// g0 g1^-1 g2 g3^-1 g0^-1 g1 g2^-1 g3, which must be the identity.
  MobiusMap relator() const;
  const SurfaceConfig& config() const { return config_; }

  bool in_domain(const DiskPoint& z, double tolerance = 1e-12) const;
  /// Greedy descent towards the origin; faces g[4..7] within 1e-9 are
  /// pushed to their partners g[0..3].
  Reduction reduce(const DiskPoint& z) const;
  /// Distance on the quotient between two points.
  double quotient_distance(const DiskPoint& z, const DiskPoint& w) const;

  /// All elements with displacement <= radius, shortlex ordered. Throws
  /// HorizonTooLargeError above max_radius and ResourceError past the
  /// element budget.
  std::shared_ptr<const std::vector<GroupElement>> ball(double radius) const;

  double max_radius() const { return max_radius_; }
  void set_limits(double max_radius, std::size_t max_elements);

 private:
  std::vector<GroupElement> build_ball(double radius) const;

  std::array<MobiusMap, 8> generators_;
  std::array<DiskPoint, 8> neighbour_centres_;  // g[k](0)
  SurfaceConfig config_;
  double max_radius_ = kDefaultMaxRadius;
  std::size_t max_elements_ = kDefaultMaxElements;

  mutable std::mutex cache_mutex_;
  mutable double cached_radius_ = -1.0;
  mutable std::shared_ptr<const std::vector<GroupElement>> cached_ball_;
};

/// Free-function spellings of the group queries.
Reduction reduce(const DiskPoint& z);
std::vector<GroupElement> group_ball(double radius);

/// Point of the fundamental octagon, uniform for the hyperbolic area.
DiskPoint uniform_point(CounterRng& rng);

}  // namespace hypwave
