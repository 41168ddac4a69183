#pragma once

#include <string>

namespace hypwave {

/// Radial cutoff profile chi on [0, 1], zero for s >= 1.
///
/// `poly`:    (1 - s^2)^4.
/// `plateau`: 1 on [0, p], then 1 - S((s - p) / (1 - p)) with the C^3
///            smoothstep S(u) = 35u^4 - 84u^5 + 70u^6 - 20u^7.
struct BumpProfile {
  enum class Kind { poly, plateau };

  Kind kind = Kind::poly;
  double plateau = 0.0;  // p, only used by `plateau`

  static BumpProfile poly4() { return {}; }
  static BumpProfile with_plateau(double p);
  /// Parses "poly" or "plateau"; throws ConfigError otherwise.
  static BumpProfile parse(const std::string& kind, double plateau);

  double operator()(double s) const;
  /// Largest s at which the profile is still exactly 1 (0 for poly).
  double flat_until() const { return kind == Kind::plateau ? plateau : 0.0; }
  std::string name() const { return kind == Kind::plateau ? "plateau" : "poly"; }
};

}  // namespace hypwave
