#include "hypwave/bump.hpp"

#include "hypwave/errors.hpp"

namespace hypwave {

BumpProfile BumpProfile::with_plateau(double p) {
  if (!(p >= 0.0 && p < 1.0)) throw ConfigError("plateau fraction must lie in [0, 1)");
  return {Kind::plateau, p};
}

BumpProfile BumpProfile::parse(const std::string& kind, double plateau) {
  if (kind == "poly") return poly4();
  if (kind == "plateau") return with_plateau(plateau);
  throw ConfigError("unknown bump profile '" + kind + "' (expected poly or plateau)");
}

double BumpProfile::operator()(double s) const {
  s = s < 0.0 ? -s : s;
  if (s >= 1.0) return 0.0;
  if (kind == Kind::poly) {
    const double w = 1.0 - s * s;
    const double w2 = w * w;
    return w2 * w2;
  }
  if (s <= plateau) return 1.0;
  const double u = (s - plateau) / (1.0 - plateau);
  const double u4 = u * u * u * u;
  return 1.0 - u4 * (35.0 + u * (-84.0 + u * (70.0 - 20.0 * u)));
}

}  // namespace hypwave
