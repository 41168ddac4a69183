#include "hypwave/berry.hpp"

#include <cmath>
#include <sstream>

#include "hypwave/errors.hpp"
#include "hypwave/rng.hpp"

namespace hypwave {

double kernel(const BerryKernel& k, double r) {
  if (!(r >= 0.0)) throw ValidationError("kernel separation must be non-negative");
  if (r == 0.0) return k.lambda;
  // The trapezoid error is governed by the Bessel tail beyond n/2 terms,
  // negligible once n exceeds e r / 2 by a margin.
  const int n = 64 + 4 * static_cast<int>(std::ceil(r));
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::cos(r * std::cos(kTwoPi * i / n));
  return k.lambda * s / n;
}

std::vector<Complex> sample_berry(const BerryKernel& k, int n_waves, std::uint64_t seed, std::uint64_t draw,
                                  std::span<const Vec2> grid) {
  if (n_waves < kMinBerryWaves) {
    std::ostringstream os;
    os << "the Berry sampler needs at least " << kMinBerryWaves << " waves, got " << n_waves;
    throw PreconditionError(os.str());
  }
  if (!(k.lambda >= 0.0)) throw ValidationError("lambda must be non-negative");
  CounterRng rng(seed, stream::kBerry + draw);
  const double scale = std::sqrt(k.lambda / (2.0 * n_waves));
  std::vector<Vec2> xi(n_waves);
  std::vector<Complex> c(n_waves);
  for (int j = 0; j < n_waves; ++j) {
    xi[j] = Vec2::from_angle(kTwoPi * rng.uniform());
    const double re = rng.normal();
    const double im = rng.normal();
    c[j] = scale * Complex(re, im);
  }
  std::vector<Complex> out(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    Complex s = 0.0;
    for (int j = 0; j < n_waves; ++j) s += c[j] * std::polar(1.0, xi[j].dot(grid[g]));
    out[g] = s;
  }
  return out;
}

}  // namespace hypwave
