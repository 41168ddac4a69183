#pragma once

// Reference random wave: the stationary isotropic monochromatic complex
// Gaussian field on R^2 with covariance lambda J0(|y - y'|).

#include <cstdint>
#include <span>
#include <vector>

#include "hypwave/geometry.hpp"

namespace hypwave {

struct BerryKernel {
  double lambda = 1.0;  // E|F(0)|^2
  int dimension = 2;
};

/// lambda (1 / 2pi) int_0^{2pi} cos(r cos a) da by the periodic trapezoid
/// rule, which converges geometrically for this analytic integrand; the node
/// count grows with r so the error stays below 1e-12. Pre: r >= 0.
double kernel(const BerryKernel& k, double r);

inline constexpr int kMinBerryWaves = 64;

/// One draw of sum_j c_j e^{i xi_j . y} with xi_j uniform on the unit circle
/// and c_j centred circular complex Gaussians with E|c_j|^2 = lambda / n.
/// Draw d uses the stream (seed, kBerry + d). Pre: n_waves >= 64.
std::vector<Complex> sample_berry(const BerryKernel& k, int n_waves, std::uint64_t seed, std::uint64_t draw,
                                  std::span<const Vec2> grid);

}  // namespace hypwave
