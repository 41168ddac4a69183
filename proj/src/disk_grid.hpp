#pragma once

// Uniform bucket grid over [-1, 1]^2 indexing hyperbolic balls by their
// Euclidean bounding boxes. Private to the library.

#include <algorithm>
#include <cmath>
#include <vector>

#include "hypwave/geometry.hpp"

namespace hypwave::detail {

/// The hyperbolic ball B(c, r) is the Euclidean disk returned here.
inline std::pair<Complex, double> euclidean_ball(Complex c, double r) {
  const double tau = std::tanh(0.5 * r);
  const double t2 = tau * tau;
  const double n = std::norm(c);
  const double den = 1.0 - t2 * n;
  return {c * (1.0 - t2) / den, tau * (1.0 - n) / den};
}

class DiskGrid {
 public:
  explicit DiskGrid(double cell) {
    n_ = std::clamp(static_cast<int>(std::ceil(2.0 / cell)), 1, 2048);
    cells_.resize(static_cast<std::size_t>(n_) * n_);
  }

  void insert(int id, Complex centre, double radius) {
    const auto [c, rho] = euclidean_ball(centre, radius);
    const int i0 = index(c.real() - rho), i1 = index(c.real() + rho);
    const int j0 = index(c.imag() - rho), j1 = index(c.imag() + rho);
    for (int i = i0; i <= i1; ++i) {
      for (int j = j0; j <= j1; ++j) cells_[static_cast<std::size_t>(i) * n_ + j].push_back(id);
    }
  }

  const std::vector<int>& at(Complex z) const {
    return cells_[static_cast<std::size_t>(index(z.real())) * n_ + index(z.imag())];
  }

 private:
  int index(double x) const {
    return std::clamp(static_cast<int>(std::floor((x + 1.0) * 0.5 * n_)), 0, n_ - 1);
  }

  int n_ = 1;
  std::vector<std::vector<int>> cells_;
};

}  // namespace hypwave::detail
