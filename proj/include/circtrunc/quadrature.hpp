#ifndef CIRCTRUNC_QUADRATURE_HPP
#define CIRCTRUNC_QUADRATURE_HPP

#include <cmath>
#include <cstddef>

#include "circtrunc/geometry.hpp"

namespace circtrunc {

struct QuadratureResult {
  double value = 0.0;
  std::size_t nodes = 0;
  bool converged = false;
};

/// Integral of a 2pi-periodic function over one period by the trapezoid
/// rule, doubling the node count until successive estimates agree to
/// `abs_tol + rel_tol * |value|`. Exponentially convergent for smooth
/// periodic integrands.
template <typename F>
QuadratureResult periodic_trapezoid(F&& f, double abs_tol = 1e-12, double rel_tol = 1e-12,
                                    std::size_t min_nodes = 64, std::size_t max_nodes = 1u << 20) {
  std::size_t n = min_nodes;
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sum += f(kTwoPi * static_cast<double>(k) / static_cast<double>(n));
  }
  double estimate = sum * kTwoPi / static_cast<double>(n);
  while (n < max_nodes) {
    // Refinement only evaluates the new midpoints.
    double mid = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      mid += f(kTwoPi * (static_cast<double>(k) + 0.5) / static_cast<double>(n));
    }
    sum += mid;
    n *= 2;
    const double refined = sum * kTwoPi / static_cast<double>(n);
    if (std::abs(refined - estimate) <= abs_tol + rel_tol * std::abs(refined)) {
      return {refined, n, true};
    }
    estimate = refined;
  }
  return {estimate, n, false};
}

}  // namespace circtrunc

#endif  // CIRCTRUNC_QUADRATURE_HPP
