#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace twave {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached, thread-safe construction of the n-point Gauss-Legendre rule.
std::shared_ptr<const GaussRule> gauss_legendre(std::size_t n);

struct QuadratureResult {
  std::vector<double> values;  // one per integrand component
  std::size_t nodes = 0;       // size of the finest rule used
  double change = 0.0;         // relative change at the last doubling
};

/// Integrates a vector-valued smooth integrand over [lo, hi], doubling the node count
/// from `start_nodes` until every component changes by less than `rel_tol`
/// (relative to the larger of its magnitude and the integral of its absolute value, plus
/// `abs_floor`).
QuadratureResult integrate_smooth(const std::function<void(double, std::vector<double>&)>& integrand,
                                  std::size_t components, double lo, double hi,
                                  std::size_t start_nodes = 200, double rel_tol = 1e-12,
                                  double abs_floor = 1e-300, std::size_t max_nodes = 6400);

/// Periodic trapezoid rule over samples y_0..y_{n-1} of one period with spacing h.
double periodic_trapezoid(const std::vector<double>& samples, double h);

}  // namespace twave
