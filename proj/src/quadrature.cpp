#include "twave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>

#include "twave/error.hpp"

namespace twave {

namespace {

GaussRule build_rule(std::size_t n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

std::shared_ptr<const GaussRule> gauss_legendre(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::Domain, "Gauss rule needs at least one node");
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const GaussRule>(build_rule(n));
  return slot;
}

QuadratureResult integrate_smooth(const std::function<void(double, std::vector<double>&)>& integrand,
                                  std::size_t components, double lo, double hi,
                                  std::size_t start_nodes, double rel_tol, double abs_floor,
                                  std::size_t max_nodes) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  auto apply = [&](std::size_t n) {
    const auto rule = gauss_legendre(n);
    // sum[c] is the integral, sum[components + c] the integral of its magnitude
    std::vector<double> sum(2 * components, 0.0);
    std::vector<double> buffer(components, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      integrand(mid + half * rule->nodes[i], buffer);
      for (std::size_t c = 0; c < components; ++c) {
        sum[c] += rule->weights[i] * buffer[c];
        sum[components + c] += rule->weights[i] * std::abs(buffer[c]);
      }
    }
    for (auto& s : sum) s *= half;
    return sum;
  };

  QuadratureResult result;
  std::size_t n = start_nodes;
  auto previous = apply(n);
  while (true) {
    const std::size_t next = 2 * n;
    auto current = apply(next);
    double change = 0.0;
    for (std::size_t c = 0; c < components; ++c) {
      // cancelling integrands (odd moments over symmetric orbits) are judged against |f|
      const double scale = std::max(std::abs(current[c]), current[components + c]) + abs_floor;
      change = std::max(change, std::abs(current[c] - previous[c]) / scale);
    }
    result.values.assign(current.begin(), current.begin() + static_cast<std::ptrdiff_t>(components));
    result.nodes = next;
    result.change = change;
    if (change < rel_tol) return result;
    if (next >= max_nodes) {
      throw Error(ErrorKind::QuadratureNonconvergence, "Gauss-Legendre doubling did not settle");
    }
    previous = std::move(current);
    n = next;
  }
}

double periodic_trapezoid(const std::vector<double>& samples, double h) {
  double sum = 0.0;
  for (double s : samples) sum += s;
  return sum * h;
}

}  // namespace twave
