#include "twave/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "twave/error.hpp"

namespace twave {

Nonlinearity make_power_law(double p, double coefficient) {
  if (!(p >= 1.0)) {
    throw Error(ErrorKind::Domain, "power-law exponent must satisfy p >= 1");
  }
  if (coefficient == 0.0 || !std::isfinite(coefficient)) {
    throw Error(ErrorKind::Domain, "power-law coefficient must be finite and nonzero");
  }
  Nonlinearity nl;
  nl.f = [p, coefficient](double u) { return coefficient * std::pow(u, p + 1.0); };
  nl.fprime = [p, coefficient](double u) { return coefficient * (p + 1.0) * std::pow(u, p); };
  nl.fsecond = [p, coefficient](double u) {
    return coefficient * (p + 1.0) * p * std::pow(u, p - 1.0);
  };
  nl.F = [p, coefficient](double u) { return coefficient * std::pow(u, p + 2.0) / (p + 2.0); };
  std::ostringstream label;
  label << "power:" << p;
  if (coefficient != 1.0) label << "*" << coefficient;
  nl.label = label.str();
  return nl;
}

Nonlinearity make_nonlinearity(std::string_view spec) {
  if (spec == "kdv" || spec == "bbm") {
    auto nl = make_power_law(1.0);
    nl.label = std::string(spec);
    return nl;
  }
  if (spec == "mkdv") {
    auto nl = make_power_law(2.0, 1.0 / 3.0);
    nl.label = "mkdv";
    return nl;
  }
  constexpr std::string_view prefix = "power:";
  if (spec.substr(0, prefix.size()) == prefix) {
    const std::string rest(spec.substr(prefix.size()));
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != rest.size()) {
      throw Error(ErrorKind::Domain, "cannot parse power-law exponent in '" + std::string(spec) + "'");
    }
    return make_power_law(p);
  }
  throw Error(ErrorKind::Domain, "unknown nonlinearity '" + std::string(spec) + "'");
}

std::string_view to_string(Family family) {
  return family == Family::gkdv ? "gkdv" : "gbbm";
}

Family family_from_string(std::string_view name) {
  if (name == "gkdv") return Family::gkdv;
  if (name == "gbbm") return Family::gbbm;
  throw Error(ErrorKind::Domain, "unknown family '" + std::string(name) + "'");
}

void validate_params(const WaveParams& params) {
  if (!std::isfinite(params.a) || !std::isfinite(params.E) || !std::isfinite(params.c)) {
    throw Error(ErrorKind::Domain, "wave parameters must be finite");
  }
  if (params.family == Family::gkdv && !(params.c > 0.0)) {
    throw Error(ErrorKind::Domain, "gKdV wave speed must satisfy c > 0");
  }
  if (params.family == Family::gbbm && !(params.c > 1.0)) {
    throw Error(ErrorKind::Domain, "gBBM wave speed must satisfy c > 1");
  }
}

double kinetic_weight(const WaveParams& params) {
  return params.family == Family::gkdv ? 1.0 : params.c;
}

namespace {

double quadratic_coefficient(const WaveParams& params) {
  return params.family == Family::gkdv ? params.c : params.c - 1.0;
}

// Bisection to the floating-point resolution of the bracket. g(inside) > 0 >= g(outside).
template <class G>
double bisect_root(G&& g, double inside, double outside) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (inside + outside);
    if (mid == inside || mid == outside) break;
    if (g(mid) > 0.0) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  // Report the endpoint whose residual is smaller.
  return std::abs(g(inside)) <= std::abs(g(outside)) ? inside : outside;
}

struct Component {
  double lo;
  double hi;
  double u_min;
  bool bounded;
};

}  // namespace

double potential(const Nonlinearity& nl, const WaveParams& params, double u) {
  return nl.F(u) - 0.5 * quadratic_coefficient(params) * u * u - params.a * u;
}

double potential_prime(const Nonlinearity& nl, const WaveParams& params, double u) {
  return nl.f(u) - quadratic_coefficient(params) * u - params.a;
}

double potential_second(const Nonlinearity& nl, const WaveParams& params, double u) {
  return nl.fprime(u) - quadratic_coefficient(params);
}

PotentialWell find_turning_points(const Nonlinearity& nl, const WaveParams& params,
                                  std::optional<double> u_seed) {
  if (!std::isfinite(params.a) || !std::isfinite(params.E) || !std::isfinite(params.c)) {
    throw Error(ErrorKind::Domain, "wave parameters must be finite");
  }
  if (params.family == Family::gbbm && !(params.c > 0.0)) {
    throw Error(ErrorKind::Domain, "gBBM wave speed must be positive");
  }
  const double E = params.E;
  auto dV = [&](double u) { return potential_prime(nl, params, u); };
  auto gap = [&](double u) { return E - potential(nl, params, u); };

  const double center = u_seed.value_or(0.0);
  const double span = 1.0 + std::abs(params.a) + std::abs(params.c) + std::abs(E);
  const double tol_equal = 1e-12 * (1.0 + std::abs(E));
  constexpr int kGrid = 4000;
  constexpr int kMaxWiden = 6;

  bool saw_minimum = false;
  bool saw_degenerate = false;

  for (int widen = 0; widen <= kMaxWiden; ++widen) {
    const double half = 10.0 * span * std::ldexp(1.0, widen);
    const double lo = center - half;
    const double hi = center + half;
    const double h = (hi - lo) / kGrid;
    std::vector<double> grid(kGrid + 1);
    std::vector<double> slope(kGrid + 1);
    for (int i = 0; i <= kGrid; ++i) {
      grid[i] = (i == kGrid) ? hi : lo + i * h;
      slope[i] = dV(grid[i]);
    }

    // Local minima of the potential: V' changes sign from - to +.
    std::vector<std::pair<double, int>> minima;  // (location, grid index to its left)
    for (int i = 0; i < kGrid; ++i) {
      if (slope[i] < 0.0 && slope[i + 1] >= 0.0) {
        double left = grid[i];
        double right = grid[i + 1];
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (left + right);
          if (mid == left || mid == right) break;
          if (dV(mid) < 0.0) left = mid; else right = mid;
        }
        minima.emplace_back(0.5 * (left + right), i);
      }
    }
    if (minima.empty()) continue;
    saw_minimum = true;

    std::vector<Component> components;
    for (const auto& [umin, idx] : minima) {
      const double depth = gap(umin);
      if (depth <= tol_equal) {
        if (std::abs(depth) <= tol_equal) saw_degenerate = true;
        continue;
      }
      // Skip minima already inside a known component.
      bool known = false;
      for (const auto& comp : components) {
        if (umin > comp.lo && umin < comp.hi) known = true;
      }
      if (known) continue;

      Component comp{0.0, 0.0, umin, true};
      // Walk left.
      double inside = umin;
      int j = idx;
      while (j >= 0 && gap(grid[j]) > 0.0) {
        inside = grid[j];
        --j;
      }
      if (j < 0) {
        comp.bounded = false;
      } else {
        comp.lo = bisect_root(gap, inside, grid[j]);
      }
      // Walk right.
      inside = umin;
      j = idx + 1;
      while (j <= kGrid && gap(grid[j]) > 0.0) {
        inside = grid[j];
        ++j;
      }
      if (j > kGrid) {
        comp.bounded = false;
      } else {
        comp.hi = bisect_root(gap, inside, grid[j]);
      }
      components.push_back(comp);
    }

    std::vector<Component> bounded;
    bool any_unbounded = false;
    for (const auto& comp : components) {
      if (comp.bounded) bounded.push_back(comp); else any_unbounded = true;
    }
    if (bounded.empty()) {
      if (any_unbounded || minima.empty()) continue;
      // Minima exist in range but none lies below E.
      if (saw_degenerate) {
        throw Error(ErrorKind::DegenerateRoot, "E equals the potential minimum (equilibrium limit)");
      }
      throw Error(ErrorKind::NotInOmega, "E lies below every local minimum of the potential");
    }

    const Component* chosen = nullptr;
    if (u_seed) {
      for (const auto& comp : bounded) {
        if (*u_seed > comp.lo && *u_seed < comp.hi) chosen = &comp;
      }
    }
    if (!chosen) {
      chosen = &*std::min_element(bounded.begin(), bounded.end(),
                                  [](const Component& x, const Component& y) { return x.u_min < y.u_min; });
    }

    PotentialWell well;
    well.params = params;
    well.u_minus = chosen->lo;
    well.u_plus = chosen->hi;
    well.u_min_loc = chosen->u_min;
    well.root_slopes = {-dV(well.u_minus), -dV(well.u_plus)};

    const double curvature = std::abs(potential_second(nl, params, well.u_min_loc));
    const double tol_simple = 1e-8 * (1.0 + curvature * well.width());
    if (std::abs(well.root_slopes[0]) <= tol_simple || std::abs(well.root_slopes[1]) <= tol_simple) {
      throw Error(ErrorKind::DegenerateRoot, "turning point is not a simple root (separatrix or equilibrium limit)");
    }
    if (!(well.u_minus < well.u_min_loc && well.u_min_loc < well.u_plus)) {
      throw Error(ErrorKind::DegenerateRoot, "well has zero width");
    }
    return well;
  }

  if (!saw_minimum) throw Error(ErrorKind::NoWell, "potential has no local minimum");
  if (saw_degenerate) {
    throw Error(ErrorKind::DegenerateRoot, "E equals the potential minimum (equilibrium limit)");
  }
  throw Error(ErrorKind::NotInOmega, "no bounded oscillation interval at this energy");
}

bool in_omega(const Nonlinearity& nl, const WaveParams& params, std::optional<double> u_seed) {
  try {
    find_turning_points(nl, params, u_seed);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace twave
