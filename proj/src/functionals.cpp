#include "twave/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "twave/error.hpp"

namespace twave {

namespace {

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

double det3(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
  return r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0]) +
         r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]);
}

// Integrands of (T, M, P, H, K) in terms of u and u_x^2, per family.
void densities(const Nonlinearity& nl, Family family, double u, double ux2, double* out) {
  out[kT] = 1.0;
  out[kM] = u;
  out[kK] = ux2;
  if (family == Family::gkdv) {
    out[kP] = u * u;
    out[kH] = 0.5 * ux2 - nl.F(u);
  } else {
    out[kP] = 0.5 * (u * u + ux2);
    out[kH] = 0.5 * u * u + nl.F(u);
  }
}

}  // namespace

std::string_view quantity_name(std::size_t q) {
  static constexpr std::array<std::string_view, kQuantities> names{"T", "M", "P", "H", "K"};
  return names.at(q);
}

Functionals abelian_functionals(const Nonlinearity& nl, const PotentialWell& well) {
  const Family family = well.params.family;
  const auto result = orbit_integrals(
      nl, well,
      [&](double u, double ux2, std::vector<double>& out) { densities(nl, family, u, ux2, out.data()); },
      kQuantities);
  Functionals fn;
  fn.family = family;
  std::copy(result.values.begin(), result.values.end(), fn.value.begin());
  return fn;
}

Functionals grid_functionals(const WaveProfile& profile) {
  Functionals fn;
  fn.family = profile.family();
  const std::size_t n = profile.intervals();
  std::array<double, kQuantities> d{};
  for (std::size_t i = 0; i < n; ++i) {
    densities(profile.nl, fn.family, profile.u[i], profile.ux[i] * profile.ux[i], d.data());
    for (std::size_t q = 0; q < kQuantities; ++q) fn.value[q] += d[q];
  }
  for (auto& v : fn.value) v *= profile.spacing();
  return fn;
}

Functionals compute_functionals(const WaveProfile& profile) {
  Functionals fn = abelian_functionals(profile.nl, profile.well);
  const Functionals grid = grid_functionals(profile);

  // Normalise by the integral of |density| so mean-zero quantities are judged fairly.
  std::array<double, kQuantities> magnitude{};
  std::array<double, kQuantities> d{};
  for (std::size_t i = 0; i < profile.intervals(); ++i) {
    densities(profile.nl, fn.family, profile.u[i], profile.ux[i] * profile.ux[i], d.data());
    for (std::size_t q = 0; q < kQuantities; ++q) magnitude[q] += std::abs(d[q]);
  }
  double worst = 0.0;
  for (std::size_t q = 0; q < kQuantities; ++q) {
    const double scale = magnitude[q] * profile.spacing() + 1e-300;
    worst = std::max(worst, std::abs(fn.value[q] - grid.value[q]) / scale);
  }
  fn.method_discrepancy = worst;
  if (worst > 1e-6) {
    std::ostringstream msg;
    msg << "grid and turning-point quadratures differ by " << worst << " (relative)";
    throw Error(ErrorKind::MethodDisagreement, msg.str());
  }
  return fn;
}

Functionals gradients(const Nonlinearity& nl, const WaveParams& params, const StepPolicy& policy,
                      std::optional<double> u_seed) {
  const PotentialWell base = find_turning_points(nl, params, u_seed);
  Functionals fn = abelian_functionals(nl, base);
  const double seed = base.u_min_loc;

  auto evaluate = [&](const WaveParams& shifted) {
    try {
      return abelian_functionals(nl, find_turning_points(nl, shifted, seed));
    } catch (const Error& e) {
      if (e.is_input_error()) {
        throw Error(ErrorKind::StencilLeftOmega, std::string("finite-difference stencil left the domain: ") + e.what());
      }
      throw;
    }
  };

  const Vec3 p{params.a, params.E, params.c};
  for (std::size_t j = 0; j < 3; ++j) {
    const double h = policy.rel_step * (1.0 + std::abs(p[j]));
    auto central = [&](double step) {
      WaveParams plus = params;
      WaveParams minus = params;
      double* fields_plus[3] = {&plus.a, &plus.E, &plus.c};
      double* fields_minus[3] = {&minus.a, &minus.E, &minus.c};
      *fields_plus[j] += step;
      *fields_minus[j] -= step;
      const Functionals fp = evaluate(plus);
      const Functionals fm = evaluate(minus);
      std::array<double, kQuantities> d{};
      for (std::size_t q = 0; q < kQuantities; ++q) d[q] = (fp.value[q] - fm.value[q]) / (2.0 * step);
      return d;
    };
    const auto coarse = central(h);
    const auto fine = central(0.5 * h);
    for (std::size_t q = 0; q < kQuantities; ++q) {
      fn.grad[q][j] = (4.0 * fine[q] - coarse[q]) / 3.0;
      fn.grad_error[q][j] = std::abs(fine[q] - coarse[q]) / 3.0;
    }
  }
  fn.has_gradients = true;

  for (std::size_t q = 0; q < kQuantities; ++q) {
    const double scale = norm(fn.grad[q]);
    if (norm(fn.grad_error[q]) > policy.noise_tolerance * scale) {
      std::ostringstream msg;
      msg << "Richardson estimate for grad " << quantity_name(q) << " is " << norm(fn.grad_error[q])
          << " against |grad| " << scale;
      throw Error(ErrorKind::NoiseFloor, msg.str());
    }
  }
  return fn;
}

double jacobian2(const Functionals& fn) {
  return fn.grad[kT][0] * fn.grad[kM][1] - fn.grad[kT][1] * fn.grad[kM][0];
}

double jacobian3(const Functionals& fn) { return det3(fn.grad[kT], fn.grad[kM], fn.grad[kP]); }

double jacobian_hmp(const Functionals& fn) { return det3(fn.grad[kH], fn.grad[kM], fn.grad[kP]); }

double jacobian2(const Nonlinearity& nl, const WaveParams& params, const StepPolicy& policy) {
  return jacobian2(gradients(nl, params, policy));
}

double jacobian3(const Nonlinearity& nl, const WaveParams& params, const StepPolicy& policy) {
  return jacobian3(gradients(nl, params, policy));
}

double action_gradient_residual(const Functionals& fn) {
  const Vec3 expected{fn.M(), fn.T(), 0.5 * fn.P()};
  Vec3 diff{};
  for (std::size_t j = 0; j < 3; ++j) diff[j] = fn.grad[kK][j] - expected[j];
  return norm(diff) / norm(expected);
}

double euler_relation_residual(const Functionals& fn, const WaveParams& params) {
  Vec3 sum{};
  for (std::size_t j = 0; j < 3; ++j) {
    sum[j] = params.E * fn.grad[kT][j] + params.a * fn.grad[kM][j] + 0.5 * params.c * fn.grad[kP][j] +
             fn.grad[kH][j];
  }
  const double scale = std::abs(params.E) * norm(fn.grad[kT]) + std::abs(params.a) * norm(fn.grad[kM]) +
                       0.5 * std::abs(params.c) * norm(fn.grad[kP]) + norm(fn.grad[kH]);
  return norm(sum) / scale;
}

std::string_view to_string(Verdict1d v) {
  switch (v) {
    case Verdict1d::stable_candidate: return "STABLE_CANDIDATE";
    case Verdict1d::unstable_1d: return "UNSTABLE_1D";
    case Verdict1d::degenerate: return "DEGENERATE";
  }
  return "?";
}

std::string_view to_string(VerdictTransverse v) {
  switch (v) {
    case VerdictTransverse::unstable_longwave: return "UNSTABLE_LONGWAVE";
    case VerdictTransverse::inconclusive: return "INCONCLUSIVE";
    case VerdictTransverse::degenerate: return "DEGENERATE";
  }
  return "?";
}

JacobianIndices indices_from(const Functionals& fn) {
  if (!fn.has_gradients) throw Error(ErrorKind::Domain, "indices need parameter gradients");
  JacobianIndices idx;
  idx.J2 = jacobian2(fn);
  idx.J3 = jacobian3(fn);
  idx.J_hmp = jacobian_hmp(fn);
  idx.kinetic = fn.K();
  const double tn = norm(fn.grad[kT]);
  const double mn = norm(fn.grad[kM]);
  const double pn = norm(fn.grad[kP]);
  const double t2 = std::hypot(fn.grad[kT][0], fn.grad[kT][1]);
  const double m2 = std::hypot(fn.grad[kM][0], fn.grad[kM][1]);
  idx.tol_J2 = kJacobianRelTol * t2 * m2;
  idx.tol_J3 = kJacobianRelTol * tn * mn * pn;
  return classify(idx);
}

JacobianIndices classify(JacobianIndices idx) {
  const bool j3_pos = idx.J3 > idx.tol_J3;
  const bool j3_neg = idx.J3 < -idx.tol_J3;
  const bool j2_pos = idx.J2 > idx.tol_J2;
  const bool j2_neg = idx.J2 < -idx.tol_J2;

  if (j3_neg) {
    idx.verdict_1d = Verdict1d::unstable_1d;
  } else if (j3_pos) {
    idx.verdict_1d = Verdict1d::stable_candidate;
  } else {
    idx.verdict_1d = Verdict1d::degenerate;
  }

  if (j3_pos && j2_pos) {
    idx.verdict_transverse = VerdictTransverse::unstable_longwave;
  } else if ((j3_pos && j2_neg) || j3_neg) {
    idx.verdict_transverse = VerdictTransverse::inconclusive;
  } else {
    idx.verdict_transverse = VerdictTransverse::degenerate;
  }
  return idx;
}

}  // namespace twave
