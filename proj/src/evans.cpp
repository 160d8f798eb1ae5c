#include "twave/evans.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <numbers>
#include <sstream>

#include "twave/error.hpp"
#include "twave/ode.hpp"
#include "twave/parallel.hpp"

namespace twave {

namespace {

// State layout: [u, u_x, Re Y(0,0), Im Y(0,0), Re Y(0,1), ...] with Y row-major.
constexpr std::size_t kStates = 2 + 18;
using MonoState = ode::State<kStates>;

Complex y_at(const MonoState& s, int r, int c) {
  const std::size_t i = 2 + 2 * static_cast<std::size_t>(3 * r + c);
  return {s[i], s[i + 1]};
}

void set_y(MonoState& s, int r, int c, Complex v) {
  const std::size_t i = 2 + 2 * static_cast<std::size_t>(3 * r + c);
  s[i] = v.real();
  s[i + 1] = v.imag();
}

// Third row of H; the first two rows are the shift (0,1,0), (0,0,1).
std::array<Complex, 3> third_row(const Nonlinearity& nl, const WaveParams& p, double u, double ux,
                                 Complex mu, double k) {
  const double k2 = k * k;
  const double curvature = nl.fsecond(u) * ux;
  if (p.family == Family::gkdv) {
    return {-mu - curvature, Complex(p.c + k2 - nl.fprime(u)), 0.0};
  }
  return {-(mu + curvature) / p.c, Complex((p.c - 1.0 + k2 - nl.fprime(u)) / p.c), mu / p.c};
}

struct MonodromyRhs {
  const Nonlinearity* nl;
  const WaveParams* params;
  Complex mu;
  double k;
  void operator()(const MonoState& y, MonoState& dy, double /*x*/) const {
    const double u = y[0];
    const double ux = y[1];
    dy[0] = ux;
    dy[1] = profile_acceleration(*nl, *params, u);
    const auto h = third_row(*nl, *params, u, ux, mu, k);
    for (int c = 0; c < 3; ++c) {
      set_y(dy, 0, c, y_at(y, 1, c));
      set_y(dy, 1, c, y_at(y, 2, c));
      set_y(dy, 2, c, h[0] * y_at(y, 0, c) + h[1] * y_at(y, 1, c) + h[2] * y_at(y, 2, c));
    }
  }
};

Complex det3(const Matrix3c& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

// Argument increment between two nonzero samples, in (-pi, pi].
double arg_step(Complex from, Complex to) { return std::arg(to / from); }

constexpr double kNoiseFloorStep = 1e-9;

Complex newton_root(const std::function<Complex(Complex)>& f, Complex z, double scale, bool& ok) {
  ok = false;
  double last_residual = std::abs(f(z));
  int stagnant = 0;
  for (int it = 0; it < 60; ++it) {
    const Complex fz = f(z);
    const double h = 1e-7 * std::max(std::abs(z), 1e-3 * scale);
    const Complex d = (f(z + h) - f(z - h)) / (2.0 * h);
    if (d == 0.0 || !std::isfinite(std::abs(d))) return z;
    const Complex step = fz / d;
    z -= step;
    if (!std::isfinite(std::abs(z))) return z;
    if (std::abs(step) <= 1e-13 * std::max(std::abs(z), 1e-3 * scale)) {
      ok = true;
      return z;
    }
    const double residual = std::abs(f(z));
    stagnant = (residual >= last_residual) ? stagnant + 1 : 0;
    // At the roundoff floor of D (e.g. the root pinned at mu = 0) steps stop shrinking;
    // accept once they are far below the contour scale.
    if (stagnant >= 4 || it == 59) {
      ok = std::abs(step) <= kNoiseFloorStep * scale;
      return z;
    }
    last_residual = residual;
  }
  return z;
}

Complex muller_root(const std::function<Complex(Complex)>& f, Complex z, double scale, bool& ok) {
  ok = false;
  const double d = 1e-2 * std::max(std::abs(z), scale);
  Complex x0 = z - d, x1 = z + d, x2 = z;
  Complex f0 = f(x0), f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 100; ++it) {
    const Complex h1 = x1 - x0, h2 = x2 - x1;
    const Complex d1 = (f1 - f0) / h1, d2 = (f2 - f1) / h2;
    const Complex a = (d2 - d1) / (h2 + h1);
    const Complex b = a * h2 + d2;
    const Complex disc = std::sqrt(b * b - 4.0 * a * f2);
    const Complex den = (std::abs(b + disc) > std::abs(b - disc)) ? b + disc : b - disc;
    if (den == 0.0) return x2;
    const Complex step = -2.0 * f2 / den;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    x2 += step;
    f2 = f(x2);
    if (!std::isfinite(std::abs(x2))) return x2;
    if (std::abs(step) <= 1e-13 * std::max(std::abs(x2), 1e-3 * scale)) {
      ok = true;
      return x2;
    }
  }
  ok = std::abs(x2 - x1) <= kNoiseFloorStep * scale;
  return x2;
}

// Least-squares polynomial in t = k^2 of degree min(n-1, 2); returns the value at t = 0.
double extrapolate_in_k2(const std::vector<double>& k, const std::vector<double>& value) {
  const Eigen::Index n = static_cast<Eigen::Index>(k.size());
  const Eigen::Index degree = std::min<Eigen::Index>(n - 1, 2);
  Eigen::MatrixXd A(n, degree + 1);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = k[i] * k[i];
    double power = 1.0;
    for (Eigen::Index j = 0; j <= degree; ++j, power *= t) A(i, j) = power;
    b(i) = value[i];
  }
  return A.colPivHouseholderQr().solve(b)(0);
}

}  // namespace

Complex MonodromyMatrix::expected_determinant() const {
  if (family == Family::gkdv) return 1.0;
  return std::exp(mu * T / c);
}

double MonodromyMatrix::liouville_residual() const {
  const Complex expected = expected_determinant();
  return std::abs(det3(entries) - expected) / std::abs(expected);
}

Matrix3c coefficient_matrix(const Nonlinearity& nl, const WaveParams& params, double u, double ux,
                            Complex mu, double k) {
  Matrix3c h = Matrix3c::Zero();
  h(0, 1) = 1.0;
  h(1, 2) = 1.0;
  const auto row = third_row(nl, params, u, ux, mu, k);
  for (int c = 0; c < 3; ++c) h(2, c) = row[c];
  return h;
}

Matrix3c coefficient_matrix(const WaveProfile& profile, double x, Complex mu, double k) {
  const ProfilePoint pt = profile.sample(x);
  return coefficient_matrix(profile.nl, profile.params(), pt.u, pt.ux, mu, k);
}

MonodromyMatrix monodromy(const WaveProfile& profile, Complex mu, double k) {
  const WaveParams& p = profile.params();
  MonoState y{};
  y[0] = profile.u.front();
  y[1] = profile.ux.front();
  for (int i = 0; i < 3; ++i) set_y(y, i, i, 1.0);
  const MonodromyRhs rhs{&profile.nl, &p, mu, k};
  y = ode::integrate<kStates>(rhs, y, 0.0, profile.T, profile_tolerances());

  MonodromyMatrix m;
  m.mu = mu;
  m.k = k;
  m.family = p.family;
  m.T = profile.T;
  m.c = p.c;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m.entries(r, c) = y_at(y, r, c);
  }
  return m;
}

Complex evans_value(const MonodromyMatrix& m, Complex lambda) {
  return det3(m.entries - lambda * Matrix3c::Identity());
}

EvansSample evans(const WaveProfile& profile, Complex mu, double k, Complex lambda) {
  EvansSample s;
  s.mu = mu;
  s.k = k;
  s.lambda = lambda;
  s.value = evans_value(monodromy(profile, mu, k), lambda);
  s.off_unit_circle = std::abs(std::abs(lambda) - 1.0) > 1e-12;
  return s;
}

Complex floquet_multiplier(double kappa) { return std::polar(1.0, kappa); }

std::vector<Complex> evans_batch(const WaveProfile& profile,
                                 const std::vector<std::pair<Complex, double>>& points,
                                 Complex lambda, std::size_t jobs) {
  std::vector<Complex> out(points.size());
  parallel_for(points.size(), jobs, [&](std::size_t i) {
    out[i] = evans_value(monodromy(profile, points[i].first, points[i].second), lambda);
  });
  return out;
}

std::vector<Complex> cauchy_coefficients(const WaveProfile& profile, double radius, double k,
                                         std::size_t n, std::size_t jobs) {
  std::vector<std::pair<Complex, double>> pts(n);
  for (std::size_t j = 0; j < n; ++j) {
    pts[j] = {std::polar(radius, 2.0 * std::numbers::pi * j / n), k};
  }
  const auto values = evans_batch(profile, pts, 1.0, jobs);
  std::vector<Complex> coeff(n);
  for (std::size_t m = 0; m < n; ++m) {
    Complex sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      sum += values[j] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>((j * m) % n) / n);
    }
    coeff[m] = sum / (static_cast<double>(n) * std::pow(radius, static_cast<double>(m)));
  }
  return coeff;
}

std::string_view to_string(BranchVerdict v) {
  switch (v) {
    case BranchVerdict::unstable_longwave: return "UNSTABLE_LONGWAVE";
    case BranchVerdict::no_real_branch: return "NO_REAL_BRANCH";
    case BranchVerdict::degenerate: return "DEGENERATE";
  }
  return "?";
}

BranchReport extract_normal_form(const WaveProfile& profile, const NormalFormOptions& options) {
  if (options.nodes < 8) throw Error(ErrorKind::Domain, "need at least 8 Cauchy nodes");
  if (options.radii_over_period.size() < 2) throw Error(ErrorKind::Domain, "need at least two radii");
  const double scale = 1.0 / profile.T;

  std::vector<double> a3(options.radii_over_period.size());
  std::vector<std::vector<Complex>> coeffs(a3.size());
  std::size_t accepted = a3.size();
  for (std::size_t i = 0; i < a3.size(); ++i) {
    coeffs[i] = cauchy_coefficients(profile, options.radii_over_period[i] * scale, 0.0, options.nodes,
                                    options.jobs);
    a3[i] = coeffs[i][3].real();
    if (i > 0 && std::abs(a3[i] - a3[i - 1]) <= options.agreement * std::abs(a3[i - 1])) {
      accepted = i - 1;
      break;
    }
  }
  if (accepted == a3.size()) {
    std::ostringstream msg;
    msg << "cubic coefficient unstable under radius halving:";
    for (double v : a3) msg << ' ' << v;
    throw Error(ErrorKind::NoiseFloor, msg.str());
  }

  BranchReport report;
  report.radius = options.radii_over_period[accepted] * scale;
  report.a3 = a3[accepted];
  report.a3_error = std::abs(a3[accepted + 1] - a3[accepted]);

  const double h = options.k_step;
  const double c1_zero = coeffs[accepted][1].real();
  auto curvature = [&](double k) {
    const auto c = cauchy_coefficients(profile, report.radius, k, options.nodes, options.jobs);
    return (c[1].real() - c1_zero) / (k * k);
  };
  const double coarse = curvature(h);
  const double fine = curvature(0.5 * h);
  report.a1 = (4.0 * fine - coarse) / 3.0;
  report.a1_error = std::abs(fine - coarse) / 3.0;

  if (!(std::abs(report.a3) > 0.0) || !std::isfinite(report.a3) || !std::isfinite(report.a1)) {
    throw Error(ErrorKind::NoiseFloor, "cubic coefficient vanishes to working precision");
  }
  report.slope_sq = -report.a1 / report.a3;
  if (report.slope_sq > 0.0) report.predicted_slope = std::sqrt(report.slope_sq);
  return report;
}

int winding_number(const WaveProfile& profile, double k, double radius, std::size_t jobs) {
  constexpr std::size_t kBase = 64;
  constexpr int kMaxDepth = 12;
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<std::pair<Complex, double>> pts(kBase);
  for (std::size_t j = 0; j < kBase; ++j) pts[j] = {std::polar(radius, two_pi * j / kBase), k};
  const auto values = evans_batch(profile, pts, 1.0, jobs);
  for (const auto& v : values) {
    if (v == 0.0 || !std::isfinite(std::abs(v))) {
      throw Error(ErrorKind::WindingMismatch, "Evans function vanishes on the contour");
    }
  }

  auto D = [&](double theta) { return evans_value(monodromy(profile, std::polar(radius, theta), k)); };
  // Refine any arc whose argument jump is too large to be resolved unambiguously.
  std::function<double(double, double, Complex, Complex, int)> arc =
      [&](double t0, double t1, Complex d0, Complex d1, int depth) -> double {
    const double step = arg_step(d0, d1);
    if (std::abs(step) <= std::numbers::pi / 4.0 || depth >= kMaxDepth) return step;
    const double tm = 0.5 * (t0 + t1);
    const Complex dm = D(tm);
    return arc(t0, tm, d0, dm, depth + 1) + arc(tm, t1, dm, d1, depth + 1);
  };
  double total = 0.0;
  for (std::size_t j = 0; j < kBase; ++j) {
    const std::size_t next = (j + 1) % kBase;
    total += arc(two_pi * j / kBase, two_pi * (j + 1) / kBase, values[j], values[next], 0);
  }
  return static_cast<int>(std::lround(total / two_pi));
}

void track_roots(const WaveProfile& profile, BranchReport& report, const std::vector<double>& k_values,
                 std::size_t jobs) {
  report.tracked.clear();
  report.fitted_slope_sq.reset();
  const double branch = std::sqrt(std::abs(report.slope_sq));
  const std::array<double, 4> adjust{1.0, 2.0, 0.5, 4.0};

  for (double k : k_values) {
    if (!(k > 0.0)) throw Error(ErrorKind::Domain, "tracked wavenumbers must be positive");
    const double base_radius = 2.5 * k * branch;
    TrackedRoots tr;
    tr.k = k;
    bool found = false;
    for (double factor : adjust) {
      tr.contour_radius = base_radius * factor;
      tr.winding = winding_number(profile, k, tr.contour_radius, jobs);
      if (tr.winding == 3) {
        found = true;
        break;
      }
    }
    if (!found) {
      std::ostringstream msg;
      msg << "winding number " << tr.winding << " (expected 3) at k = " << k;
      throw Error(ErrorKind::WindingMismatch, msg.str());
    }

    const Complex off = report.slope_sq > 0.0 ? Complex(k * branch, 0.0) : Complex(0.0, k * branch);
    const std::array<Complex, 3> guesses{Complex(0.0), off, -off};
    auto f = [&](Complex mu) { return evans_value(monodromy(profile, mu, k)); };
    for (const Complex& g : guesses) {
      bool ok = false;
      Complex z = newton_root(f, g, tr.contour_radius, ok);
      if (!ok || std::abs(z) >= tr.contour_radius) z = muller_root(f, g, tr.contour_radius, ok);
      if (!ok || std::abs(z) >= tr.contour_radius) {
        std::ostringstream msg;
        msg << "root polishing from " << g << " failed at k = " << k;
        throw Error(ErrorKind::WindingMismatch, msg.str());
      }
      tr.roots.push_back(z);
    }
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = i + 1; j < 3; ++j) {
        if (std::abs(tr.roots[i] - tr.roots[j]) <= 1e-6 * tr.contour_radius) {
          throw Error(ErrorKind::WindingMismatch, "polished roots collapsed onto each other");
        }
      }
    }
    std::sort(tr.roots.begin(), tr.roots.end(), [](Complex x, Complex y) {
      return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    report.tracked.push_back(std::move(tr));
  }

  if (!report.tracked.empty()) {
    std::vector<double> ks;
    std::vector<double> ratios;
    for (const auto& tr : report.tracked) {
      const auto outer = std::max_element(tr.roots.begin(), tr.roots.end(),
                                          [](Complex x, Complex y) { return std::abs(x) < std::abs(y); });
      const Complex r = *outer / tr.k;
      ks.push_back(tr.k);
      ratios.push_back((r * r).real());
    }
    report.fitted_slope_sq = extrapolate_in_k2(ks, ratios);
  }
}

BranchVerdict transverse_verdict(BranchReport& report, const JacobianIndices& indices) {
  if (!std::isfinite(report.a3) || !std::isfinite(report.a1)) {
    throw Error(ErrorKind::Domain, "branch report coefficients are not finite");
  }
  bool real_unstable = false;
  bool all_imaginary = !report.tracked.empty();
  for (const auto& tr : report.tracked) {
    const double tol = 1e-8 * tr.contour_radius;
    for (const Complex& z : tr.roots) {
      if (z.real() > tol && std::abs(z.imag()) <= tol) real_unstable = true;
      if (std::abs(z.real()) > tol) all_imaginary = false;
    }
  }
  const double slope_tol = 1e-8 * (std::abs(report.a1) + report.a1_error) / std::abs(report.a3);
  if (report.slope_sq > slope_tol && real_unstable) {
    report.verdict = BranchVerdict::unstable_longwave;
  } else if (report.slope_sq < -slope_tol && all_imaginary) {
    report.verdict = BranchVerdict::no_real_branch;
  } else {
    report.verdict = BranchVerdict::degenerate;
  }

  // The indices are decisive when J3 > 0: J2 > 0 forces a real branch, J2 < 0 forbids one.
  const bool j3_pos = indices.J3 > indices.tol_J3;
  const bool j2_pos = indices.J2 > indices.tol_J2;
  const bool j2_neg = indices.J2 < -indices.tol_J2;
  const bool conflict = (j3_pos && j2_pos && report.verdict != BranchVerdict::unstable_longwave) ||
                        (j3_pos && j2_neg && report.verdict == BranchVerdict::unstable_longwave);
  if (conflict) {
    std::ostringstream msg;
    msg << "Evans branch verdict " << to_string(report.verdict) << " contradicts indices J2 = " << indices.J2
        << ", J3 = " << indices.J3;
    throw Error(ErrorKind::VerdictConflict, msg.str());
  }
  return report.verdict;
}

}  // namespace twave
