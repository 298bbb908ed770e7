#include "lhzmf/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lhz {

namespace {

constexpr double kBisectionWidth = 1e-12;
constexpr double kCurvatureFloor = 1e-8;

double checked_m(double m) {
  if (!(std::abs(m) <= 1.0)) throw DomainError("m must be in [-1, 1]");
  return m;
}

// (1/beta) ln 2cosh(beta x) without overflow
double log_cosh_term(double x, double beta) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * beta * ax)) / beta;
}

double magnitude(double u, double gamma) { return std::sqrt(u * u + gamma * gamma); }

// sign(0) = 0 so that the s = 1 branch stays symmetric
double ratio(double u, double h) {
  if (h == 0.0) return 0.0;
  return u / h;
}

}  // namespace

std::vector<StationaryPoint> MinimaReport::minima() const {
  std::vector<StationaryPoint> out;
  for (const auto& p : stationary)
    if (p.kind == StationaryKind::Minimum) out.push_back(p);
  return out;
}

double FreeEnergy::value(double m) const {
  checked_m(m);
  const double s = control_.s(), tau = control_.tau();
  const double gamma = 1.0 - s;
  const double cubic = 4.0 * tau * m * m * m;
  const double quartic = 3.0 * tau * m * m * m * m;
  if (beta_.is_zero()) {
    return quartic - couplings_.average([&](double J) { return magnitude(cubic + s * J, gamma); });
  }
  const double beta = beta_.beta();
  return quartic - couplings_.average([&](double J) {
    return log_cosh_term(magnitude(cubic + s * J, gamma), beta);
  });
}

double FreeEnergy::rhs(double m) const {
  checked_m(m);
  const double s = control_.s(), tau = control_.tau();
  const double gamma = 1.0 - s;
  const double cubic = 4.0 * tau * m * m * m;
  if (beta_.is_zero()) {
    return couplings_.average([&](double J) {
      const double u = cubic + s * J;
      return ratio(u, magnitude(u, gamma));
    });
  }
  const double beta = beta_.beta();
  return couplings_.average([&](double J) {
    const double u = cubic + s * J;
    const double h = magnitude(u, gamma);
    return ratio(u, h) * std::tanh(beta * h);
  });
}

double FreeEnergy::residual_slope(double m) const {
  checked_m(m);
  const double s = control_.s(), tau = control_.tau();
  const double gamma = 1.0 - s;
  const double cubic = 4.0 * tau * m * m * m;
  const double du_dm = 12.0 * tau * m * m;
  const bool zero_t = beta_.is_zero();
  const double beta = zero_t ? 0.0 : beta_.beta();
  // d/du [u/h tanh(beta h)] = gamma^2/h^3 tanh(beta h) + (u/h)^2 beta sech^2(beta h)
  const double drhs_du = couplings_.average([&](double J) {
    const double u = cubic + s * J;
    const double h = magnitude(u, gamma);
    if (h == 0.0) return 0.0;
    const double geometric = gamma * gamma / (h * h * h);
    if (zero_t) return geometric;
    const double decay = std::exp(-2.0 * beta * h);
    const double sech2 = 4.0 * decay / ((1.0 + decay) * (1.0 + decay));
    const double q = u / h;
    return geometric * std::tanh(beta * h) + q * q * beta * sech2;
  });
  return 1.0 - drhs_du * du_dm;
}

double FreeEnergy::derivative(double m) const {
  return 12.0 * control_.tau() * m * m * residual(m);
}

double FreeEnergy::curvature_at_root(double m) const {
  return 12.0 * control_.tau() * m * m * residual_slope(m);
}

double free_energy(double m, const ControlPoint& control, const Temperature& beta,
                   const CouplingModel& couplings) {
  return FreeEnergy(control, beta, couplings).value(m);
}

double self_consistency_rhs(double m, const ControlPoint& control, const Temperature& beta,
                            const CouplingModel& couplings) {
  return FreeEnergy(control, beta, couplings).rhs(m);
}

std::vector<LandscapePoint> sample_landscape(const FreeEnergy& landscape, std::size_t points) {
  if (points < 2) throw DomainError("landscape needs at least 2 points");
  std::vector<LandscapePoint> out;
  out.reserve(points);
  const double last = static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) {
    const double m = k + 1 == points ? 1.0 : -1.0 + 2.0 * static_cast<double>(k) / last;
    out.push_back({m, landscape.value(m)});
  }
  return out;
}

namespace {

double grid_point(std::size_t k, std::size_t n) {
  if (k + 1 == n) return 1.0;
  return -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(n - 1);
}

// Bisection on a bracket with g(lo) and g(hi) of opposite sign, then Newton.
double polish_root(const FreeEnergy& fe, double lo, double hi, double g_lo) {
  while (hi - lo > kBisectionWidth) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g_mid = fe.residual(mid);
    if (g_mid == 0.0) return mid;
    if (std::signbit(g_mid) == std::signbit(g_lo)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  double m = 0.5 * (lo + hi);
  double g = fe.residual(m);
  for (int it = 0; it < 4 && g != 0.0; ++it) {
    const double slope = fe.residual_slope(m);
    if (slope == 0.0 || !std::isfinite(slope)) break;
    const double next = m - g / slope;
    if (!(next >= lo && next <= hi)) break;
    const double g_next = fe.residual(next);
    if (!(std::abs(g_next) < std::abs(g))) break;
    m = next;
    g = g_next;
  }
  return m;
}

std::vector<double> roots_on_grid(const FreeEnergy& fe, std::size_t n) {
  std::vector<double> roots;
  double m_prev = grid_point(0, n);
  double g_prev = fe.residual(m_prev);
  if (g_prev == 0.0) roots.push_back(m_prev);
  for (std::size_t k = 1; k < n; ++k) {
    const double m = grid_point(k, n);
    const double g = fe.residual(m);
    if (g == 0.0) {
      roots.push_back(m);
    } else if (g_prev != 0.0 && std::signbit(g) != std::signbit(g_prev)) {
      const double root = polish_root(fe, m_prev, m, g_prev);
      if (std::abs(fe.residual(root)) < kSelfConsistencyTolerance) roots.push_back(root);
    }
    m_prev = m;
    g_prev = g;
  }
  return roots;
}

bool crowded(const std::vector<double>& roots, double cell) {
  for (std::size_t i = 1; i < roots.size(); ++i)
    if (roots[i] - roots[i - 1] < 2.0 * cell) return true;
  return false;
}

}  // namespace

MinimaReport find_stationary_points(const ControlPoint& control, const Temperature& beta,
                                    const CouplingModel& couplings,
                                    const StationarySearch& search) {
  if (search.initial_grid < 3 || search.max_grid < search.initial_grid)
    throw DomainError("invalid stationary-point grid");
  const FreeEnergy fe(control, beta, couplings);

  std::size_t n = search.initial_grid;
  std::vector<double> roots = roots_on_grid(fe, n);
  while (crowded(roots, 2.0 / static_cast<double>(n - 1)) && 2 * n - 1 <= search.max_grid) {
    n = 2 * n - 1;
    roots = roots_on_grid(fe, n);
  }

  MinimaReport report{{}, 0, control, beta, couplings};
  report.stationary.reserve(roots.size());
  for (double m : roots) {
    const double slope = fe.residual_slope(m);
    StationaryPoint p{m, fe.value(m), slope >= 0.0 ? StationaryKind::Minimum : StationaryKind::Maximum};
    p.degenerate = std::abs(fe.curvature_at_root(m)) < kCurvatureFloor;
    report.stationary.push_back(p);
  }

  // g(-1) <= 0 <= g(1) guarantees a zero with g' >= 0
  double f_min = std::numeric_limits<double>::infinity();
  for (const auto& p : report.stationary)
    if (p.kind == StationaryKind::Minimum) f_min = std::min(f_min, p.f);
  if (!std::isfinite(f_min)) throw DomainError("no minimum of the free energy was found");
  double best_m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < report.stationary.size(); ++i) {
    const auto& p = report.stationary[i];
    if (p.kind == StationaryKind::Minimum && p.f <= f_min + kDegenerateMinimumTolerance && p.m > best_m) {
      best_m = p.m;
      report.global = i;
    }
  }
  return report;
}

}  // namespace lhz
