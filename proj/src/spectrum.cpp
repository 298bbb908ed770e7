#include "lhzmf/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "lhzmf/parallel.hpp"
#include "lhzmf/tridiag.hpp"

namespace lhz {

SymmetricHamiltonian build_hamiltonian(int N, const ControlPoint& control, double J) {
  if (N < 1) throw DomainError("N must be >= 1");
  if (!(J > 0.0)) throw DomainError("J must be > 0");
  const double s = control.s(), tau = control.tau();
  const double n = N;
  const double spin = n / 2.0;
  SymmetricHamiltonian h;
  h.N = N;
  h.diag.resize(N + 1);
  h.offdiag.resize(N);
  for (int k = 0; k <= N; ++k) {
    const double w = 2.0 * k - n;
    const double x = w / n;
    h.diag[k] = -s * J * w - tau * n * (x * x) * (x * x);
  }
  for (int k = 0; k < N; ++k) {
    const double mz = k - spin;
    h.offdiag[k] = -(1.0 - s) * std::sqrt(spin * (spin + 1.0) - mz * (mz + 1.0));
  }
  return h;
}

GapResult gap_at(int N, const ControlPoint& control, double J) {
  const SymmetricHamiltonian h = build_hamiltonian(N, control, J);
  const auto ev = lowest_eigenvalues(h.diag, h.offdiag, 2);
  return {ev[0], ev[1], std::max(0.0, ev[1] - ev[0]), control.s(), control.tau(), N};
}

MinGap min_gap_along_schedule(int N, const ScheduleFamily& family, double J,
                              const MinGapSearch& search) {
  if (N < 1) throw DomainError("N must be >= 1");
  if (!(search.s_lo >= 0.0 && search.s_hi <= 1.0 && search.s_lo < search.s_hi && search.coarse_step > 0.0))
    throw DomainError("invalid min-gap search window");
  auto gap = [&](double s) { return gap_at(N, family.at(s), J).gap; };

  const auto steps = static_cast<std::size_t>(std::floor((search.s_hi - search.s_lo) / search.coarse_step + 1e-9));
  std::vector<double> s_grid;
  s_grid.reserve(steps + 2);
  for (std::size_t i = 0; i <= steps; ++i) s_grid.push_back(search.s_lo + static_cast<double>(i) * search.coarse_step);
  if (search.s_hi - s_grid.back() > 1e-12) s_grid.push_back(search.s_hi);
  std::vector<double> g(s_grid.size());
  for (std::size_t i = 0; i < s_grid.size(); ++i) g[i] = gap(s_grid[i]);

  const std::size_t last = s_grid.size() - 1;
  MinGap best{s_grid[0], g[0]};
  for (std::size_t i = 0; i <= last; ++i) {
    const bool left_ok = i == 0 || g[i] <= g[i - 1];
    const bool right_ok = i == last || g[i] <= g[i + 1];
    if (!left_ok || !right_ok) continue;
    MinGap local{s_grid[i], g[i]};
    const double lo = s_grid[i == 0 ? 0 : i - 1];
    const double hi = s_grid[i == last ? last : i + 1];
    if (hi > lo) {
      const auto refined = golden_section_minimize(gap, lo, hi, search.resolution);
      if (refined.value < local.gap_min) local = {refined.x, refined.value};
    }
    if (local.gap_min < best.gap_min) best = local;
  }
  return best;
}

std::string to_string(ScalingClass c) {
  switch (c) {
    case ScalingClass::Exponential: return "Exponential";
    case ScalingClass::Polynomial: return "Polynomial";
    case ScalingClass::Ambiguous: return "Ambiguous";
  }
  return "Ambiguous";
}

ScalingFit classify_gap_scaling(std::span<const int> Ns, std::span<const double> gaps,
                                std::span<const double> s_min) {
  if (Ns.size() != gaps.size()) throw DomainError("Ns and gaps differ in length");
  if (!s_min.empty() && s_min.size() != Ns.size()) throw DomainError("Ns and s_min differ in length");
  if (Ns.size() < 4) throw DomainError("gap scaling needs at least 4 system sizes");
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    if (Ns[i] < 2) throw DomainError("every N must be >= 2");
    if (i > 0 && Ns[i] <= Ns[i - 1]) throw DomainError("Ns must be strictly ascending");
  }

  ScalingFit fit;
  fit.Ns.assign(Ns.begin(), Ns.end());
  fit.gaps.assign(gaps.begin(), gaps.end());
  fit.s_min.assign(s_min.begin(), s_min.end());

  std::vector<double> n_lin, n_log, log_gap;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    if (!(gaps[i] >= kGapNoiseFloor)) {
      fit.warnings.push_back("N=" + std::to_string(Ns[i]) + ": gap below 1e-13 excluded from fits");
      continue;
    }
    n_lin.push_back(Ns[i]);
    n_log.push_back(std::log(static_cast<double>(Ns[i])));
    log_gap.push_back(std::log(gaps[i]));
  }
  if (log_gap.size() < 3) {
    fit.warnings.push_back("fewer than 3 usable gaps; classification is Ambiguous");
    return fit;
  }
  fit.exp_fit = fit_decay_line(n_lin, log_gap);
  fit.poly_fit = fit_decay_line(n_log, log_gap);

  if (fit.poly_fit.rss > kClassificationRatio * fit.exp_fit.rss && fit.exp_fit.b > 0.0)
    fit.classification = ScalingClass::Exponential;
  else if (fit.exp_fit.rss > kClassificationRatio * fit.poly_fit.rss && fit.poly_fit.b > 0.0)
    fit.classification = ScalingClass::Polynomial;
  return fit;
}

ScalingFit gap_scaling(std::span<const int> Ns, const ScheduleFamily& family, double J,
                       unsigned threads, const MinGapSearch& search) {
  if (Ns.size() < 4) throw DomainError("gap scaling needs at least 4 system sizes");
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    if (Ns[i] < 2) throw DomainError("every N must be >= 2");
    if (i > 0 && Ns[i] <= Ns[i - 1]) throw DomainError("Ns must be strictly ascending");
  }
  std::vector<double> gaps(Ns.size()), s_min(Ns.size());
  parallel_for(Ns.size(), threads, [&](std::size_t i) {
    const MinGap mg = min_gap_along_schedule(Ns[i], family, J, search);
    gaps[i] = mg.gap_min;
    s_min[i] = mg.s_min;
  });
  return classify_gap_scaling(Ns, gaps, s_min);
}

}  // namespace lhz
