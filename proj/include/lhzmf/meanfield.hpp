#pragma once

// Mean-field free energy per qubit of the tau-controlled LHZ Hamiltonian
//
//   f(m) = 3 tau m^4 - [ (1/beta) ln 2 cosh(beta h_i(m)) ]_i
//   h_i(m) = sqrt((4 tau m^3 + s J_i)^2 + (1 - s)^2)
//
// and its self-consistent magnetization m = RHS(m).  At zero temperature the
// log-cosh term reduces to h_i exactly.

#include <cstddef>
#include <vector>

#include "lhzmf/model.hpp"

namespace lhz {

struct LandscapePoint {
  double m;
  double f;
};

enum class StationaryKind { Minimum, Maximum };

struct StationaryPoint {
  double m;
  double f;
  StationaryKind kind;
  /// |f''| < 1e-8 at m.  Degenerate points are classified by the sign of g'.
  bool degenerate = false;
};

struct MinimaReport {
  /// Sorted ascending in m.
  std::vector<StationaryPoint> stationary;
  /// Index into `stationary` of the global minimum.
  std::size_t global = 0;
  ControlPoint control;
  Temperature beta;
  CouplingModel couplings;

  const StationaryPoint& global_minimum() const { return stationary[global]; }
  std::vector<StationaryPoint> minima() const;
};

/// Free energy landscape at a fixed control point, temperature and coupling model.
class FreeEnergy {
public:
  FreeEnergy(ControlPoint control, Temperature beta, CouplingModel couplings)
      : control_(control), beta_(beta), couplings_(couplings) {}

  double value(double m) const;
  /// Right-hand side of the self-consistent equation, always in [-1, 1].
  double rhs(double m) const;
  /// g(m) = m - RHS(m); the stationary points are its zeros.
  double residual(double m) const { return m - rhs(m); }
  /// Analytic g'(m).
  double residual_slope(double m) const;
  /// Analytic f'(m) = 12 tau m^2 g(m).
  double derivative(double m) const;
  /// f''(m) at a zero of g: 12 tau m^2 g'(m).
  double curvature_at_root(double m) const;

  const ControlPoint& control() const noexcept { return control_; }
  const Temperature& temperature() const noexcept { return beta_; }
  const CouplingModel& couplings() const noexcept { return couplings_; }

private:
  ControlPoint control_;
  Temperature beta_;
  CouplingModel couplings_;
};

double free_energy(double m, const ControlPoint& control, const Temperature& beta,
                   const CouplingModel& couplings);

double self_consistency_rhs(double m, const ControlPoint& control, const Temperature& beta,
                            const CouplingModel& couplings);

/// Samples f on `points` uniformly spaced magnetizations covering [-1, 1].
std::vector<LandscapePoint> sample_landscape(const FreeEnergy& landscape, std::size_t points);

struct StationarySearch {
  std::size_t initial_grid = 2001;
  std::size_t max_grid = 32001;
};

/// All zeros of m - RHS(m) in [-1, 1].
///
/// Sign changes are bracketed on a uniform grid, bisected to 1e-12 and polished
/// with Newton steps.  The grid doubles while two stationary points sit less
/// than two cells apart.  Brackets straddling a discontinuity of RHS (only at
/// s = 1, zero temperature) fail the 1e-10 residual check and are dropped.
MinimaReport find_stationary_points(const ControlPoint& control, const Temperature& beta,
                                    const CouplingModel& couplings,
                                    const StationarySearch& search = {});

inline MinimaReport find_stationary_points(const FreeEnergy& landscape,
                                           const StationarySearch& search = {}) {
  return find_stationary_points(landscape.control(), landscape.temperature(),
                                landscape.couplings(), search);
}

/// Residual bound satisfied by every reported stationary point.
inline constexpr double kSelfConsistencyTolerance = 1e-10;
/// Minima whose free energies agree within this are treated as degenerate.
inline constexpr double kDegenerateMinimumTolerance = 1e-10;

}  // namespace lhz
