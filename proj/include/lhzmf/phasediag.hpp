#pragma once

// First-order transition lines of the mean-field free energy in the (s, tau)
// plane, their critical endpoints and magnetization jumps, and the relation of
// power-law schedules tau = s^r to those lines.

#include <cstddef>
#include <optional>
#include <vector>

#include "lhzmf/meanfield.hpp"
#include "lhzmf/model.hpp"

namespace lhz {

/// Smallest magnetization jump counted as a first-order transition.
inline constexpr double kJumpThreshold = 1e-3;
/// Closest approach below which a schedule is considered to touch a line.
inline constexpr double kTangencyTolerance = 1e-4;

struct TransitionPoint {
  double s;
  double tau_star;
  double m_low;
  double m_high;
  double jump;  // m_high - m_low
};

enum class CriticalMethod { ClosedForm, Numeric };

struct CriticalPoint {
  double s_c;
  double tau_c;
  CriticalMethod method;
};

/// Uniformly spaced s values start, start + step, ... up to stop.
struct SGrid {
  double start = 0.01;
  double stop = 0.99;
  double step = 0.002;

  std::vector<double> values() const;
};

/// Half-open range [begin, end) of TransitionLine::points.
struct Segment {
  std::size_t begin;
  std::size_t end;
};

struct TransitionLine {
  std::vector<TransitionPoint> points;  // ascending s
  std::vector<Segment> segments;
  std::optional<CriticalPoint> critical_point;
  SGrid grid;
};

struct TauSearch {
  double tau_lo = 0.0;
  double tau_hi = 1.0;
  std::size_t coarse_points = 201;
  double jump_threshold = kJumpThreshold;
  double tau_resolution = 1e-13;
  /// Upper bound on landscape evaluations spent refining one coarse interval.
  std::size_t refinement_budget = 600;
  StationarySearch stationary;
};

struct TraceOptions {
  TauSearch search;
  unsigned threads = 0;
};

/// Zero-temperature, uniform-coupling critical point, where f', f'' and f'''
/// vanish together at m_c = sqrt(2/5):
///   s_c = 2^{5/2} / (3^{5/2} J + 2^{5/2}),
///   tau_c = 5^{5/2} J / (8 (3^{5/2} J + 2^{5/2})).
CriticalPoint critical_point_closed_form(double J);

/// ln tau_c / ln s_c: the exponent whose schedule passes through the critical point.
double tangent_exponent(double J);

/// The tau at which two minima exchange global status at fixed s.
///
/// |m| of the global minimum is nondecreasing in tau (the optimal free energy
/// is concave in tau with slope -m^4), so a first-order transition is a jump
/// of that key.  Coarse intervals whose key rises by at least the jump
/// threshold are bisected in tau, keeping the half with the larger rise, until
/// the sign of f(high basin) - f(low basin) is resolved to `tau_resolution`.
/// Basins are associated between evaluations by nearest m.
std::optional<TransitionPoint> find_tau_star(double s, const Temperature& beta,
                                             const CouplingModel& couplings,
                                             const TauSearch& search = {});

TransitionLine trace_line(const Temperature& beta, const CouplingModel& couplings,
                          const SGrid& grid = {}, const TraceOptions& options = {});

/// Critical point estimated from the first segment end where the jump closes
/// inside the scanned grid.  jump^2 and tau* are fitted by quadratics over the
/// five outermost points and jump^2 is extrapolated to zero.
std::optional<CriticalPoint> numeric_critical_point(const TransitionLine& line);

struct JumpSample {
  double s;
  double jump;
};

std::vector<JumpSample> jump_profile(const TransitionLine& line);

enum class CrossingKind { Crosses, Tangent, Avoids };

struct ScheduleCrossing {
  CrossingKind kind;
  /// Crossing point, touching point, or point of closest approach.
  double s;
  double tau;
  /// min over the line of |s^r - tau*(s)|.
  double min_distance;
  /// The sign change happens between two segments rather than inside one.
  bool through_break = false;
};

/// Compares s^r with the piecewise-linear tau*(s) of the line, extended to the
/// attached critical point.  A sign change adjacent to a critical terminus at
/// which |s^r - tau_c| < kTangencyTolerance counts as touching, not crossing.
ScheduleCrossing schedule_crossing(const ScheduleFamily& family, const TransitionLine& line);

const char* to_string(CrossingKind kind);
const char* to_string(CriticalMethod method);

}  // namespace lhz
