#pragma once

// Exact spectra of H(s, tau) = -s J sum_i sz_i - tau N (sum_i sz_i / N)^4 - (1 - s) sum_i sx_i
// restricted to the permutation-symmetric (maximum total spin) sector, which
// has dimension N + 1 and is tridiagonal in the total-sz basis.

#include <span>
#include <string>
#include <vector>

#include "lhzmf/model.hpp"
#include "lhzmf/numeric.hpp"

namespace lhz {

struct SymmetricHamiltonian {
  int N = 0;
  /// Indexed by k = 0..N with total sz eigenvalue w_k = 2k - N.
  std::vector<double> diag;
  /// Coupling between w_k and w_{k+1}, k = 0..N-1.
  std::vector<double> offdiag;
};

SymmetricHamiltonian build_hamiltonian(int N, const ControlPoint& control, double J);

struct GapResult {
  double E0;
  double E1;
  double gap;
  double s;
  double tau;
  int N;
};

GapResult gap_at(int N, const ControlPoint& control, double J);

struct MinGapSearch {
  double s_lo = 1e-3;
  double s_hi = 1.0 - 1e-3;
  double coarse_step = 1e-3;
  double resolution = 1e-8;
};

struct MinGap {
  double s_min;
  double gap_min;
};

/// Minimum of the symmetric-sector gap along tau = s^r.  Every local minimum of
/// a coarse scan is refined by golden section on its bracketing triple.
MinGap min_gap_along_schedule(int N, const ScheduleFamily& family, double J,
                              const MinGapSearch& search = {});

enum class ScalingClass { Exponential, Polynomial, Ambiguous };

std::string to_string(ScalingClass c);

struct ScalingFit {
  std::vector<int> Ns;
  std::vector<double> s_min;
  std::vector<double> gaps;
  /// ln gap = a - b N
  LineFit exp_fit;
  /// ln gap = a - b ln N
  LineFit poly_fit;
  ScalingClass classification = ScalingClass::Ambiguous;
  std::vector<std::string> warnings;
};

/// Gaps below this are treated as numerical noise and left out of the fits.
inline constexpr double kGapNoiseFloor = 1e-13;
/// Required ratio between the worse and the better residual sum of squares.
inline constexpr double kClassificationRatio = 2.0;

/// Fits ln gap against N and ln N and classifies the decay.
ScalingFit classify_gap_scaling(std::span<const int> Ns, std::span<const double> gaps,
                                std::span<const double> s_min = {});

ScalingFit gap_scaling(std::span<const int> Ns, const ScheduleFamily& family, double J,
                       unsigned threads = 0, const MinGapSearch& search = {});

}  // namespace lhz
