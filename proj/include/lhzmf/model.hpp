#pragma once

// Domain parameters shared by every module: couplings, the (s, tau) control
// plane, inverse temperature, LHZ qubit counting and power-law schedules.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lhz {

/// Thrown when an argument lies outside the domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

enum class CouplingKind { Uniform, Bimodal };

/// Distribution of the local fields J_i of the mean-field problem Hamiltonian.
///
/// Uniform: every J_i = J.  Bimodal: J_i = +J with weight epsilon and -J with
/// weight 1 - epsilon.  Zero-weight branches are skipped by average(), so
/// Bimodal(epsilon = 1) reproduces Uniform bit for bit.
class CouplingModel {
public:
  static CouplingModel uniform(double J);
  static CouplingModel bimodal(double epsilon, double J);

  CouplingKind kind() const noexcept { return kind_; }
  double J() const noexcept { return J_; }
  /// Weight of +J.  Always 1 for Uniform.
  double epsilon() const noexcept { return epsilon_; }

  /// The bracket [term(J_i)]_i over the field distribution.
  template <class Term>
  double average(Term&& term) const {
    if (kind_ == CouplingKind::Uniform || epsilon_ == 1.0) return term(J_);
    if (epsilon_ == 0.0) return term(-J_);
    return epsilon_ * term(J_) + (1.0 - epsilon_) * term(-J_);
  }

private:
  CouplingModel(CouplingKind kind, double J, double epsilon)
      : kind_(kind), J_(J), epsilon_(epsilon) {}

  CouplingKind kind_;
  double J_;
  double epsilon_;
};

/// A point (s, tau) of the annealing control plane, both in [0, 1].
class ControlPoint {
public:
  ControlPoint(double s, double tau);

  double s() const noexcept { return s_; }
  double tau() const noexcept { return tau_; }

private:
  double s_;
  double tau_;
};

/// Inverse temperature.  Zero temperature is a distinct state, not a large beta.
class Temperature {
public:
  static Temperature zero() noexcept { return Temperature(0.0, true); }
  static Temperature inverse(double beta);

  bool is_zero() const noexcept { return zero_; }
  /// Finite beta; throws DomainError at zero temperature.
  double beta() const;

  /// "inf" at zero temperature, otherwise the shortest round-trip decimal.
  std::string to_string() const;

private:
  Temperature(double beta, bool zero) : beta_(beta), zero_(zero) {}

  double beta_;
  bool zero_;
};

struct LhzCounts {
  std::int64_t logical;      // N_l
  std::int64_t physical;     // N = N_l (N_l - 1) / 2
  std::int64_t constraints;  // N_c = (N_l - 1)(N_l - 2) / 2
};

LhzCounts lhz_counts(std::int64_t logical_qubits);

/// Power-law trajectory tau = s^r through (0, 0) and (1, 1).
class ScheduleFamily {
public:
  explicit ScheduleFamily(double r);

  double exponent() const noexcept { return r_; }
  double tau(double s) const;
  ControlPoint at(double s) const { return ControlPoint(s, tau(s)); }

private:
  double r_;
};

inline double schedule_tau(const ScheduleFamily& family, double s) { return family.tau(s); }

}  // namespace lhz
