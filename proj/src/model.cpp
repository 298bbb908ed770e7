#include "lhzmf/model.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>

namespace lhz {

namespace {

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

CouplingModel CouplingModel::uniform(double J) {
  if (!(J > 0.0) || !std::isfinite(J)) throw DomainError("J must be > 0");
  return CouplingModel(CouplingKind::Uniform, J, 1.0);
}

CouplingModel CouplingModel::bimodal(double epsilon, double J) {
  if (!(J > 0.0) || !std::isfinite(J)) throw DomainError("J must be > 0");
  if (!in_unit_interval(epsilon)) throw DomainError("epsilon must be in [0, 1]");
  return CouplingModel(CouplingKind::Bimodal, J, epsilon);
}

ControlPoint::ControlPoint(double s, double tau) : s_(s), tau_(tau) {
  if (!in_unit_interval(s)) throw DomainError("s must be in [0, 1]");
  if (!in_unit_interval(tau)) throw DomainError("tau must be in [0, 1]");
}

Temperature Temperature::inverse(double beta) {
  if (std::isinf(beta) && beta > 0.0) return zero();
  if (!(beta > 0.0)) throw DomainError("beta must be > 0 or inf");
  return Temperature(beta, false);
}

double Temperature::beta() const {
  if (zero_) throw DomainError("beta is infinite at zero temperature");
  return beta_;
}

std::string Temperature::to_string() const {
  if (zero_) return "inf";
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), beta_);
  return std::string(buf.data(), res.ptr);
}

LhzCounts lhz_counts(std::int64_t logical_qubits) {
  if (logical_qubits < 2) throw DomainError("N_l must be >= 2");
  // N_l (N_l - 1) has to fit in 63 bits
  if (logical_qubits > 3'000'000'000LL) throw DomainError("N_l must be <= 3000000000");
  const std::int64_t n = logical_qubits;
  return {n, n * (n - 1) / 2, (n - 1) * (n - 2) / 2};
}

ScheduleFamily::ScheduleFamily(double r) : r_(r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("r must be > 0");
}

double ScheduleFamily::tau(double s) const {
  if (!in_unit_interval(s)) throw DomainError("s must be in [0, 1]");
  if (s == 0.0) return 0.0;
  if (s == 1.0) return 1.0;
  return std::pow(s, r_);
}

}  // namespace lhz
