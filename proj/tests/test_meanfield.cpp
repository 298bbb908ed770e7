#include <doctest.h>

#include <cmath>
#include <vector>

#include "lhzmf/meanfield.hpp"
#include "lhzmf/phasediag.hpp"
#include "oracles.hpp"

using namespace lhz;
using doctest::Approx;

namespace {

const auto kUniform = CouplingModel::uniform(0.5);
const auto kZero = Temperature::zero();

std::vector<double> unit_grid(int points) {
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) v[i] = -1.0 + 2.0 * i / (points - 1);
  return v;
}

}  // namespace

TEST_CASE("free energy examples") {
  CHECK(free_energy(0.0, {0.0, 0.0}, kZero, kUniform) == Approx(-1.0).epsilon(1e-15));
  CHECK(free_energy(1.0, {1.0, 1.0}, kZero, kUniform) == Approx(-1.5).epsilon(1e-15));
  CHECK(free_energy(0.5, {0.5, 0.5}, kZero, kUniform) == Approx(0.09375 - std::sqrt(0.5)).epsilon(1e-14));
  CHECK(free_energy(0.5, {0.5, 0.5}, kZero, kUniform) == Approx(-0.613357).epsilon(1e-6));
  for (double J : {0.1, 0.5, 3.0})
    CHECK(free_energy(0.0, {0.0, 0.0}, Temperature::inverse(1.0), CouplingModel::uniform(J)) ==
          Approx(-std::log(2.0 * std::cosh(1.0))).epsilon(1e-14));
  CHECK(-std::log(2.0 * std::cosh(1.0)) == Approx(-1.126928).epsilon(1e-6));
  for (double tau : {0.0, 0.4, 1.0})
    CHECK(free_energy(0.0, {0.5, tau}, kZero, CouplingModel::bimodal(0.5, 0.5)) ==
          Approx(-std::sqrt(0.0625 + 0.25)).epsilon(1e-14));

  CHECK_THROWS_AS(free_energy(1.0001, {0.5, 0.5}, kZero, kUniform), DomainError);
  CHECK_THROWS_AS(free_energy(-1.5, {0.5, 0.5}, kZero, kUniform), DomainError);
}

TEST_CASE("free energy agrees with the direct formula") {
  for (double beta : {oracle::kInf, 0.7, 3.0, 20.0})
    for (double eps : {1.0, 0.8, 0.5, 0.2})
      for (double s : {0.0, 0.3, 0.77, 1.0})
        for (double tau : {0.0, 0.45, 1.0})
          for (double m : {-1.0, -0.6, 0.0, 0.25, 0.9}) {
            const auto couplings = eps == 1.0 ? kUniform : CouplingModel::bimodal(eps, 0.5);
            const auto T = beta == oracle::kInf ? kZero : Temperature::inverse(beta);
            CHECK(free_energy(m, {s, tau}, T, couplings) ==
                  Approx(oracle::free_energy(m, s, tau, beta, 0.5, eps)).epsilon(1e-13));
          }
}

TEST_CASE("self-consistency right-hand side") {
  for (double tau : {0.0, 0.5, 1.0}) CHECK(self_consistency_rhs(0.0, {0.0, tau}, kZero, kUniform) == 0.0);
  for (double m : {-1.0, -0.3, 0.0, 0.6, 1.0}) CHECK(self_consistency_rhs(m, {1.0, 0.0}, kZero, kUniform) == 1.0);
  CHECK(self_consistency_rhs(0.3, {0.5, 0.0}, kZero, kUniform) == Approx(0.25 / std::sqrt(0.0625 + 0.25)).epsilon(1e-14));
  CHECK(self_consistency_rhs(0.3, {0.5, 0.0}, kZero, kUniform) == Approx(0.447214).epsilon(1e-6));

  SUBCASE("bounded by one") {
    for (double beta : {oracle::kInf, 0.5, 5.0, 1e3})
      for (double eps : {1.0, 0.7, 0.5})
        for (int i = 0; i <= 10; ++i)
          for (int j = 0; j <= 10; ++j)
            for (double m : unit_grid(41)) {
              const auto T = beta == oracle::kInf ? kZero : Temperature::inverse(beta);
              const auto c = eps == 1.0 ? kUniform : CouplingModel::bimodal(eps, 0.5);
              CHECK(std::abs(self_consistency_rhs(m, {i / 10.0, j / 10.0}, T, c)) <= 1.0);
            }
  }

  SUBCASE("derivative identity") {
    // f'(m) = 12 tau m^2 (m - RHS) against a centred difference of the oracle formula
    const double h = 1e-5;
    for (double beta : {oracle::kInf, 2.0})
      for (double m : {-0.8, -0.2, 0.35, 0.7}) {
        const double s = 0.4, tau = 0.6;
        const auto T = beta == oracle::kInf ? kZero : Temperature::inverse(beta);
        const double fd = (oracle::free_energy(m + h, s, tau, beta, 0.5) - oracle::free_energy(m - h, s, tau, beta, 0.5)) / (2 * h);
        CHECK(FreeEnergy({s, tau}, T, kUniform).derivative(m) == Approx(fd).epsilon(1e-7));
      }
  }
}

TEST_CASE("stationary point examples") {
  const auto para = find_stationary_points({0.0, 0.0}, kZero, kUniform);
  REQUIRE(para.stationary.size() == 1);
  CHECK(para.global_minimum().m == Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(para.global_minimum().f == Approx(-1.0).epsilon(1e-14));

  const auto aligned = find_stationary_points({1.0, 1.0}, kZero, kUniform);
  CHECK(aligned.global_minimum().m == Approx(1.0).epsilon(1e-12));
  CHECK(aligned.global_minimum().f == Approx(-1.5).epsilon(1e-12));

  const auto linear = find_stationary_points({0.5, 0.0}, kZero, kUniform);
  REQUIRE(linear.stationary.size() == 1);
  CHECK(linear.global_minimum().m == Approx(0.25 / std::sqrt(0.3125)).epsilon(1e-12));
}

TEST_CASE("two minima just below the transition at s = 0.3") {
  const auto tp = find_tau_star(0.3, kZero, kUniform);
  REQUIRE(tp.has_value());
  const double tau = tp->tau_star - 1e-3;

  // dense 1e5-point scan of the independent formula
  const auto grid = oracle::grid_minima([&](double m) { return oracle::free_energy(m, 0.3, tau, oracle::kInf, 0.5); }, 100001);
  REQUIRE(grid.size() == 2);
  CHECK(grid[1].m - grid[0].m > 0.1);

  const auto minima = find_stationary_points({0.3, tau}, kZero, kUniform).minima();
  REQUIRE(minima.size() == 2);
  for (int k = 0; k < 2; ++k) {
    CHECK(minima[k].m == Approx(grid[k].m).scale(1.0).epsilon(2e-5));
    CHECK(minima[k].f <= grid[k].f + 1e-14);
  }
  // below the line the low-m basin is still the global one
  CHECK(find_stationary_points({0.3, tau}, kZero, kUniform).global_minimum().m == Approx(minima[0].m));
}

TEST_CASE("stationary point invariants over the control plane") {
  const std::vector<Temperature> temps = {kZero, Temperature::inverse(1.5), Temperature::inverse(10.0)};
  const std::vector<CouplingModel> models = {kUniform, CouplingModel::bimodal(0.8, 0.5), CouplingModel::bimodal(0.5, 0.5)};
  for (const auto& T : temps)
    for (const auto& c : models)
      for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= 10; ++j) {
          const double s = i / 10.0, tau = j / 10.0;
          const auto report = find_stationary_points({s, tau}, T, c);
          const FreeEnergy fe({s, tau}, T, c);
          REQUIRE(!report.stationary.empty());
          const auto& g = report.global_minimum();
          CHECK(g.kind == StationaryKind::Minimum);

          for (std::size_t k = 0; k < report.stationary.size(); ++k) {
            const auto& p = report.stationary[k];
            CHECK(std::abs(p.m - fe.rhs(p.m)) < kSelfConsistencyTolerance);
            CHECK(g.f <= p.f + kDegenerateMinimumTolerance);
            if (k > 0) {
              CHECK(p.m > report.stationary[k - 1].m);
              // at s = 1, zero T the maxima of f are kinks, not zeros of m - RHS
              if (!(s == 1.0 && T.is_zero())) CHECK(p.kind != report.stationary[k - 1].kind);
            }
            // centred difference of f at the reported point
            const double h = 1e-6;
            if (p.m - h >= -1.0 && p.m + h <= 1.0)
              CHECK(std::abs((fe.value(p.m + h) - fe.value(p.m - h)) / (2 * h)) < 1e-4);
          }

          // global optimality against a 2001-point grid
          for (double m : unit_grid(2001)) CHECK(g.f <= fe.value(m) + 1e-12);
        }
}

TEST_CASE("degenerate minima at the transition report both and prefer larger m") {
  const auto tp = find_tau_star(0.3, kZero, kUniform);
  REQUIRE(tp.has_value());
  const auto report = find_stationary_points({0.3, tp->tau_star}, kZero, kUniform);
  const auto minima = report.minima();
  REQUIRE(minima.size() == 2);
  CHECK(std::abs(minima[0].f - minima[1].f) < kDegenerateMinimumTolerance);
  CHECK(report.global_minimum().m == Approx(minima[1].m));
}

TEST_CASE("symmetry and limits") {
  const auto even = CouplingModel::bimodal(0.5, 0.5);
  for (const auto& T : {kZero, Temperature::inverse(0.8), Temperature::inverse(40.0)})
    for (double s : {0.1, 0.5, 0.9})
      for (double tau : {0.2, 0.7})
        for (double m : unit_grid(101)) {
          CHECK(std::abs(free_energy(m, {s, tau}, T, even) - free_energy(-m, {s, tau}, T, even)) <= 1e-14);
          CHECK(std::abs(free_energy(m, {s, tau}, T, CouplingModel::bimodal(1.0, 0.5)) -
                         free_energy(m, {s, tau}, T, kUniform)) <= 1e-14);
        }

  for (double s : {0.0, 0.25, 0.5, 0.75, 1.0})
    for (double tau : {0.0, 0.25, 0.5, 0.75, 1.0})
      for (double m : unit_grid(2001))
        CHECK(std::abs(free_energy(m, {s, tau}, Temperature::inverse(1e3), kUniform) -
                       free_energy(m, {s, tau}, kZero, kUniform)) < 1e-3);
}

TEST_CASE("sign convention on the saturated branch") {
  // s = 1, tau = 0: RHS is the sign of J, here +1; and with a -J branch weight it averages
  CHECK(self_consistency_rhs(0.2, {1.0, 0.0}, kZero, CouplingModel::bimodal(0.5, 0.5)) == 0.0);
  CHECK(self_consistency_rhs(0.2, {1.0, 0.0}, kZero, CouplingModel::bimodal(0.75, 0.5)) == Approx(0.5));
}

TEST_CASE("landscape sampling") {
  const FreeEnergy fe({0.3, 0.2}, kZero, kUniform);
  const auto pts = sample_landscape(fe, 5);
  REQUIRE(pts.size() == 5);
  CHECK(pts.front().m == -1.0);
  CHECK(pts.back().m == 1.0);
  CHECK(pts[2].m == 0.0);
  for (const auto& p : pts) CHECK(p.f == fe.value(p.m));
  CHECK_THROWS_AS(sample_landscape(fe, 1), DomainError);
}
