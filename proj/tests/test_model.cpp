#include <doctest.h>

#include <cmath>
#include <limits>

#include "lhzmf/model.hpp"

using namespace lhz;

TEST_CASE("lhz counts") {
  const auto five = lhz_counts(5);
  CHECK(five.logical == 5);
  CHECK(five.physical == 10);
  CHECK(five.constraints == 6);

  const auto two = lhz_counts(2);
  CHECK(two.physical == 1);
  CHECK(two.constraints == 0);

  const auto hundred = lhz_counts(100);
  CHECK(hundred.physical == 4950);
  CHECK(hundred.constraints == 4851);

  // N - N_c = N_l - 1 for every N_l
  for (std::int64_t n = 2; n < 200; ++n) {
    const auto c = lhz_counts(n);
    CHECK(c.physical - c.constraints == n - 1);
  }

  CHECK_THROWS_AS(lhz_counts(1), DomainError);
  CHECK_THROWS_AS(lhz_counts(0), DomainError);
  CHECK_THROWS_AS(lhz_counts(-7), DomainError);
}

TEST_CASE("schedule tau") {
  CHECK(schedule_tau(ScheduleFamily(1.0), 0.37) == doctest::Approx(0.37).epsilon(1e-15));
  for (double r : {0.3, 1.0, 1.56, 2.0, 7.5}) {
    CHECK(schedule_tau(ScheduleFamily(r), 1.0) == 1.0);
    CHECK(schedule_tau(ScheduleFamily(r), 0.0) == 0.0);
  }
  const double oracle = std::exp(1.56 * std::log(0.420550));
  CHECK(schedule_tau(ScheduleFamily(1.56), 0.420550) == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(oracle == doctest::Approx(0.258909).epsilon(1e-5));

  SUBCASE("monotone in s, decreasing in r") {
    for (double r : {0.5, 1.0, 2.0}) {
      double prev = -1.0;
      for (int i = 0; i <= 100; ++i) {
        const double t = schedule_tau(ScheduleFamily(r), i / 100.0);
        CHECK(t > prev);
        prev = t;
      }
    }
    CHECK(schedule_tau(ScheduleFamily(2.0), 0.5) < schedule_tau(ScheduleFamily(1.0), 0.5));
  }

  CHECK_THROWS_AS(ScheduleFamily(1.0).tau(1.2), DomainError);
  CHECK_THROWS_AS(ScheduleFamily(1.0).tau(-0.1), DomainError);
  CHECK_THROWS_AS(ScheduleFamily(0.0), DomainError);
  CHECK_THROWS_AS(ScheduleFamily(-1.0), DomainError);
}

TEST_CASE("control point and temperature validation") {
  CHECK_NOTHROW(ControlPoint(0.0, 1.0));
  CHECK_THROWS_AS(ControlPoint(1.01, 0.5), DomainError);
  CHECK_THROWS_AS(ControlPoint(0.5, -0.01), DomainError);
  CHECK_THROWS_AS(ControlPoint(std::nan(""), 0.5), DomainError);

  CHECK(Temperature::zero().is_zero());
  CHECK(Temperature::inverse(std::numeric_limits<double>::infinity()).is_zero());
  CHECK(Temperature::zero().to_string() == "inf");
  CHECK(Temperature::inverse(1.5).to_string() == "1.5");
  CHECK(Temperature::inverse(2.0).beta() == 2.0);
  CHECK_THROWS_AS(Temperature::zero().beta(), DomainError);
  CHECK_THROWS_AS(Temperature::inverse(0.0), DomainError);
  CHECK_THROWS_AS(Temperature::inverse(-1.0), DomainError);
}

TEST_CASE("coupling models") {
  const auto u = CouplingModel::uniform(0.5);
  CHECK(u.kind() == CouplingKind::Uniform);
  CHECK(u.average([](double J) { return J; }) == 0.5);

  const auto b = CouplingModel::bimodal(0.8, 0.5);
  CHECK(b.average([](double J) { return J; }) == doctest::Approx(0.8 * 0.5 - 0.2 * 0.5));
  CHECK(CouplingModel::bimodal(0.0, 0.5).average([](double J) { return J; }) == -0.5);

  CHECK_THROWS_WITH_AS(CouplingModel::uniform(-1.0), "J must be > 0", DomainError);
  CHECK_THROWS_AS(CouplingModel::uniform(0.0), DomainError);
  CHECK_THROWS_AS(CouplingModel::bimodal(1.2, 0.5), DomainError);
  CHECK_THROWS_AS(CouplingModel::bimodal(-0.1, 0.5), DomainError);
}
