#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "lhzmf/tridiag.hpp"

using namespace lhz;

TEST_CASE("small matrices") {
  // [[2, -1], [-1, 2]] has eigenvalues 1 and 3
  const std::vector<double> d{2.0, 2.0}, e{-1.0};
  const auto v = lowest_eigenvalues(d, e, 2);
  CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(v[1] == doctest::Approx(3.0).epsilon(1e-14));

  const std::vector<double> one{4.5}, none;
  CHECK(lowest_eigenvalues(one, none, 1)[0] == 4.5);

  // decoupled blocks come out exact and sorted
  const std::vector<double> dd{-6.0, 3.0, -2.0}, ee{0.0, 0.0};
  const auto w = lowest_eigenvalues(dd, ee, 3);
  CHECK(w == std::vector<double>{-6.0, -2.0, 3.0});
}

TEST_CASE("sturm count") {
  const std::vector<double> d{0.0, 0.0, 0.0}, e2{2.0, 2.0};
  // eigenvalues -2, 0, 2
  CHECK(sturm_count(d, e2, -3.0) == 0);
  CHECK(sturm_count(d, e2, -1.0) == 1);
  CHECK(sturm_count(d, e2, 1.0) == 2);
  CHECK(sturm_count(d, e2, 3.0) == 3);
}

TEST_CASE("random matrices against a dense solver") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 30;
    std::vector<double> d(n), e(n - 1);
    for (auto& x : d) x = dist(rng);
    for (auto& x : e) x = trial % 7 == 0 ? 0.0 : dist(rng);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) T(i, i) = d[i];
    for (int i = 0; i + 1 < n; ++i) T(i, i + 1) = T(i + 1, i) = e[i];
    const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(T).eigenvalues();
    const auto got = lowest_eigenvalues(d, e, n);
    for (int i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(ref[i]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("errors") {
  const std::vector<double> d{1.0, 2.0}, e{0.5}, bad{std::numeric_limits<double>::quiet_NaN(), 1.0};
  CHECK_THROWS_AS(lowest_eigenvalues(d, std::vector<double>{}, 1), EigensolverError);
  CHECK_THROWS_AS(lowest_eigenvalues(d, e, 3), EigensolverError);
  CHECK_THROWS_AS(lowest_eigenvalues(bad, e, 1), EigensolverError);
  CHECK_THROWS_AS(lowest_eigenvalues(std::vector<double>{}, std::vector<double>{}, 0), EigensolverError);
}
