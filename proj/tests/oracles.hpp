#pragma once
// Independent reference implementations used only by the tests.  They follow
// the model definitions directly and deliberately share no code with the
// library.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// f(m) per qubit.  beta = kInf means zero temperature.  Direct ln(2 cosh),
// so only moderate beta is supported.
inline double free_energy(double m, double s, double tau, double beta, double J, double eps = 1.0) {
  auto term = [&](double Ji) {
    const double u = 4.0 * tau * m * m * m + s * Ji;
    const double h = std::sqrt(u * u + (1.0 - s) * (1.0 - s));
    return beta == kInf ? h : std::log(2.0 * std::cosh(beta * h)) / beta;
  };
  double bracket = eps * term(J);
  if (eps < 1.0) bracket += (1.0 - eps) * term(-J);
  return 3.0 * tau * std::pow(m, 4) - bracket;
}

struct GridMinimum {
  double m;
  double f;
};

// Local minima of f over a uniform grid of `points` values in [-1, 1],
// endpoints included when they are lower than their single neighbour.
template <class F>
std::vector<GridMinimum> grid_minima(F&& f, int points) {
  std::vector<double> ms(points), fs(points);
  for (int i = 0; i < points; ++i) {
    ms[i] = -1.0 + 2.0 * i / (points - 1);
    fs[i] = f(ms[i]);
  }
  std::vector<GridMinimum> out;
  for (int i = 0; i < points; ++i) {
    const bool left = i == 0 || fs[i] < fs[i - 1];
    const bool right = i == points - 1 || fs[i] <= fs[i + 1];
    if (left && right) out.push_back({ms[i], fs[i]});
  }
  return out;
}

template <class F>
GridMinimum grid_global_minimum(F&& f, int points) {
  GridMinimum best{0.0, kInf};
  for (int i = 0; i < points; ++i) {
    const double m = -1.0 + 2.0 * i / (points - 1);
    const double v = f(m);
    if (v < best.f) best = {m, v};
  }
  return best;
}

// Full 2^N Hamiltonian -sJ sum sz - tau N (sum sz / N)^4 - (1 - s) sum sx in
// the computational basis.
inline Eigen::MatrixXd full_hamiltonian(int N, double s, double tau, double J) {
  const std::int64_t dim = std::int64_t{1} << N;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (std::int64_t b = 0; b < dim; ++b) {
    int total = 0;
    for (int i = 0; i < N; ++i) total += (b >> i) & 1 ? -1 : 1;
    const double w = static_cast<double>(total) / N;
    H(b, b) = -s * J * total - tau * N * w * w * w * w;
    for (int i = 0; i < N; ++i) H(b ^ (std::int64_t{1} << i), b) -= 1.0 - s;
  }
  return H;
}

inline Eigen::VectorXd full_spectrum(int N, double s, double tau, double J) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(full_hamiltonian(N, s, tau, J), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

}  // namespace oracle
