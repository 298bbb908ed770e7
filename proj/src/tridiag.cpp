#include "lhzmf/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lhz {

std::size_t sturm_count(std::span<const double> diag, std::span<const double> offdiag_sq, double x) {
  // pivots of the LDL^T factorization of T - x I; zero pivots nudged to -tiny
  const double tiny = std::numeric_limits<double>::min();
  std::size_t negatives = 0;
  double q = diag[0] - x;
  for (std::size_t i = 0;; ++i) {
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++negatives;
    if (i + 1 == diag.size()) break;
    q = diag[i + 1] - x - offdiag_sq[i] / q;
  }
  return negatives;
}

namespace {

std::vector<double> bisect_block(std::span<const double> diag, std::span<const double> offdiag, std::size_t count) {
  const std::size_t n = diag.size();
  if (n == 1) return {diag[0]};

  std::vector<double> off_sq(offdiag.size());
  double lower = std::numeric_limits<double>::infinity();
  double upper = -lower;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? std::abs(offdiag[i - 1]) : 0.0;
    const double right = i + 1 < n ? std::abs(offdiag[i]) : 0.0;
    lower = std::min(lower, diag[i] - left - right);
    upper = std::max(upper, diag[i] + left + right);
    if (i + 1 < n) off_sq[i] = offdiag[i] * offdiag[i];
  }
  const double scale = std::max({std::abs(lower), std::abs(upper), std::numeric_limits<double>::min()});
  const double eps = std::numeric_limits<double>::epsilon();
  lower -= 2.0 * eps * scale;
  upper += 2.0 * eps * scale;

  std::vector<double> values;
  values.reserve(count);
  double floor = lower;
  for (std::size_t k = 0; k < count; ++k) {
    // invariant: count(lo) <= k < count(hi)
    double lo = floor;
    double hi = upper;
    int iterations = 0;
    while (hi - lo > 4.0 * eps * scale) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (sturm_count(diag, off_sq, mid) <= k)
        lo = mid;
      else
        hi = mid;
      if (++iterations > 2000) throw EigensolverError("bisection failed to converge");
    }
    values.push_back(0.5 * (lo + hi));
    floor = lo;
  }
  return values;
}

}  // namespace

std::vector<double> lowest_eigenvalues(std::span<const double> diag, std::span<const double> offdiag,
                                       std::size_t count) {
  const std::size_t n = diag.size();
  if (n == 0 || offdiag.size() + 1 != n) throw EigensolverError("tridiagonal shape mismatch");
  if (count > n) throw EigensolverError("requested more eigenvalues than the matrix order");
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(diag[i]) || (i + 1 < n && !std::isfinite(offdiag[i])))
      throw EigensolverError("non-finite tridiagonal entries");

  // Zero couplings split the matrix into independent blocks; 1x1 blocks are exact.
  std::vector<double> values;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < n && offdiag[i] != 0.0) continue;
    const std::size_t len = i + 1 - begin;
    const auto block = bisect_block(diag.subspan(begin, len), offdiag.subspan(begin, len - 1), std::min(count, len));
    values.insert(values.end(), block.begin(), block.end());
    begin = i + 1;
  }
  std::sort(values.begin(), values.end());
  values.resize(count);
  return values;
}

}  // namespace lhz
