#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace lhz {

/// Raised when bisection cannot isolate an eigenvalue (non-finite input).
class EigensolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Number of eigenvalues strictly below x of the symmetric tridiagonal matrix
/// with diagonal `diag` and squared off-diagonal `offdiag_sq` (Sturm count).
std::size_t sturm_count(std::span<const double> diag, std::span<const double> offdiag_sq, double x);

/// The `count` smallest eigenvalues, ascending, of a real symmetric tridiagonal
/// matrix, by Sturm-sequence bisection.  Deterministic; each eigenvalue is
/// isolated to a few ulps of the Gershgorin radius.
std::vector<double> lowest_eigenvalues(std::span<const double> diag, std::span<const double> offdiag,
                                       std::size_t count);

}  // namespace lhz
