#include "lhzmf/numeric.hpp"

#include <cmath>
#include <vector>

#include "lhzmf/model.hpp"

namespace lhz {

ScalarMinimum golden_section_minimize(const std::function<double(double)>& fn, double lo,
                                      double hi, double tolerance) {
  if (!(hi > lo)) throw DomainError("golden section needs lo < hi");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = fn(c);
  double fd = fn(d);
  while (hi - lo > tolerance) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = fn(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = fn(d);
    }
    if (!(c < d)) break;
  }
  return fc < fd ? ScalarMinimum{c, fc} : ScalarMinimum{d, fd};
}

LineFit fit_decay_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw DomainError("line fit needs at least 2 paired samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("line fit needs distinct abscissae");
  LineFit fit;
  const double slope = sxy / sxx;
  fit.b = -slope;
  fit.a = my - slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.a - fit.b * x[i]);
    fit.rss += r * r;
  }
  return fit;
}

void fit_polynomial(std::span<const double> t, std::span<const double> y, std::span<double> coeffs) {
  const std::size_t n = t.size();
  const std::size_t k = coeffs.size();
  if (n != y.size() || k == 0 || n < k) throw DomainError("polynomial fit is underdetermined");
  // normal equations, solved by Gaussian elimination with partial pivoting
  std::vector<double> a(k * (k + 1), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> pw(2 * k, 1.0);
    for (std::size_t p = 1; p < 2 * k; ++p) pw[p] = pw[p - 1] * t[i];
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) a[r * (k + 1) + c] += pw[r + c];
      a[r * (k + 1) + k] += pw[r] * y[i];
    }
  }
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::abs(a[r * (k + 1) + col]) > std::abs(a[piv * (k + 1) + col])) piv = r;
    if (a[piv * (k + 1) + col] == 0.0) throw DomainError("polynomial fit is singular");
    if (piv != col)
      for (std::size_t c = 0; c <= k; ++c) std::swap(a[piv * (k + 1) + c], a[col * (k + 1) + c]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      const double factor = a[r * (k + 1) + col] / a[col * (k + 1) + col];
      for (std::size_t c = col; c <= k; ++c) a[r * (k + 1) + c] -= factor * a[col * (k + 1) + c];
    }
  }
  for (std::size_t r = 0; r < k; ++r) coeffs[r] = a[r * (k + 1) + k] / a[r * (k + 1) + r];
}

}  // namespace lhz
