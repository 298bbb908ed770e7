#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace lhz {

struct ScalarMinimum {
  double x;
  double value;
};

/// Golden-section search for a minimum of `fn` inside [lo, hi], stopping once
/// the bracket is narrower than `tolerance`.
ScalarMinimum golden_section_minimize(const std::function<double(double)>& fn, double lo,
                                      double hi, double tolerance);

/// Least-squares fit of y = a - b x.
struct LineFit {
  double a = 0.0;
  double b = 0.0;
  double rss = 0.0;
};

LineFit fit_decay_line(std::span<const double> x, std::span<const double> y);

/// Least-squares polynomial coefficients c[0] + c[1] t + ... of given degree.
void fit_polynomial(std::span<const double> t, std::span<const double> y, std::span<double> coeffs);

}  // namespace lhz
