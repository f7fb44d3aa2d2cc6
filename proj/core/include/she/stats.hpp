#pragma once

#include <span>
#include <vector>

namespace she {

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rms_residual = 0.0;
};

/// Ordinary least squares y = intercept + slope x. Needs two distinct x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least squares for y = sum_j c_j basis_j(x); columns given row-major as
/// design[i * p + j]. Returns the p coefficients.
std::vector<double> least_squares(std::span<const double> design, std::span<const double> y, int p);

/// Median of the values (copy is sorted). NaN for an empty input.
double median(std::vector<double> values);

}  // namespace she
