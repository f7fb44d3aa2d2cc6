#include "she/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "she/error.hpp"

namespace she {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::InvalidArgument, "fit_line needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorKind::InvalidArgument, "fit_line needs two distinct abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

std::vector<double> least_squares(std::span<const double> design, std::span<const double> y, int p) {
  const std::size_t rows = y.size();
  const std::size_t cols = static_cast<std::size_t>(p);
  if (p < 1 || design.size() != rows * cols || rows < cols) {
    throw Error(ErrorKind::InvalidArgument, "least_squares: inconsistent sizes");
  }
  // Householder QR on a copy.
  std::vector<double> a(design.begin(), design.end());
  std::vector<double> b(y.begin(), y.end());
  for (std::size_t j = 0; j < cols; ++j) {
    double norm = 0.0;
    for (std::size_t i = j; i < rows; ++i) norm += a[i * cols + j] * a[i * cols + j];
    norm = std::sqrt(norm);
    if (norm == 0.0) throw Error(ErrorKind::InvalidArgument, "least_squares: rank deficient design");
    const double alpha = a[j * cols + j] > 0 ? -norm : norm;
    std::vector<double> v(rows - j);
    for (std::size_t i = j; i < rows; ++i) v[i - j] = a[i * cols + j];
    v[0] -= alpha;
    double vnorm = 0.0;
    for (double e : v) vnorm += e * e;
    if (vnorm == 0.0) continue;
    for (std::size_t c = j; c < cols; ++c) {
      double dot = 0.0;
      for (std::size_t i = j; i < rows; ++i) dot += v[i - j] * a[i * cols + c];
      const double f = 2.0 * dot / vnorm;
      for (std::size_t i = j; i < rows; ++i) a[i * cols + c] -= f * v[i - j];
    }
    double dot = 0.0;
    for (std::size_t i = j; i < rows; ++i) dot += v[i - j] * b[i];
    const double f = 2.0 * dot / vnorm;
    for (std::size_t i = j; i < rows; ++i) b[i] -= f * v[i - j];
  }
  std::vector<double> coef(cols);
  for (std::size_t jj = cols; jj-- > 0;) {
    double s = b[jj];
    for (std::size_t c = jj + 1; c < cols; ++c) s -= a[jj * cols + c] * coef[c];
    coef[jj] = s / a[jj * cols + jj];
  }
  return coef;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace she
