#include "she/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace she {

std::vector<double> panel_breakpoints(double a, double b, double max_width, std::span<const double> extra) {
  std::vector<double> pts;
  pts.push_back(a);
  for (double x : extra)
    if (x > a && x < b) pts.push_back(x);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<double> out;
  out.reserve(pts.size());
  out.push_back(pts.front());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double lo = pts[i - 1];
    const double hi = pts[i];
    const int pieces = max_width > 0.0 ? std::max(1, static_cast<int>(std::ceil((hi - lo) / max_width))) : 1;
    for (int j = 1; j < pieces; ++j) out.push_back(lo + (hi - lo) * j / pieces);
    out.push_back(hi);
  }
  return out;
}

}  // namespace she
