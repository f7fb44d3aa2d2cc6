#pragma once

// Globally adaptive Gauss-Kronrod (7/15) integration over a list of
// breakpoints. Works for real and complex integrands.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

namespace she {

struct Tolerance {
  double rel = 1e-10;
  double abs = 0.0;
};

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  /// Integral of |f|; sets the roundoff floor of the achievable error.
  double l1 = 0.0;
  bool converged = false;
  int evaluations = 0;
};

/// Multiple of eps * int|f| below which no error target is pursued. Each
/// panel reports at least 50 eps times its own int|f|.
inline constexpr double kRoundoffFloor = 100.0;

namespace detail {

inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T>
struct Panel {
  double a;
  double b;
  T value;
  double error;
  double l1;
};

template <class T, class F>
Panel<T> gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  T fv[15];
  fv[7] = f(center);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv[j] = f(center - dx);
    fv[14 - j] = f(center + dx);
  }
  T kron = kWgk[7] * fv[7];
  T gauss = kWg[3] * fv[7];
  double resabs = kWgk[7] * magnitude(fv[7]);
  for (int j = 0; j < 7; ++j) {
    const T pair = fv[j] + fv[14 - j];
    kron += kWgk[j] * pair;
    resabs += kWgk[j] * (magnitude(fv[j]) + magnitude(fv[14 - j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  const T mean = 0.5 * kron;
  double resasc = kWgk[7] * magnitude(fv[7] - mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (magnitude(fv[j] - mean) + magnitude(fv[14 - j] - mean));

  const double scale = std::abs(half);
  double err = magnitude(kron - gauss) * scale;
  resabs *= scale;
  resasc *= scale;
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {a, b, kron * half, err, resabs};
}

}  // namespace detail

/// Adaptive integration of f over consecutive intervals of `breakpoints`
/// (at least two, increasing). Stops when the summed error estimate is below
/// max(tol.abs, tol.rel*|I|, 100 eps * int|f|) or after `max_panels` panels;
/// `converged` reports which.
template <class T, class F>
QuadResult<T> integrate_adaptive(F&& f, std::span<const double> breakpoints, const Tolerance& tol,
                                 int max_panels = 20000) {
  using detail::Panel;
  QuadResult<T> out;
  std::vector<Panel<T>> heap;
  heap.reserve(std::max<std::size_t>(64, breakpoints.size() * 2));
  auto by_error = [](const Panel<T>& l, const Panel<T>& r) { return l.error < r.error; };
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) continue;
    heap.push_back(detail::gk15<T>(f, breakpoints[i], breakpoints[i + 1]));
    out.evaluations += 15;
  }
  std::make_heap(heap.begin(), heap.end(), by_error);
  constexpr double eps = std::numeric_limits<double>::epsilon();

  std::vector<Panel<T>> frozen;  // panels too narrow to split further
  auto totals = [&]() {
    T value{};
    double error = 0.0;
    double l1 = 0.0;
    for (const auto& p : heap) {
      value += p.value;
      error += p.error;
      l1 += p.l1;
    }
    for (const auto& p : frozen) {
      value += p.value;
      error += p.error;
      l1 += p.l1;
    }
    out.value = value;
    out.error = error;
    out.l1 = l1;
  };

  totals();
  long refinements = 0;
  while (true) {
    const double target = std::max({tol.abs, tol.rel * detail::magnitude(out.value), kRoundoffFloor * eps * out.l1});
    if (out.error <= target) {
      out.converged = true;
      break;
    }
    if (heap.empty() || static_cast<int>(heap.size() + frozen.size()) >= max_panels) break;
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Panel<T> worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 1e-14 * std::max(1.0, std::abs(mid))) {
      frozen.push_back(worst);
      continue;
    }
    const Panel<T> left = detail::gk15<T>(f, worst.a, mid);
    const Panel<T> right = detail::gk15<T>(f, mid, worst.b);
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), by_error);
    out.evaluations += 30;
    out.value += (left.value + right.value) - worst.value;
    out.error += (left.error + right.error) - worst.error;
    out.l1 += (left.l1 + right.l1) - worst.l1;
    if (++refinements % 64 == 0) totals();  // resync the running sums
  }
  totals();
  return out;
}

template <class T, class F>
QuadResult<T> integrate_adaptive(F&& f, std::initializer_list<double> breakpoints, const Tolerance& tol,
                                 int max_panels = 20000) {
  std::vector<double> b(breakpoints);
  return integrate_adaptive<T>(std::forward<F>(f), std::span<const double>(b), tol, max_panels);
}

/// Breakpoints covering [a, b] with spacing no larger than `max_width`,
/// merged with the sorted `extra` points that fall inside (a, b).
std::vector<double> panel_breakpoints(double a, double b, double max_width, std::span<const double> extra = {});

}  // namespace she
