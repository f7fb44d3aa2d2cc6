#pragma once

#include <vector>

namespace she {

/// Gauss-Legendre rule on [-1, 1]. Nodes are strictly increasing.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 0;

  /// Integrate f over [a, b] with the affinely mapped rule.
  template <class F>
  auto integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    decltype(f(mid)) sum{};
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
    return sum * half;
  }
};

/// P_n(x) by the upward three-term recurrence.
double legendre_eval(int n, double x);

/// P_n(x) and P_n'(x) together.
struct LegendreValue {
  double value;
  double derivative;
};
LegendreValue legendre_eval_with_derivative(int n, double x);

/// Default lower bound on sin(theta) for the large-n form.
inline constexpr double kAsymptoticSinMargin = 0.05;

/// Leading large-degree form 2/sqrt(2 pi n sin(theta)) * cos((n+1/2) theta - pi/4).
/// Throws DomainMargin when sin(theta) < margin; n must be >= 1.
double legendre_asym(int n, double theta, double margin = kAsymptoticSinMargin);

/// Gauss-Legendre rule with m nodes (Newton on the recurrence). Throws
/// NoConvergence if a root fails to converge in 100 iterations.
QuadratureRule gauss_nodes(int m);

/// Shared, lazily built rule of order m. Thread-safe.
const QuadratureRule& gauss_rule(int m);

}  // namespace she
