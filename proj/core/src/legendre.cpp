#include "she/legendre.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "she/error.hpp"

namespace she {

double legendre_eval(int n, double x) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "legendre_eval: negative degree");
  if (n == 0) return 1.0;
  double p_prev = 1.0;
  double p = x;
  for (int k = 1; k < n; ++k) {
    const double p_next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
    p_prev = p;
    p = p_next;
  }
  return p;
}

LegendreValue legendre_eval_with_derivative(int n, double x) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "legendre_eval: negative degree");
  if (n == 0) return {1.0, 0.0};
  double p_prev = 1.0;
  double p = x;
  for (int k = 1; k < n; ++k) {
    const double p_next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
    p_prev = p;
    p = p_next;
  }
  // (1 - x^2) P_n' = n (P_{n-1} - x P_n); endpoints use P_n'(+-1) = (+-1)^{n+1} n(n+1)/2.
  const double one_minus = 1.0 - x * x;
  double dp;
  if (one_minus == 0.0) {
    dp = 0.5 * n * (n + 1.0) * ((x > 0.0 || n % 2 == 1) ? 1.0 : -1.0);
  } else {
    dp = n * (p_prev - x * p) / one_minus;
  }
  return {p, dp};
}

double legendre_asym(int n, double theta, double margin) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "legendre_asym: degree must be >= 1");
  const double s = std::sin(theta);
  if (!(s >= margin)) throw Error(ErrorKind::DomainMargin, "legendre_asym: sin(theta) below margin");
  const double amp = 2.0 / std::sqrt(2.0 * std::numbers::pi * n * s);
  return amp * std::cos((n + 0.5) * theta - 0.25 * std::numbers::pi);
}

QuadratureRule gauss_nodes(int m) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "gauss_nodes: m must be >= 1");
  QuadratureRule rule;
  rule.order = m;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  const int half = (m + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Roots counted from the largest; Tricomi-style initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre_eval_with_derivative(m, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15) {
        converged = true;
        break;
      }
    }
    if (!converged) throw Error(ErrorKind::NoConvergence, "gauss_nodes: Newton iteration did not converge");
    const double dp = legendre_eval_with_derivative(m, x).derivative;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[m - 1 - i] = x;
    rule.weights[m - 1 - i] = w;
    rule.nodes[i] = -x;
    rule.weights[i] = w;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
  return rule;
}

const QuadratureRule& gauss_rule(int m) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[m];
  if (!slot) slot = std::make_unique<QuadratureRule>(gauss_nodes(m));
  return *slot;
}

}  // namespace she
