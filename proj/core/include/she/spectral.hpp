#pragma once

// Fourier-side diagnostics. Convention throughout:
//   f^(k) = (1/sqrt(2 pi)) int e^{-ikx} f(x) dx.

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "she/quadrature.hpp"

namespace she {

/// C-infinity cutoff: 1 on |theta - theta0| <= eps, 0 on |theta - theta0| >= 2 eps,
/// built from the smooth step psi(t)/(psi(t) + psi(1-t)), psi(t) = e^{-1/t}.
class Cutoff {
 public:
  Cutoff(double theta0, double eps) : theta0_(theta0), eps_(eps) {}
  double operator()(double theta) const { return shifted(theta - theta0_); }
  /// Value at theta0 + x.
  double shifted(double x) const;
  double theta0() const { return theta0_; }
  double eps() const { return eps_; }

 private:
  double theta0_;
  double eps_;
};

/// Throws RejectDomain unless eps > 0 and 2 eps < min(theta0, pi - theta0).
Cutoff build_cutoff(double theta0, double eps);

/// Smooth step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t);

struct FourierResult {
  std::complex<double> value{};
  double err = 0.0;
  bool converged = true;
};

using RealFunction = std::function<double(double)>;

/// f^(k) for f supported in [a, b]. Panels resolve the oscillation with at
/// least `nodes_per_wavelength` Kronrod nodes, and are graded geometrically
/// toward each point in `singular_points` (where f may be non-smooth).
FourierResult fourier_eval(const RealFunction& f, double a, double b, double k, const Tolerance& tol = {},
                           const std::vector<double>& singular_points = {}, double nodes_per_wavelength = 10.0);

/// |x|^{beta-1} P(x) phi(x) with P(x) = (1 - (x/eps)^2)^{m} and the cutoff
/// phi of plateau eps. P(0) = 1 and P vanishes to order m at +-eps.
RealFunction appendix_function(double beta, double eps, int m);

enum class AppendixVariant {
  /// Negative side i^beta Gamma(beta)/k^beta (mirror of the positive side).
  Corrected,
  /// Negative side -i e^{i pi beta} Gamma(beta)/k^beta.
  AsPrinted,
};

/// Large-|k| tail of f^ for the appendix function: the sum of the two
/// one-sided contributions Gamma(beta) [(-i)^beta + side] |k|^-beta, divided by
/// sqrt(2 pi); negative k take the complex conjugate. Throws IntegerBeta for
/// integer beta, RejectDomain for beta <= 1.
std::function<std::complex<double>(double)> appendix_oracle(double beta,
                                                            AppendixVariant variant = AppendixVariant::Corrected);

struct TailFit {
  double beta = 0.0;
  /// Limit of (-k)^beta f^(k) as k -> -infinity.
  std::complex<double> amplitude{};
  double k_lo = 0.0;
  double k_hi = 0.0;
  /// Relative uncertainty of the amplitude: the larger of its change over the
  /// last three windows and its change when beta is refitted on the far quarter.
  double residual = 0.0;
  std::vector<std::complex<double>> window_amplitudes;
};

/// Windows [2^j, 2^{j+1}] * kTailBase.
inline constexpr double kTailBase = -50.0;
inline constexpr double kTailMaxResidual = 0.2;

/// Fit (-k)^{-beta} a to samples with k < 0. Needs >= 20 samples spanning
/// >= 2 decades of |k| (InsufficientSamples); NoPowerLaw if the residual
/// exceeds 20% or the tail is not a power.
TailFit fit_tail(const std::vector<double>& k, const std::vector<std::complex<double>>& fhat);

/// Log-spaced negative k grid from -k_min to -k_max (k_min, k_max > 0).
std::vector<double> negative_k_grid(double k_min, double k_max, int count);

struct LinfReport {
  double sup = 0.0;
  double argmax_k = 0.0;
  /// Sup over the inner half of the |k| range.
  double sup_inner = 0.0;
  /// Log-log slope of the weighted magnitudes over the outer half.
  double outer_slope = 0.0;
  /// Weighted magnitude keeps growing toward the largest |k|.
  bool unbounded_trend = false;
};

/// sup over the grid of (1 + |k|)^beta |f^(k)|, with a growth check.
LinfReport check_Linf(double beta, const std::vector<double>& k, const std::vector<std::complex<double>>& fhat);

/// (1/sqrt(2cn)) int_{-n-n^q}^{-n+n^q} f^(k) e^{-(k+n)^2/(4cn)} dk.
std::complex<double> gaussian_window(const std::function<std::complex<double>(double)>& fhat, double n, double c,
                                     double q);

std::string transform_to_csv(const std::vector<double>& k, const std::vector<std::complex<double>>& fhat,
                             const std::string& header_comment = {});
std::string tail_fit_to_json(const TailFit& fit);

}  // namespace she
