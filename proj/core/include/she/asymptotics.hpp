#pragma once

// Closed-form large-n predictors for the scaled coefficients C~_n and the
// intermediate integrals they are built from.

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "she/coeffs.hpp"
#include "she/model.hpp"

namespace she {

enum class TheoremCase {
  T1,
  T3_i_a_AlphaLt1,
  T3_i_a_Alpha1,
  T3_i_b_AlphaLt1,
  T3_i_b_Alpha1,
  T3_ii_AlphaIn12,
  T3_ii_Alpha2,
};

std::string_view to_string(TheoremCase tag) noexcept;

/// How the two one-sided contributions are combined for a C1 peak.
/// Minus: i^a [i g+ + g1 a+ (1+a)] - (-i)^a [i g- + g1 a- (1+a)].
/// Plus:  i^a [i g+ + g1 a+ (1+a)] + (-i)^a [i g- + g1 a- (1+a)].
enum class C1Assembly { Minus, Plus };

struct AsymptoticPrediction {
  TheoremCase tag = TheoremCase::T1;
  double theta0 = 0.0;

  // Quadratic-peak predictor parameters.
  std::complex<double> a0{};
  double beta0 = 0.0;
  std::complex<double> a1{};
  double beta1 = 0.0;

  // Cusp and C1 predictor parameters: C~_n = n^{-decay} Re(e^{-i pi/4} e^{i(n+1/2) theta0} amplitude).
  double alpha = 0.0;
  double a_plus = 0.0;
  double a_minus = 0.0;
  double k = 0.0;
  double gk = 0.0;
  double g_plus = 0.0;
  double g_minus = 0.0;
  double g1 = 0.0;
  std::complex<double> amplitude{};
  double decay = 0.0;

  int n_min = 0;
  std::vector<double> values;
  /// |complex predictor| at each n: the local envelope of the oscillation.
  std::vector<double> envelope;
  /// True when the bracket's real part is below 1e-12 for every sampled n.
  bool vanishing = false;

  int n_max() const { return n_min + static_cast<int>(values.size()) - 1; }
  double at(int n) const { return values.at(static_cast<std::size_t>(n - n_min)); }
};

/// 2 n^{-3/2} Re[e^{-i pi/4} e^{i(n+1/2) theta0} (a0 n^{-beta0} - a1 n^{-(beta1-1)})].
/// Throws ExceptionalCase when beta0 = beta1 - 1 and a0 = a1, RejectDomain
/// unless beta0 > 1 and beta1 > 2.
double predict_thm1(std::complex<double> a0, double beta0, std::complex<double> a1, double beta1, double theta0,
                    int n);
AsymptoticPrediction predict_thm1_series(std::complex<double> a0, double beta0, std::complex<double> a1,
                                         double beta1, double theta0, int n_min, int n_max);

/// Dispatch on the (peak, weight) pairing. Throws UnsupportedPairing when the
/// pairing is not covered: cusp peaks take smooth-power or two-sided-cusp
/// weights, C1 peaks take the C1 mixed weight with the same alpha.
double predict_thm3(const PeakShape& peak, const SurfaceWeightShape& weight, double theta0, int n,
                    C1Assembly assembly = C1Assembly::Minus);
AsymptoticPrediction predict_thm3_series(const PeakShape& peak, const SurfaceWeightShape& weight, double theta0,
                                         int n_min, int n_max, C1Assembly assembly = C1Assembly::Minus);
/// Same, using the profile's shapes, colatitude and gravitational constant.
AsymptoticPrediction predict_thm3_series(const PlanetProfile& profile, int n_min, int n_max,
                                         C1Assembly assembly = C1Assembly::Minus);

struct JResult {
  std::complex<double> value{};
  double err = 0.0;
  CoeffStatus status = CoeffStatus::Ok;
};

/// J = int_{I0} g e^{-(n+3)F} e^{i(n+1/2) theta} d theta over I0 = (theta0 - delta, theta0 + delta).
JResult oscillatory_J(const PlanetProfile& profile, int n, const Tolerance& tol = {});

/// Estimate from the oscillatory integral: sqrt(2/pi) / ((n+3) sqrt(n)) Re(e^{-i pi/4} J).
double lemma1_estimate(const std::complex<double>& J, int n);

/// Leading Watson term of int_0^S e^{-(n+3)s} v(r_M e^{-s}) ds, i.e. G v(r_M) / (n+3).
double inner_watson(const PlanetProfile& profile, double theta, int n);
/// The same radial integral by quadrature.
double inner_exact(const PlanetProfile& profile, double theta, int n);

/// Fraction of the local envelope below which an index is masked.
inline constexpr double kPhaseMaskFraction = 0.1;

struct RatioReport {
  std::vector<int> n;
  std::vector<double> coeff;
  std::vector<double> pred;
  std::vector<double> ratio;
  std::vector<bool> masked;
  double median_ratio = 0.0;
  /// Regression slope of log|C~_n| on log n over unmasked indices.
  double slope = 0.0;
  double predicted_slope = 0.0;
  /// slope - predicted_slope
  double residual_exponent = 0.0;
  std::size_t kept = 0;
  /// Median within [0.95, 1.05].
  bool pass = false;
};

/// Throws EmptyAfterMasking when no index survives the phase mask.
RatioReport ratio_diagnostic(const ScaledCoeffSeries& series, const AsymptoticPrediction& pred);

/// Slope of log(max |C~_n| over consecutive windows) against log n, with
/// windows of `window` indices. Independent of any predictor.
double envelope_slope(const ScaledCoeffSeries& series, int n_lo, int n_hi, int window);

std::string ratio_report_to_csv(const RatioReport& report, const std::string& header_comment = {});
std::string ratio_report_to_json(const RatioReport& report, const AsymptoticPrediction& pred);

}  // namespace she
