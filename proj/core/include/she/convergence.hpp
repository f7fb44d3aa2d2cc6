#pragma once

// Empirical radius of convergence of the SHE and the limsup functional
//   kappa_n = n^{3/2 + beta_m} |C~_n|   (= R^{-n-3} n^{3/2+beta_m} |C_n| R^3).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "she/coeffs.hpp"
#include "she/model.hpp"

namespace she {

struct RootTest {
  /// Estimated radius, in the series' length units, clamped to [0, R].
  double rho = 0.0;
  /// Estimates from the lower and upper half of the tail.
  double rho_first = 0.0;
  double rho_second = 0.0;
  /// Fitted power of n multiplying rho^n.
  double power = 0.0;
  int n_lo = 0;
  int n_hi = 0;
  /// No tail coefficient exceeds its error estimate; rho is 0.
  bool degenerate = false;
  /// The two tail halves agree within kRootAgreement and the tail is long enough.
  bool stable = false;
};

inline constexpr double kRootAgreement = 0.01;
inline constexpr int kRootMinN = 100;

/// Fits log max|C~_n| over short windows to a + b log n + n log(rho/R) on
/// the upper three quarters of the series.
RootTest root_test(const ScaledCoeffSeries& series);

enum class Trend { Decaying, Flat, Increasing };
std::string_view to_string(Trend trend) noexcept;

struct LimsupStat {
  double beta_m = 0.0;
  /// Left ends m of the windows [m, 2m].
  std::vector<int> window_start;
  std::vector<double> window_max;
  /// Log-log slope of the window maxima against m.
  double slope = 0.0;
  Trend trend = Trend::Flat;
};

/// |slope| below this counts as flat.
inline constexpr double kFlatSlope = 0.2;

/// Maxima of n^{3/2+beta_m} |C~_n| over [m, 2m] for m spaced by 2^{1/4}.
/// Throws InvalidArgument unless beta_m > 0.
LimsupStat limsup_stat(const ScaledCoeffSeries& series, double beta_m);

enum class Verdict { ConvergesExactlyAtBrillouin, OverconvergenceSuspected, Inconclusive };
std::string_view to_string(Verdict verdict) noexcept;

struct ConvergenceReport {
  RootTest root;
  LimsupStat limsup;
  Verdict verdict = Verdict::Inconclusive;
  double radius = 1.0;
  int n_min = 0;
  int n_max = 0;
};

inline constexpr double kBrillouinBand = 0.01;
inline constexpr double kOverconvergenceGap = 0.03;

/// Decision table over an existing series. Without beta_m, the fitted power
/// of the root test supplies it.
ConvergenceReport convergence_verdict(const ScaledCoeffSeries& series, std::optional<double> beta_m = {});
/// Computes C~_0..C~_{n_max} first.
ConvergenceReport convergence_verdict(const PlanetProfile& profile, int n_max, const Tolerance& tol = {},
                                      std::optional<double> beta_m = {}, int jobs = 1);

std::string convergence_to_json(const ConvergenceReport& report);

}  // namespace she
