#pragma once

// Zonal SHE coefficients in Brillouin-scaled form
//
//   C~_n = C_n R^-(n+3) = int_0^pi P_n(cos t) e^{-(n+3)F(t)}
//                          int_0^{S(t)} e^{-(n+3)s} sin(t) v(R e^{-F-s}, t) ds dt,
//
// so every factor stays bounded by one and no R^(n+3) is ever formed.

#include <cstdint>
#include <string>
#include <vector>

#include "she/model.hpp"
#include "she/quadrature.hpp"

namespace she {

enum class CoeffStatus { Ok, ToleranceNotMet };

struct CoeffResult {
  double value = 0.0;
  double err = 0.0;
  CoeffStatus status = CoeffStatus::Ok;
};

struct CoeffOptions {
  /// Minimum sampling of the P_n oscillation, in Kronrod nodes per wavelength.
  double nodes_per_wavelength = 10.0;
  /// Integration is restricted to (n+3)(F+s) <= cutoff_level; the neglected
  /// part is bounded by pi sup|sin v| e^{-level}/(n+3) and added to err.
  double cutoff_level = 100.0;
  /// Geometric refinement toward the peak stops once the panel is narrower
  /// than n^{-1/2}/peak_refinement_divisor and (n+3)F there is below 0.01.
  double peak_refinement_divisor = 8.0;
  int max_refinement_levels = 60;
  int max_panels = 20000;
};

CoeffResult coeff_scaled(const AxisymmetricBody& body, int n, const Tolerance& tol = {},
                         const CoeffOptions& options = {});
CoeffResult coeff_scaled(const PlanetProfile& profile, int n, const Tolerance& tol = {},
                         const CoeffOptions& options = {});
/// Closed form; err is a few ulps of the value.
CoeffResult coeff_scaled(const OraclePlanet& planet, int n);

/// int_0^{S} e^{-(n+3)s} sin(theta) v(r_M e^{-s}, theta) ds in units of R.
CoeffResult inner_integral(const AxisymmetricBody& body, double theta, int n, const Tolerance& tol = {});
/// The same quantity straight from the r-form int_{r_m}^{r_M} r^{n+2} v dr,
/// divided by r_M^{n+3} (with the sin(theta) factor).
CoeffResult inner_integral_r(const PlanetProfile& profile, double theta, int n, const Tolerance& tol = {});

struct ScaledCoeffSeries {
  int n_min = 0;
  int n_max = -1;
  std::vector<double> values;
  std::vector<double> errors;
  std::vector<CoeffStatus> statuses;
  std::uint64_t fingerprint = 0;
  double radius = 1.0;

  std::size_t size() const { return values.size(); }
  double at(int n) const { return values.at(static_cast<std::size_t>(n - n_min)); }
  bool all_ok() const;
};

/// Data-parallel over n with `jobs` worker threads (0 = hardware concurrency).
/// The result does not depend on `jobs`.
ScaledCoeffSeries coeff_series(const PlanetProfile& profile, int n_min, int n_max, const Tolerance& tol = {},
                               const CoeffOptions& options = {}, int jobs = 1);
ScaledCoeffSeries coeff_series(const AxisymmetricBody& body, int n_min, int n_max, const Tolerance& tol = {},
                               const CoeffOptions& options = {}, int jobs = 1);
ScaledCoeffSeries coeff_series(const OraclePlanet& planet, int n_min, int n_max);

/// Series from precomputed values (no quadrature).
ScaledCoeffSeries make_series(int n_min, std::vector<double> values, double radius = 1.0,
                              std::uint64_t fingerprint = 0);

struct PotentialResult {
  double value = 0.0;
  double err = 0.0;
  CoeffStatus status = CoeffStatus::Ok;
};

/// Axial potential V(0, 0, z) by 2-D quadrature of the Newtonian kernel.
/// For the body form, z and V are in units of the Brillouin radius.
PotentialResult potential_direct(const AxisymmetricBody& body, double z, const Tolerance& tol = {});
/// z in length units, z > R.
PotentialResult potential_direct(const PlanetProfile& profile, double z, const Tolerance& tol = {});

struct PartialSum {
  double value = 0.0;
  double last_term = 0.0;
};

/// sum_{n_min <= n <= N} C_n z^{-n-1}, evaluated as z^{-1} R^3 sum C~_n (R/z)^n.
PartialSum potential_partial_sum(const ScaledCoeffSeries& series, double z, int N);

/// "n,C_scaled,err" rows.
std::string series_to_csv(const ScaledCoeffSeries& series, const std::string& header_comment = {});
std::string series_to_json(const ScaledCoeffSeries& series);

}  // namespace she
