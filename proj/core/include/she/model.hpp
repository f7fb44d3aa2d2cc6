#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace she {

inline constexpr int kPlanetSchemaVersion = 1;

/// A correction term h(x), x = theta - theta0, with a declared order:
/// |h(x)| = O(|x|^order) as x -> 0. The built-in forms serialize; a custom
/// callable does not.
struct Correction {
  enum class Kind { None, Power, SignedPower, Custom };

  Kind kind = Kind::None;
  double coefficient = 0.0;
  double order = 0.0;
  std::function<double(double)> custom;

  static Correction none() { return {}; }
  /// coefficient * |x|^order
  static Correction power(double coefficient, double order) { return {Kind::Power, coefficient, order, {}}; }
  /// coefficient * sign(x) |x|^order
  static Correction signed_power(double coefficient, double order) {
    return {Kind::SignedPower, coefficient, order, {}};
  }
  static Correction custom_fn(std::function<double(double)> fn, double declared_order) {
    return {Kind::Custom, 0.0, declared_order, std::move(fn)};
  }

  double operator()(double x) const;
  bool is_zero() const { return kind == Kind::None || (kind != Kind::Custom && coefficient == 0.0); }
};

// Peak shapes, F~(x) = F(theta0 + x).

/// F~ = c x^2 + h(x), h = O(|x|^beta), beta > 2.
struct QuadraticPeak {
  double curvature = 1.0;
  Correction remainder;
};

/// F~ = a_(+-) |x|^alpha + h(x), alpha in (0, 1], h = O(|x|^beta), beta > alpha.
struct PowerCuspPeak {
  double alpha = 1.0;
  double a_minus = 1.0;
  double a_plus = 1.0;
  Correction remainder;
};

/// F~ = a_(+-) |x|^alpha, alpha in (1, 2].
struct PowerC1Peak {
  double alpha = 1.5;
  double a_minus = 1.0;
  double a_plus = 1.0;
};

using PeakShape = std::variant<QuadraticPeak, PowerCuspPeak, PowerC1Peak>;

/// Number of derivatives F~ has at the peak: 0 for cusps, 1 for C1 peaks,
/// 2 for the quadratic form.
int derivative_count(const PeakShape& peak);

// Surface weights, g~(x) = g(theta0 + x).

/// g~ = g_k x^k (1 + h(x)), k >= 1 integer, h(0) = 0.
struct SmoothPowerWeight {
  int k = 1;
  double gk = 1.0;
  Correction correction;
};

/// g~ = (1 + h(x)) g_(+-) |x|^k, k >= 1 real.
struct TwoSidedCuspWeight {
  double k = 1.0;
  double g_plus = 1.0;
  double g_minus = 1.0;
  Correction correction;
};

/// g~ = g1 x + g_(+-) |x|^alpha, alpha in (1, 2].
struct C1MixedWeight {
  double g1 = 1.0;
  double g_plus = 1.0;
  double g_minus = 1.0;
  double alpha = 1.5;
};

/// g~ = |x|^(beta0 - 1) P(x) on |x| < half_width, zero outside, with the
/// taper P(x) = (1 - (x/half_width)^2)^taper_order. P(0) = 1 and P vanishes
/// to order taper_order at the ends, which must exceed beta0 + 1.
struct FourierTailWeight {
  double beta0 = 1.5;
  double half_width = 0.3;
  int taper_order = 4;
};

using SurfaceWeightShape = std::variant<SmoothPowerWeight, TwoSidedCuspWeight, C1MixedWeight, FourierTailWeight>;

double eval_peak(const PeakShape& peak, double x);
double eval_weight(const SurfaceWeightShape& weight, double x);
double eval_taper(const FourierTailWeight& weight, double x);

/// v(r, theta) with r in length units.
using RadialDensity = std::function<double(double r, double theta)>;

struct PlanetSpec {
  int schema_version = kPlanetSchemaVersion;
  double radius = 1.0;  ///< Brillouin radius R
  double theta0 = 1.0;  ///< colatitude of the highest peak
  PeakShape peak = QuadraticPeak{};
  SurfaceWeightShape weight = SmoothPowerWeight{};
  double delta = 0.3;             ///< half-width of the peak neighborhood I0
  double delta1 = 1e-3;           ///< F > delta1 outside I0
  double inner_fraction = 0.5;    ///< r_m = inner_fraction * r_M
  double gravitational_constant = 1.0;
  /// Optional full radial density. When empty, v is constant in r and equal to
  /// g(theta)/sqrt(sin theta) from the weight shape.
  RadialDensity radial_density;
};

/// Integrand description shared by all coefficient and potential routines.
/// Radii are in units of R: r_M(theta) = exp(-F(theta)), r = r_M exp(-s).
struct AxisymmetricBody {
  std::function<double(double)> F;
  /// log(r_M / r_m); may be +inf.
  std::function<double(double)> log_depth;
  /// G sin(theta) v(R rho, theta)
  std::function<double(double rho, double theta)> sin_v;
  bool radially_uniform = false;
  std::optional<double> peak;
  /// Narrowest feature (in theta and in s) the integrand can contain.
  double feature_scale = std::numeric_limits<double>::infinity();
  /// F sampled on a uniform grid over [0, pi]; empty means "no localization".
  std::vector<double> F_grid;
  /// Bound on |sin(theta) v| over the body.
  double sup_sin_v = 0.0;
  /// Extra theta breakpoints (kinks of the integrand).
  std::vector<double> breakpoints;
  /// When set, sin_v is negligible outside these theta / s ranges.
  std::optional<std::pair<double, double>> theta_support;
  std::optional<std::pair<double, double>> s_support;
};

class PlanetProfile {
 public:
  const PlanetSpec& spec() const { return impl_->spec; }
  double radius() const { return impl_->spec.radius; }
  double theta0() const { return impl_->spec.theta0; }

  double eval_F(double theta) const;
  double eval_g(double theta) const;
  /// Outer radius in length units.
  double eval_rM(double theta) const;
  double eval_rm(double theta) const;
  /// v(r, theta), r in length units. Diverges at the poles when g does not vanish there.
  double eval_v(double r, double theta) const;
  double log_depth(double theta) const;

  std::uint64_t fingerprint() const { return impl_->fingerprint; }
  const AxisymmetricBody& body() const { return impl_->body; }

 private:
  struct Impl {
    PlanetSpec spec;
    std::uint64_t fingerprint = 0;
    AxisymmetricBody body;
  };
  std::shared_ptr<const Impl> impl_;

  friend PlanetProfile build_profile(const PlanetSpec& spec);
};

/// Number of theta samples used by the genericity check.
inline constexpr int kValidationGrid = 100001;

/// Validate the spec and freeze it into an immutable profile.
/// Throws RejectDomain (theta0 at 0, pi/2, pi within 1e-9; bad parameters),
/// RejectNonGeneric (second global maximum, F <= delta1 outside I0), or
/// InvalidArgument (declared correction order contradicted numerically).
PlanetProfile build_profile(const PlanetSpec& spec);

// Closed-form oracle planets.

struct PointMass {
  double r0 = 0.5;
  double theta = 0.0;
  double mass = 1.0;
  double gravitational_constant = 1.0;
  double reference_radius = 1.0;
};

struct HomogeneousBall {
  double radius = 1.0;
  double density = 1.0;
  double gravitational_constant = 1.0;
  double reference_radius = 1.0;
};

using OraclePlanet = std::variant<PointMass, HomogeneousBall>;

OraclePlanet point_mass_planet(double r0, double theta_p, double mass, double G = 1.0, double reference_radius = 1.0);
OraclePlanet homogeneous_ball(double radius, double density, double G = 1.0);

double reference_radius(const OraclePlanet& planet);
/// C_n in length units.
double oracle_coefficient(const OraclePlanet& planet, int n);
/// C_n R^-(n+3).
double oracle_scaled_coefficient(const OraclePlanet& planet, int n);
/// Potential at (0, 0, z).
double oracle_potential(const OraclePlanet& planet, double z);

/// Gaussian bump of total mass `mass` and width `width` centered at
/// (r0, theta_p), inside the unit Brillouin sphere. Its zonal coefficients
/// equal those of the point mass up to the (negligible) truncated tails.
AxisymmetricBody mollified_point_mass(double r0, double theta_p, double mass, double width, double G = 1.0);

/// Homogeneous ball of unit radius as a quadrature body.
AxisymmetricBody homogeneous_ball_body(double density, double G = 1.0);

}  // namespace she
