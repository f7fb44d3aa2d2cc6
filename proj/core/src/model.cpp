#include "she/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "she/error.hpp"
#include "she/legendre.hpp"
#include "she/model_io.hpp"

namespace she {

namespace {

constexpr double kPi = std::numbers::pi;

double int_pow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

double side(double x, double minus, double plus) { return x < 0.0 ? minus : plus; }

void require(bool ok, ErrorKind kind, const std::string& message) {
  if (!ok) throw Error(kind, message);
}

// |h(x)| / |x|^order must not grow by more than 10x per decade toward 0.
void check_declared_order(const Correction& h, const std::string& what) {
  if (h.is_zero()) return;
  constexpr std::array<double, 3> scales = {1e-2, 1e-3, 1e-4};
  std::array<double, 3> q{};
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double x = scales[i];
    const double ratio = std::max(std::abs(h(x)), std::abs(h(-x))) / std::pow(x, h.order);
    require(std::isfinite(ratio), ErrorKind::InvalidArgument, what + ": correction is not finite near the peak");
    q[i] = ratio;
  }
  for (std::size_t i = 1; i < q.size(); ++i) {
    require(q[i] <= 10.0 * q[i - 1] + 1e-300, ErrorKind::InvalidArgument,
            what + ": declared order " + std::to_string(h.order) + " contradicted numerically");
  }
}

void validate_peak(const PeakShape& peak) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, QuadraticPeak>) {
          require(p.curvature > 0.0, ErrorKind::RejectDomain, "quadratic peak: curvature must be > 0");
          if (!p.remainder.is_zero()) {
            require(p.remainder.order > 2.0, ErrorKind::RejectDomain, "quadratic peak: remainder order must be > 2");
            check_declared_order(p.remainder, "quadratic peak remainder");
          }
        } else if constexpr (std::is_same_v<T, PowerCuspPeak>) {
          require(p.alpha > 0.0 && p.alpha <= 1.0, ErrorKind::RejectDomain, "power cusp: alpha must lie in (0, 1]");
          require(p.a_minus > 0.0 && p.a_plus > 0.0, ErrorKind::RejectDomain, "power cusp: a_minus, a_plus must be > 0");
          if (!p.remainder.is_zero()) {
            require(p.remainder.order > p.alpha, ErrorKind::RejectDomain, "power cusp: remainder order must exceed alpha");
            check_declared_order(p.remainder, "power cusp remainder");
          }
        } else {
          require(p.alpha > 1.0 && p.alpha <= 2.0, ErrorKind::RejectDomain, "power C1 peak: alpha must lie in (1, 2]");
          require(p.a_minus > 0.0 && p.a_plus > 0.0, ErrorKind::RejectDomain,
                  "power C1 peak: a_minus, a_plus must be > 0");
        }
      },
      peak);
}

void validate_weight(const SurfaceWeightShape& weight) {
  std::visit(
      [](const auto& w) {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, SmoothPowerWeight>) {
          require(w.k >= 1, ErrorKind::RejectDomain, "smooth power weight: k must be >= 1");
          require(w.gk != 0.0, ErrorKind::RejectDomain, "smooth power weight: g_k must be nonzero");
          if (!w.correction.is_zero()) {
            require(w.correction.order > 0.0, ErrorKind::RejectDomain, "weight correction must vanish at the peak");
            check_declared_order(w.correction, "smooth power weight correction");
          }
        } else if constexpr (std::is_same_v<T, TwoSidedCuspWeight>) {
          require(w.k >= 1.0, ErrorKind::RejectDomain, "two-sided cusp weight: k must be >= 1");
          require(w.g_plus != 0.0 || w.g_minus != 0.0, ErrorKind::RejectDomain,
                  "two-sided cusp weight: g_plus and g_minus both zero");
          if (!w.correction.is_zero()) {
            require(w.correction.order > 0.0, ErrorKind::RejectDomain, "weight correction must vanish at the peak");
            check_declared_order(w.correction, "two-sided cusp weight correction");
          }
        } else if constexpr (std::is_same_v<T, C1MixedWeight>) {
          require(w.alpha > 1.0 && w.alpha <= 2.0, ErrorKind::RejectDomain, "C1 mixed weight: alpha must lie in (1, 2]");
        } else {
          require(w.beta0 > 1.0, ErrorKind::RejectDomain, "Fourier tail weight: beta0 must be > 1");
          require(w.half_width > 0.0, ErrorKind::RejectDomain, "Fourier tail weight: half_width must be > 0");
          require(w.taper_order > w.beta0 + 1.0, ErrorKind::RejectDomain,
                  "Fourier tail weight: taper must vanish to an order above beta0");
        }
      },
      weight);
}

// Exponentially scaled I0: exp(-a) I0(a), a >= 0.
double scaled_bessel_i0(double a) {
  if (a < 50.0) return std::exp(-a) * std::cyl_bessel_i(0.0, a);
  // Large-argument expansion, terms ((2j-1)!!)^2 / (j! 8^j a^j).
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < 40 && std::abs(term) > 1e-18; ++j) {
    term *= (2.0 * j - 1.0) * (2.0 * j - 1.0) / (8.0 * j * a);
    sum += term;
  }
  return sum / std::sqrt(2.0 * kPi * a);
}

}  // namespace

double Correction::operator()(double x) const {
  switch (kind) {
    case Kind::None: return 0.0;
    case Kind::Power: return coefficient * std::pow(std::abs(x), order);
    case Kind::SignedPower: return (x < 0.0 ? -coefficient : coefficient) * std::pow(std::abs(x), order);
    case Kind::Custom: return custom ? custom(x) : 0.0;
  }
  return 0.0;
}

int derivative_count(const PeakShape& peak) {
  return std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, QuadraticPeak>) return 2;
        else if constexpr (std::is_same_v<T, PowerCuspPeak>) return 0;
        else return 1;
      },
      peak);
}

double eval_peak(const PeakShape& peak, double x) {
  return std::visit(
      [x](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, QuadraticPeak>) {
          return p.curvature * x * x + p.remainder(x);
        } else if constexpr (std::is_same_v<T, PowerCuspPeak>) {
          return side(x, p.a_minus, p.a_plus) * std::pow(std::abs(x), p.alpha) + p.remainder(x);
        } else {
          return side(x, p.a_minus, p.a_plus) * std::pow(std::abs(x), p.alpha);
        }
      },
      peak);
}

double eval_taper(const FourierTailWeight& w, double x) {
  const double u = x / w.half_width;
  if (std::abs(u) >= 1.0) return 0.0;
  return int_pow(1.0 - u * u, w.taper_order);
}

double eval_weight(const SurfaceWeightShape& weight, double x) {
  return std::visit(
      [x](const auto& w) -> double {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, SmoothPowerWeight>) {
          return w.gk * int_pow(x, w.k) * (1.0 + w.correction(x));
        } else if constexpr (std::is_same_v<T, TwoSidedCuspWeight>) {
          if (x == 0.0) return 0.0;
          return (1.0 + w.correction(x)) * side(x, w.g_minus, w.g_plus) * std::pow(std::abs(x), w.k);
        } else if constexpr (std::is_same_v<T, C1MixedWeight>) {
          return w.g1 * x + side(x, w.g_minus, w.g_plus) * std::pow(std::abs(x), w.alpha);
        } else {
          if (std::abs(x) >= w.half_width) return 0.0;
          return std::pow(std::abs(x), w.beta0 - 1.0) * eval_taper(w, x);
        }
      },
      weight);
}

double PlanetProfile::eval_F(double theta) const { return impl_->body.F(theta); }

double PlanetProfile::eval_g(double theta) const {
  const auto& s = impl_->spec;
  if (s.radial_density) return std::sqrt(std::sin(theta)) * s.radial_density(eval_rM(theta), theta);
  return eval_weight(s.weight, theta - s.theta0);
}

double PlanetProfile::eval_rM(double theta) const { return impl_->spec.radius * std::exp(-eval_F(theta)); }

double PlanetProfile::eval_rm(double theta) const { return impl_->spec.inner_fraction * eval_rM(theta); }

double PlanetProfile::eval_v(double r, double theta) const {
  const auto& s = impl_->spec;
  if (s.radial_density) return s.radial_density(r, theta);
  return eval_g(theta) / std::sqrt(std::sin(theta));
}

double PlanetProfile::log_depth(double theta) const { return impl_->body.log_depth(theta); }

PlanetProfile build_profile(const PlanetSpec& spec) {
  require(spec.schema_version == kPlanetSchemaVersion, ErrorKind::RejectDomain, "unsupported schema_version");
  require(spec.radius > 0.0 && std::isfinite(spec.radius), ErrorKind::RejectDomain, "radius must be > 0");
  require(spec.theta0 > 0.0 && spec.theta0 < kPi, ErrorKind::RejectDomain, "theta0 must lie in (0, pi)");
  for (double excluded : {0.0, 0.5 * kPi, kPi}) {
    require(std::abs(spec.theta0 - excluded) > 1e-9, ErrorKind::RejectDomain,
            "theta0 must avoid 0, pi/2 and pi");
  }
  require(spec.delta > 0.0, ErrorKind::RejectDomain, "delta must be > 0");
  require(spec.delta1 > 0.0, ErrorKind::RejectDomain, "delta1 must be > 0");
  require(spec.inner_fraction > 0.0 && spec.inner_fraction < 1.0, ErrorKind::RejectDomain,
          "inner_fraction must lie in (0, 1)");
  require(spec.gravitational_constant > 0.0, ErrorKind::RejectDomain, "gravitational constant must be > 0");
  validate_peak(spec.peak);
  validate_weight(spec.weight);

  auto impl = std::make_shared<PlanetProfile::Impl>();
  impl->spec = spec;
  const double theta0 = spec.theta0;
  const PeakShape peak = spec.peak;
  const double R = spec.radius;

  AxisymmetricBody& body = impl->body;
  body.F = [peak, theta0](double theta) { return eval_peak(peak, theta - theta0); };
  const double depth = -std::log(spec.inner_fraction);
  body.log_depth = [depth](double) { return depth; };
  if (spec.radial_density) {
    const RadialDensity v = spec.radial_density;
    const double G = spec.gravitational_constant;
    body.sin_v = [v, R, G](double rho, double theta) { return G * std::sin(theta) * v(R * rho, theta); };
    body.radially_uniform = false;
  } else {
    const SurfaceWeightShape weight = spec.weight;
    const double G = spec.gravitational_constant;
    body.sin_v = [weight, theta0, G](double, double theta) {
      return G * std::sqrt(std::max(0.0, std::sin(theta))) * eval_weight(weight, theta - theta0);
    };
    body.radially_uniform = true;
  }
  body.peak = theta0;
  if (const auto* tail = std::get_if<FourierTailWeight>(&spec.weight)) {
    body.breakpoints = {theta0 - tail->half_width, theta0 + tail->half_width};
  }

  // Genericity check on a dense grid.
  const int m = kValidationGrid;
  const double h = kPi / (m - 1);
  body.F_grid.resize(m);
  double sup = 0.0;
  for (int i = 0; i < m; ++i) {
    const double theta = i * h;
    const double F = body.F(theta);
    body.F_grid[i] = F;
    const double dist = std::abs(theta - theta0);
    require(std::isfinite(F), ErrorKind::RejectNonGeneric, "F is not finite on [0, pi]");
    if (dist > 2.0 * h) {
      require(F > 1e-12, ErrorKind::RejectNonGeneric,
              "second global maximum of r_M at theta = " + std::to_string(theta));
    }
    if (dist >= spec.delta) {
      require(F > spec.delta1, ErrorKind::RejectNonGeneric,
              "F <= delta1 outside the peak neighborhood at theta = " + std::to_string(theta));
    }
    const double rho_M = std::exp(-F);
    double local = std::abs(body.sin_v(rho_M, theta));
    if (!body.radially_uniform) {
      for (double frac : {0.75, 0.5, spec.inner_fraction}) local = std::max(local, std::abs(body.sin_v(rho_M * frac, theta)));
    }
    if (std::isfinite(local)) sup = std::max(sup, local);
  }
  body.sup_sin_v = sup;

  impl->fingerprint = spec_fingerprint(spec);
  PlanetProfile profile;
  profile.impl_ = std::move(impl);
  return profile;
}

OraclePlanet point_mass_planet(double r0, double theta_p, double mass, double G, double reference_radius) {
  require(r0 >= 0.0, ErrorKind::InvalidArgument, "point mass: r0 must be >= 0");
  require(reference_radius > 0.0, ErrorKind::InvalidArgument, "point mass: reference radius must be > 0");
  return PointMass{r0, theta_p, mass, G, reference_radius};
}

OraclePlanet homogeneous_ball(double radius, double density, double G) {
  require(radius > 0.0 && density > 0.0, ErrorKind::InvalidArgument, "ball: radius and density must be > 0");
  return HomogeneousBall{radius, density, G, radius};
}

double reference_radius(const OraclePlanet& planet) {
  return std::visit([](const auto& p) { return p.reference_radius; }, planet);
}

double oracle_scaled_coefficient(const OraclePlanet& planet, int n) {
  return std::visit(
      [n](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        const double R = p.reference_radius;
        if constexpr (std::is_same_v<T, PointMass>) {
          const double ratio = p.r0 / R;
          return -p.gravitational_constant * p.mass * std::pow(ratio, n) * legendre_eval(n, std::cos(p.theta)) /
                 (R * R * R);
        } else {
          if (n != 0) return 0.0;
          const double b = p.radius / R;
          return -p.gravitational_constant * (4.0 * kPi / 3.0) * p.density * b * b * b;
        }
      },
      planet);
}

double oracle_coefficient(const OraclePlanet& planet, int n) {
  const double R = reference_radius(planet);
  return oracle_scaled_coefficient(planet, n) * std::pow(R, n + 3);
}

double oracle_potential(const OraclePlanet& planet, double z) {
  return std::visit(
      [z](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          const double d2 = z * z - 2.0 * z * p.r0 * std::cos(p.theta) + p.r0 * p.r0;
          return -p.gravitational_constant * p.mass / std::sqrt(d2);
        } else {
          const double mass = (4.0 * kPi / 3.0) * p.density * p.radius * p.radius * p.radius;
          return -p.gravitational_constant * mass / z;
        }
      },
      planet);
}

AxisymmetricBody mollified_point_mass(double r0, double theta_p, double mass, double width, double G) {
  require(r0 > 0.0 && r0 < 1.0, ErrorKind::InvalidArgument, "mollified mass: r0 must lie in (0, 1)");
  require(width > 0.0, ErrorKind::InvalidArgument, "mollified mass: width must be > 0");
  constexpr double kSpan = 12.0;  // Gaussian widths kept; exp(-72) beyond
  AxisymmetricBody body;
  const double norm = -G * mass * std::pow(2.0 * kPi * width * width, -1.5) * 2.0 * kPi;
  body.F = [](double) { return 0.0; };
  const double r_lo = std::max(r0 - kSpan * width, 1e-3);
  const double depth = -std::log(r_lo);
  body.log_depth = [depth](double) { return depth; };
  const double sin_p = std::sin(theta_p);
  body.sin_v = [=](double rho, double theta) {
    const double half = std::sin(0.5 * (theta - theta_p));
    const double d2 = (rho - r0) * (rho - r0) + 4.0 * rho * r0 * half * half;
    const double a = rho * r0 * std::sin(theta) * sin_p / (width * width);
    return std::sin(theta) * norm * std::exp(-d2 / (2.0 * width * width)) * scaled_bessel_i0(std::max(0.0, a));
  };
  body.radially_uniform = false;
  const double dtheta = kSpan * width / r0;
  body.theta_support = {std::max(0.0, theta_p - dtheta), std::min(kPi, theta_p + dtheta)};
  body.s_support = {-std::log(std::min(1.0, r0 + kSpan * width)), depth};
  body.feature_scale = width / r0;
  body.sup_sin_v = std::abs(norm);
  return body;
}

AxisymmetricBody homogeneous_ball_body(double density, double G) {
  AxisymmetricBody body;
  const double v = -2.0 * kPi * G * density;
  body.F = [](double) { return 0.0; };
  body.log_depth = [](double) { return std::numeric_limits<double>::infinity(); };
  body.sin_v = [v](double, double theta) { return std::sin(theta) * v; };
  body.radially_uniform = true;
  body.sup_sin_v = std::abs(v);
  return body;
}

}  // namespace she
