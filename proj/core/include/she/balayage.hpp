#pragma once

// Balayage of interior masses onto the unit (Brillouin) sphere and the
// operator A acting on the axial potential.
//
// Units: R = 1. Sign convention: mu >= 0 for positive mass and the axial
// potential is V(z) = -Q(p) / sqrt(z^2 + 1), Q(p) = int mu(x) (1 - p x)^{-1/2} dx,
// p = 2z / (z^2 + 1), so V < 0 for positive mass.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace she {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double norm(const Vec3& v);

/// G(x, y) = Phi(y - x) - Phi(|x| (y - x*)), x* = x / |x|^2, Phi(v) = 1 / (4 pi |v|).
/// At x = 0 the image term is its limit 1 / (4 pi). Requires |x| < 1.
double green_sphere(const Vec3& x, const Vec3& y);

/// Swept density of a unit mass at x0 on the unit sphere:
/// (1 - |x0|^2) / (4 pi |y - x0|^3). Requires |x0| < 1.
double swept_density_point(const Vec3& x0, const Vec3& y);

struct PointSource {
  Vec3 position;
  double mass = 1.0;
};

/// mu(x), x = cos(theta), on [-1, 1].
struct SurfaceMeasure {
  std::function<double(double)> mu;
  /// int mu over [-1, 1].
  double mass = 0.0;
  /// Hoelder exponent, when known.
  std::optional<double> holder;
  /// Points in (-1, 1) where mu is not smooth.
  std::vector<double> singular_points;
};

/// G times the longitude integral of the summed swept densities. The
/// longitude integral is the complete elliptic integral of the second kind.
SurfaceMeasure mu_from_point_masses(const std::vector<PointSource>& sources, double G = 1.0);

/// Axial mass at (0, 0, d): (1 - d^2) / (2 (1 - 2 d x + d^2)^{3/2}).
double mu_axial(double d, double x);

/// Wrap a callable; mass is computed by quadrature.
SurfaceMeasure make_measure(std::function<double(double)> mu, std::optional<double> holder = {},
                            std::vector<double> singular_points = {});

/// Q(p) for real p; throws CutViolation unless |p| < 1.
double build_Q(const SurfaceMeasure& mu, double p);
/// Q(p) for complex p off the real cuts (-inf, -1] and [1, inf); principal root.
std::complex<double> build_Q(const SurfaceMeasure& mu, std::complex<double> p);
/// Axial potential -Q(p(z)) / sqrt(z^2 + 1), z > 1.
double axial_potential(const SurfaceMeasure& mu, double z);

struct PowerSeries {
  std::vector<std::complex<double>> c;

  std::size_t size() const { return c.size(); }
  std::complex<double> operator()(std::complex<double> p) const;
};

/// Maclaurin coefficients c_k = b_k int mu x^k, b_k = Gamma(k + 1/2) / (sqrt(pi) k!), k = 0..K.
PowerSeries maclaurin_Q(const SurfaceMeasure& mu, int K);

/// Coefficients of (1 - p)^{-1/2}, k = 0..K.
PowerSeries binomial_half_series(int K);

/// (A f)(p) = sqrt(pi) sum Gamma(1 + k) / Gamma(k + 1/2) c_k p^k.
PowerSeries apply_A_series(const PowerSeries& s);

/// The same operator as sqrt(p) d/dp [p^{-1/2} * f], term by term through
/// p^{-1/2} * p^k = sqrt(pi) p^{k+1/2} Gamma(1 + k) / Gamma(k + 3/2).
PowerSeries apply_A_convolution(const PowerSeries& s);

/// (AQ)(zeta) = zeta int mu(x) / (zeta - x) dx; throws OnCut for zeta in [-1, 1].
std::complex<double> apply_A_cauchy(const SurfaceMeasure& mu, std::complex<double> zeta);

struct PlemeljResult {
  std::complex<double> jump{};
  /// jump / (-2 pi i x0)
  double mu_hat = 0.0;
  /// Difference between the last two extrapolation levels.
  double err = 0.0;
  std::vector<double> eps;
  std::vector<std::complex<double>> raw;
};

inline const std::vector<double> kPlemeljEps{1e-2, 1e-3, 1e-4};

/// AQ(x0 + i eps) - AQ(x0 - i eps), extrapolated to eps = 0 with Neville's
/// scheme. Throws InvalidArgument within 1e-3 of 0 or +-1, and
/// ExtrapolationUnstable when the last two levels disagree by more than 1e-3 relative.
PlemeljResult plemelj_jump(const SurfaceMeasure& mu, double x0, const std::vector<double>& eps = kPlemeljEps);

enum class Analyticity { ConsistentWithAnalytic, NonAnalyticSignature, Inconclusive };
std::string_view to_string(Analyticity a) noexcept;

struct ProbeReport {
  Analyticity verdict = Analyticity::Inconclusive;
  std::vector<double> scales;
  /// Legendre coefficients of mu(x0 + h t), t in [-1, 1], per scale.
  std::vector<std::vector<double>> coefficients;
  /// log2 of the coefficient ratio between consecutive scales, per usable order.
  std::vector<double> scale_exponents;
  std::vector<int> orders;
  double median_exponent = 0.0;
  double median_ratio = 0.0;
};

inline const std::vector<double> kProbeScales{0.2, 0.1, 0.05, 0.025};

/// Heuristic. For analytic mu the order-j coefficient on a stencil of half
/// width h scales like h^j; a Hoelder singularity of order a gives h^a; noise
/// does not scale. Scales that do not fit inside (-1, 1) are dropped.
ProbeReport analyticity_probe(const SurfaceMeasure& mu, double x0, const std::vector<double>& scales = kProbeScales);

std::string measure_to_csv(const SurfaceMeasure& mu, int samples, const std::string& header_comment = {});
std::string probe_to_json(const ProbeReport& report);
std::string plemelj_to_json(const PlemeljResult& result, double x0);

}  // namespace she
