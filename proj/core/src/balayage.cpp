#include "she/balayage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"
#include "she/error.hpp"
#include "she/format.hpp"
#include "she/legendre.hpp"
#include "she/quadrature.hpp"
#include "she/stats.hpp"

namespace she {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

Vec3 sub(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 scale(const Vec3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }

double phi(const Vec3& v) { return 1.0 / (4.0 * kPi * norm(v)); }

std::vector<double> breakpoints_for(const SurfaceMeasure& mu, std::vector<double> extra) {
  for (double s : mu.singular_points) extra.push_back(s);
  return panel_breakpoints(-1.0, 1.0, 0.25, extra);
}

// Grading toward c at scale w, inside [-1, 1].
void grade_toward(std::vector<double>& extra, double c, double w) {
  extra.push_back(c);
  for (double d = 0.25; d > 0.25 * w; d *= 0.5) {
    extra.push_back(c - d);
    extra.push_back(c + d);
  }
}

constexpr Tolerance kMeasureTol{1e-13, 0.0};

}  // namespace

double norm(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

double green_sphere(const Vec3& x, const Vec3& y) {
  const double r = norm(x);
  if (!(r < 1.0)) throw Error(ErrorKind::RejectDomain, "green_sphere needs |x| < 1");
  if (r == 0.0) return phi(y) - 1.0 / (4.0 * kPi);
  // |x| (y - x*) = |x| y - x / |x|
  return phi(sub(y, x)) - phi(sub(scale(y, r), scale(x, 1.0 / r)));
}

double swept_density_point(const Vec3& x0, const Vec3& y) {
  const double r = norm(x0);
  if (!(r < 1.0)) throw Error(ErrorKind::RejectDomain, "swept density needs |x0| < 1");
  const double d = norm(sub(y, x0));
  return (1.0 - r * r) / (4.0 * kPi * d * d * d);
}

double mu_axial(double d, double x) { return (1.0 - d * d) / (2.0 * std::pow(1.0 - 2.0 * d * x + d * d, 1.5)); }

SurfaceMeasure mu_from_point_masses(const std::vector<PointSource>& sources, double G) {
  struct Polar {
    double r;
    double c;
    double s;
    double weight;
  };
  std::vector<Polar> src;
  double mass = 0.0;
  for (const auto& p : sources) {
    const double r = norm(p.position);
    if (!(r < 1.0)) throw Error(ErrorKind::RejectDomain, "point sources must lie inside the unit sphere");
    const double c = r > 0.0 ? p.position.z / r : 1.0;
    src.push_back({r, c, std::sqrt(std::max(0.0, 1.0 - c * c)), G * p.mass * (1.0 - r * r) / (4.0 * kPi)});
    mass += G * p.mass;
  }
  SurfaceMeasure out;
  out.mass = mass;
  out.mu = [src](double x) {
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    double total = 0.0;
    for (const auto& p : src) {
      // int_0^{2 pi} (A - B cos l)^{-3/2} dl = 4 E(k) / ((A - B) sqrt(A + B)), k^2 = 2B / (A + B)
      const double A = 1.0 + p.r * p.r - 2.0 * p.r * x * p.c;
      const double B = 2.0 * p.r * s * p.s;
      const double k = std::sqrt(2.0 * B / (A + B));
      total += p.weight * 4.0 * std::comp_ellint_2(k) / ((A - B) * std::sqrt(A + B));
    }
    return total;
  };
  return out;
}

SurfaceMeasure make_measure(std::function<double(double)> mu, std::optional<double> holder,
                            std::vector<double> singular_points) {
  SurfaceMeasure out;
  out.mu = std::move(mu);
  out.holder = holder;
  out.singular_points = std::move(singular_points);
  const auto bps = breakpoints_for(out, {});
  out.mass = integrate_adaptive<double>(out.mu, std::span<const double>(bps), kMeasureTol).value;
  return out;
}

cd build_Q(const SurfaceMeasure& mu, cd p) {
  if (p.imag() == 0.0 && std::abs(p.real()) >= 1.0) {
    throw Error(ErrorKind::CutViolation, "real p must satisfy |p| < 1");
  }
  std::vector<double> extra;
  const double ap = std::abs(p);
  if (ap > 0.5) {
    const double c = std::clamp(1.0 / (p.real() >= 0.0 ? ap : -ap), -1.0, 1.0);
    grade_toward(extra, c, std::max(1e-12, std::abs(1.0 / ap - 1.0) + std::abs(p.imag())));
  }
  const auto bps = breakpoints_for(mu, extra);
  auto f = [&](double x) { return mu.mu(x) / std::sqrt(1.0 - p * x); };
  return integrate_adaptive<cd>(f, std::span<const double>(bps), kMeasureTol).value;
}

double build_Q(const SurfaceMeasure& mu, double p) {
  if (!(std::abs(p) < 1.0)) throw Error(ErrorKind::CutViolation, "real p must satisfy |p| < 1");
  return build_Q(mu, cd(p, 0.0)).real();
}

double axial_potential(const SurfaceMeasure& mu, double z) {
  if (!(z > 1.0)) throw Error(ErrorKind::RejectDomain, "axial potential needs z > 1");
  return -build_Q(mu, 2.0 * z / (z * z + 1.0)) / std::sqrt(z * z + 1.0);
}

cd PowerSeries::operator()(cd p) const {
  cd acc{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * p + *it;
  return acc;
}

PowerSeries binomial_half_series(int K) {
  if (K < 0) throw Error(ErrorKind::InvalidArgument, "K must be >= 0");
  PowerSeries s;
  double b = 1.0;
  for (int k = 0; k <= K; ++k) {
    s.c.emplace_back(b);
    b *= (k + 0.5) / (k + 1.0);
  }
  return s;
}

PowerSeries maclaurin_Q(const SurfaceMeasure& mu, int K) {
  PowerSeries s = binomial_half_series(K);
  const auto bps = breakpoints_for(mu, {});
  for (int k = 0; k <= K; ++k) {
    auto f = [&](double x) { return mu.mu(x) * std::pow(x, k); };
    s.c[static_cast<std::size_t>(k)] *= integrate_adaptive<double>(f, std::span<const double>(bps), kMeasureTol).value;
  }
  return s;
}

PowerSeries apply_A_series(const PowerSeries& s) {
  PowerSeries out = s;
  double r = 1.0;  // sqrt(pi) Gamma(1 + k) / Gamma(k + 1/2)
  for (std::size_t k = 0; k < out.c.size(); ++k) {
    out.c[k] *= r;
    r *= (k + 1.0) / (k + 0.5);
  }
  return out;
}

PowerSeries apply_A_convolution(const PowerSeries& s) {
  PowerSeries out = s;
  for (std::size_t k = 0; k < out.c.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double conv = kSqrtPi * std::exp(std::lgamma(1.0 + kk) - std::lgamma(kk + 1.5));
    // sqrt(p) d/dp p^{k+1/2} = (k + 1/2) p^k
    out.c[k] *= conv * (kk + 0.5);
  }
  return out;
}

cd apply_A_cauchy(const SurfaceMeasure& mu, cd zeta) {
  if (zeta.imag() == 0.0 && std::abs(zeta.real()) <= 1.0) {
    throw Error(ErrorKind::OnCut, "zeta lies on [-1, 1]");
  }
  std::vector<double> extra;
  const double c = std::clamp(zeta.real(), -1.0, 1.0);
  const double w = std::abs(zeta.imag()) + std::abs(zeta.real() - c);
  if (w < 0.25) grade_toward(extra, c, w);
  const auto bps = breakpoints_for(mu, extra);
  auto f = [&](double x) { return mu.mu(x) / (zeta - x); };
  return zeta * integrate_adaptive<cd>(f, std::span<const double>(bps), kMeasureTol).value;
}

PlemeljResult plemelj_jump(const SurfaceMeasure& mu, double x0, const std::vector<double>& eps) {
  if (!(std::abs(x0) >= 1e-3 && std::abs(x0) <= 1.0 - 1e-3)) {
    throw Error(ErrorKind::InvalidArgument, "x0 must stay 1e-3 away from 0 and +-1");
  }
  if (eps.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two eps values");
  PlemeljResult out;
  out.eps = eps;
  // The chord L through the endpoint values carries the log(zeta -+ 1) terms of
  // the transform; its part is removed in closed form and its jump added back.
  double a = 0.0;
  double b = 0.0;
  const double lo = mu.mu(-1.0);
  const double hi = mu.mu(1.0);
  if (std::isfinite(lo) && std::isfinite(hi)) {
    a = 0.5 * (hi + lo);
    b = 0.5 * (hi - lo);
  }
  auto chord = [a, b](cd z) { return z * ((a + b * z) * (std::log(z + 1.0) - std::log(z - 1.0)) - 2.0 * b); };
  std::vector<cd> t;
  for (double e : eps) {
    if (!(e > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps values must be positive");
    const cd up{x0, e};
    const cd down{x0, -e};
    out.raw.push_back(apply_A_cauchy(mu, up) - apply_A_cauchy(mu, down));
    t.push_back(out.raw.back() - (chord(up) - chord(down)));
  }
  // Neville tableau evaluated at eps = 0; row m holds interpolants through m+1 points.
  const std::size_t m = eps.size();
  cd prev = t.back();
  for (std::size_t level = 1; level < m; ++level) {
    for (std::size_t i = 0; i + level < m; ++i) {
      const double a = eps[i];
      const double b = eps[i + level];
      t[i] = (b * t[i] - a * t[i + 1]) / (b - a);
    }
    if (level + 1 < m) prev = t[m - level - 1];
  }
  out.jump = t[0] + cd(0.0, -2.0 * kPi * x0 * (a + b * x0));
  out.err = std::abs(t[0] - prev);
  out.mu_hat = (out.jump / cd(0.0, -2.0 * kPi * x0)).real();
  if (!std::isfinite(out.err) || out.err > 1e-3 * std::abs(out.jump) + 1e-14) {
    throw Error(ErrorKind::ExtrapolationUnstable, "extrapolation levels differ by " + fmt17(out.err));
  }
  return out;
}

std::string_view to_string(Analyticity a) noexcept {
  switch (a) {
    case Analyticity::ConsistentWithAnalytic: return "ConsistentWithAnalytic";
    case Analyticity::NonAnalyticSignature: return "NonAnalyticSignature";
    case Analyticity::Inconclusive: return "Inconclusive";
  }
  return "?";
}

ProbeReport analyticity_probe(const SurfaceMeasure& mu, double x0, const std::vector<double>& scales) {
  constexpr int kOrders = 32;
  const QuadratureRule& rule = gauss_rule(64);
  ProbeReport rep;
  for (double h : scales) {
    if (h > 0.0 && x0 - h > -1.0 && x0 + h < 1.0) rep.scales.push_back(h);
  }
  std::sort(rep.scales.begin(), rep.scales.end(), std::greater<>());
  if (rep.scales.size() < 2) return rep;

  double top = 0.0;
  for (double h : rep.scales) {
    std::vector<double> f(rule.nodes.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = mu.mu(x0 + h * rule.nodes[i]);
    std::vector<double> a(kOrders + 1);
    for (int j = 0; j <= kOrders; ++j) {
      double sum = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) sum += rule.weights[i] * f[i] * legendre_eval(j, rule.nodes[i]);
      a[static_cast<std::size_t>(j)] = 0.5 * (2 * j + 1) * sum;
      top = std::max(top, std::abs(a[static_cast<std::size_t>(j)]));
    }
    rep.coefficients.push_back(std::move(a));
  }

  // Effective exponent e_j with |a_j(h)| ~ h^{e_j} between the widest and narrowest stencil.
  const double floor = 1e-12 * top;
  const auto& wide = rep.coefficients.front();
  const auto& narrow = rep.coefficients.back();
  const double span = std::log2(rep.scales.front() / rep.scales.back());
  std::vector<double> ratios;
  std::vector<double> anomalous;
  for (int j = 2; j <= kOrders; ++j) {
    const double aw = std::abs(wide[static_cast<std::size_t>(j)]);
    const double an = std::abs(narrow[static_cast<std::size_t>(j)]);
    if (aw <= floor || an <= floor) continue;
    const double e = std::log2(aw / an) / span;
    rep.orders.push_back(j);
    rep.scale_exponents.push_back(e);
    ratios.push_back(e / j);
    if (e / j < 0.5) anomalous.push_back(e);
  }
  if (!ratios.empty()) rep.median_ratio = median(ratios);
  if (anomalous.empty()) {
    // Every resolved order shrinks like h^j; the rest fell below roundoff.
    rep.verdict = Analyticity::ConsistentWithAnalytic;
    return rep;
  }
  rep.median_exponent = median(anomalous);
  rep.verdict = rep.median_exponent < 0.25 ? Analyticity::Inconclusive : Analyticity::NonAnalyticSignature;
  return rep;
}

std::string measure_to_csv(const SurfaceMeasure& mu, int samples, const std::string& header_comment) {
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "need at least two samples");
  std::string out;
  if (!header_comment.empty()) out += "# " + header_comment + "\n";
  out += "x,mu\n";
  for (int i = 0; i < samples; ++i) {
    // Interior Chebyshev points avoid the endpoints.
    const double x = -std::cos(kPi * (i + 0.5) / samples);
    out += fmt17(x) + ',' + fmt17(mu.mu(x)) + '\n';
  }
  return out;
}

std::string probe_to_json(const ProbeReport& report) {
  nlohmann::json j;
  j["verdict"] = std::string(to_string(report.verdict));
  j["heuristic"] = true;
  j["scales"] = report.scales;
  j["orders"] = report.orders;
  j["scale_exponents"] = report.scale_exponents;
  j["median_exponent"] = report.median_exponent;
  j["median_ratio"] = report.median_ratio;
  return j.dump(2);
}

std::string plemelj_to_json(const PlemeljResult& result, double x0) {
  nlohmann::json j;
  j["x0"] = x0;
  j["jump"] = {{"re", result.jump.real()}, {"im", result.jump.imag()}};
  j["mu_hat"] = result.mu_hat;
  j["err"] = result.err;
  j["eps"] = result.eps;
  nlohmann::json raw = nlohmann::json::array();
  for (const auto& r : result.raw) raw.push_back({{"re", r.real()}, {"im", r.imag()}});
  j["raw"] = raw;
  return j.dump(2);
}

}  // namespace she
