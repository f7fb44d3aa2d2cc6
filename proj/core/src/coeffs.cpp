#include "she/coeffs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "json.hpp"
#include "she/error.hpp"
#include "she/format.hpp"
#include "she/legendre.hpp"
#include "she/model_io.hpp"

namespace she {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Interval {
  double lo;
  double hi;
};

// theta-hull of the region where (n+3) F <= level.
Interval active_theta(const AxisymmetricBody& body, double m, double level) {
  Interval out{0.0, kPi};
  const auto& grid = body.F_grid;
  if (grid.size() >= 2) {
    const double h = kPi / static_cast<double>(grid.size() - 1);
    std::ptrdiff_t first = -1;
    std::ptrdiff_t last = -1;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (m * grid[i] <= level) {
        if (first < 0) first = static_cast<std::ptrdiff_t>(i);
        last = static_cast<std::ptrdiff_t>(i);
      }
    }
    if (first >= 0) {
      out.lo = std::max(0.0, (first - 1) * h);
      out.hi = std::min(kPi, (last + 1) * h);
    } else {
      out.lo = out.hi = 0.0;
    }
  }
  if (body.theta_support) {
    out.lo = std::max(out.lo, body.theta_support->first);
    out.hi = std::min(out.hi, body.theta_support->second);
  }
  return out;
}

std::vector<double> theta_breakpoints(const AxisymmetricBody& body, int n, Interval span, double width,
                                      const CoeffOptions& options) {
  std::vector<double> extra = body.breakpoints;
  if (body.peak) {
    const double t0 = *body.peak;
    const double m = n + 3.0;
    const double floor_width = 1.0 / (std::sqrt(std::max(n, 1)) * options.peak_refinement_divisor);
    extra.push_back(t0);
    double d = width;
    for (int level = 0; level < options.max_refinement_levels; ++level) {
      d *= 0.5;
      extra.push_back(t0 - d);
      extra.push_back(t0 + d);
      const double flat = m * std::max(body.F(t0 - d), body.F(t0 + d));
      if (d < floor_width && flat < 0.01) break;
    }
  }
  return panel_breakpoints(span.lo, span.hi, width, extra);
}

struct InnerAccumulator {
  double worst_rel = 0.0;
  bool converged = true;
};

// int_{s_a}^{s_b} e^{-m s} sin_v(rho_M e^{-s}, theta) ds
QuadResult<double> inner_s(const AxisymmetricBody& body, double theta, double m, double rho_M, double s_a,
                           double s_b, double rel) {
  std::vector<double> pts{s_a};
  for (double t : {1.0, 4.0, 12.0, 40.0}) {
    const double s = t / m;
    if (s > s_a && s < s_b) pts.push_back(s);
  }
  pts.push_back(s_b);
  const double width = std::isfinite(body.feature_scale) ? body.feature_scale : 0.0;
  std::vector<double> bps = panel_breakpoints(s_a, s_b, width, pts);
  auto f = [&](double s) { return std::exp(-m * s) * body.sin_v(rho_M * std::exp(-s), theta); };
  return integrate_adaptive<double>(f, std::span<const double>(bps), Tolerance{rel, 0.0}, 2000);
}

double inner_rel_tol(const Tolerance& tol) { return std::max(1e-13, std::min(1e-3 * tol.rel, 1e-12)); }

}  // namespace

CoeffResult coeff_scaled(const AxisymmetricBody& body, int n, const Tolerance& tol, const CoeffOptions& options) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "coefficient degree must be >= 0");
  const double m = n + 3.0;
  const double level = options.cutoff_level;
  const double trunc = kPi * body.sup_sin_v * std::exp(-level) / m;

  const Interval span = active_theta(body, m, level);
  CoeffResult out;
  if (!(span.hi > span.lo)) {
    out.err = trunc;
    return out;
  }

  double width = (15.0 / options.nodes_per_wavelength) * 2.0 * kPi / (n + 0.5);
  if (std::isfinite(body.feature_scale)) width = std::min(width, body.feature_scale);
  const std::vector<double> bps = theta_breakpoints(body, n, span, width, options);

  InnerAccumulator acc;
  const double inner_rel = inner_rel_tol(tol);
  auto integrand = [&](double theta) -> double {
    const double F = body.F(theta);
    const double E = m * F;
    if (!(E <= level)) return 0.0;
    double s_a = 0.0;
    double s_b = std::min(body.log_depth(theta), level / m - F);
    if (body.s_support) {
      s_a = std::max(s_a, body.s_support->first - F);
      s_b = std::min(s_b, body.s_support->second - F);
    }
    if (!(s_b > s_a)) return 0.0;
    const double rho_M = std::exp(-F);
    double inner;
    if (body.radially_uniform) {
      inner = body.sin_v(rho_M, theta) * std::exp(-m * s_a) * -std::expm1(-m * (s_b - s_a)) / m;
    } else {
      const auto r = inner_s(body, theta, m, rho_M, s_a, s_b, inner_rel);
      if (!r.converged) acc.converged = false;
      if (r.l1 > 0.0) acc.worst_rel = std::max(acc.worst_rel, r.error / r.l1);
      inner = r.value;
    }
    return legendre_eval(n, std::cos(theta)) * std::exp(-E) * inner;
  };

  const auto r = integrate_adaptive<double>(integrand, std::span<const double>(bps), tol, options.max_panels);
  out.value = r.value;
  out.err = r.error + trunc + acc.worst_rel * r.l1;
  const double target = std::max({tol.abs, tol.rel * std::abs(out.value), kRoundoffFloor * kEps * r.l1});
  const bool met = r.converged && acc.converged && out.err <= 1.5 * target;
  out.status = met ? CoeffStatus::Ok : CoeffStatus::ToleranceNotMet;
  return out;
}

CoeffResult coeff_scaled(const PlanetProfile& profile, int n, const Tolerance& tol, const CoeffOptions& options) {
  return coeff_scaled(profile.body(), n, tol, options);
}

CoeffResult coeff_scaled(const OraclePlanet& planet, int n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "coefficient degree must be >= 0");
  CoeffResult out;
  out.value = oracle_scaled_coefficient(planet, n);
  out.err = 4.0 * kEps * std::abs(out.value);
  return out;
}

CoeffResult inner_integral(const AxisymmetricBody& body, double theta, int n, const Tolerance& tol) {
  const double m = n + 3.0;
  const double F = body.F(theta);
  const double rho_M = std::exp(-F);
  double s_a = 0.0;
  double s_b = std::min(body.log_depth(theta), 100.0 / m);
  if (body.s_support) {
    s_a = std::max(s_a, body.s_support->first - F);
    s_b = std::min(s_b, body.s_support->second - F);
  }
  CoeffResult out;
  if (!(s_b > s_a)) return out;
  if (body.radially_uniform) {
    out.value = body.sin_v(rho_M, theta) * std::exp(-m * s_a) * -std::expm1(-m * (s_b - s_a)) / m;
    out.err = 4.0 * kEps * std::abs(out.value);
    return out;
  }
  const auto r = inner_s(body, theta, m, rho_M, s_a, s_b, tol.rel);
  out.value = r.value;
  out.err = r.error;
  out.status = r.converged ? CoeffStatus::Ok : CoeffStatus::ToleranceNotMet;
  return out;
}

CoeffResult inner_integral_r(const PlanetProfile& profile, double theta, int n, const Tolerance& tol) {
  const double m = n + 3.0;
  const double rM = profile.eval_rM(theta);
  const double f = profile.eval_rm(theta) / rM;
  const double G = profile.spec().gravitational_constant;
  const double sin_t = std::sin(theta);
  // u = r / r_M
  auto integrand = [&](double u) { return std::pow(u, m - 1.0) * profile.eval_v(rM * u, theta); };
  std::vector<double> pts{f};
  for (double t : {40.0, 12.0, 4.0, 1.0}) {
    const double u = 1.0 - t / m;
    if (u > f && u < 1.0) pts.push_back(u);
  }
  pts.push_back(1.0);
  const auto r = integrate_adaptive<double>(integrand, std::span<const double>(pts), tol);
  CoeffResult out;
  out.value = G * sin_t * r.value;
  out.err = G * sin_t * r.error;
  out.status = r.converged ? CoeffStatus::Ok : CoeffStatus::ToleranceNotMet;
  return out;
}

bool ScaledCoeffSeries::all_ok() const {
  return std::all_of(statuses.begin(), statuses.end(), [](CoeffStatus s) { return s == CoeffStatus::Ok; });
}

namespace {

template <class Compute>
ScaledCoeffSeries run_series(int n_min, int n_max, int jobs, Compute&& compute) {
  if (n_min < 0 || n_max < n_min) throw Error(ErrorKind::InvalidArgument, "need 0 <= n_min <= n_max");
  ScaledCoeffSeries s;
  s.n_min = n_min;
  s.n_max = n_max;
  const std::size_t count = static_cast<std::size_t>(n_max - n_min + 1);
  s.values.assign(count, 0.0);
  s.errors.assign(count, 0.0);
  s.statuses.assign(count, CoeffStatus::Ok);

  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), count));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    try {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        const CoeffResult r = compute(n_min + static_cast<int>(i));
        s.values[i] = r.value;
        s.errors[i] = r.err;
        s.statuses[i] = r.status;
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return s;
}

}  // namespace

ScaledCoeffSeries coeff_series(const AxisymmetricBody& body, int n_min, int n_max, const Tolerance& tol,
                               const CoeffOptions& options, int jobs) {
  return run_series(n_min, n_max, jobs, [&](int n) { return coeff_scaled(body, n, tol, options); });
}

ScaledCoeffSeries coeff_series(const PlanetProfile& profile, int n_min, int n_max, const Tolerance& tol,
                               const CoeffOptions& options, int jobs) {
  ScaledCoeffSeries s = coeff_series(profile.body(), n_min, n_max, tol, options, jobs);
  s.fingerprint = profile.fingerprint();
  s.radius = profile.radius();
  return s;
}

ScaledCoeffSeries coeff_series(const OraclePlanet& planet, int n_min, int n_max) {
  ScaledCoeffSeries s = run_series(n_min, n_max, 1, [&](int n) { return coeff_scaled(planet, n); });
  s.radius = reference_radius(planet);
  return s;
}

ScaledCoeffSeries make_series(int n_min, std::vector<double> values, double radius, std::uint64_t fingerprint) {
  ScaledCoeffSeries s;
  s.n_min = n_min;
  s.n_max = n_min + static_cast<int>(values.size()) - 1;
  s.errors.assign(values.size(), 0.0);
  s.statuses.assign(values.size(), CoeffStatus::Ok);
  s.values = std::move(values);
  s.radius = radius;
  s.fingerprint = fingerprint;
  return s;
}

PotentialResult potential_direct(const AxisymmetricBody& body, double z, const Tolerance& tol) {
  if (!(z > 1.0)) throw Error(ErrorKind::InvalidArgument, "potential_direct needs z > R");
  double lo = 0.0;
  double hi = kPi;
  if (body.theta_support) {
    lo = body.theta_support->first;
    hi = body.theta_support->second;
  }
  std::vector<double> extra = body.breakpoints;
  if (body.peak) extra.push_back(*body.peak);
  const double width = std::isfinite(body.feature_scale) ? body.feature_scale : 0.25;
  const std::vector<double> bps = panel_breakpoints(lo, hi, width, extra);
  const double inner_rel = inner_rel_tol(tol);
  bool inner_ok = true;
  double worst_rel = 0.0;
  auto outer = [&](double theta) {
    const double F = body.F(theta);
    double s_a = 0.0;
    double s_b = std::min(body.log_depth(theta), 40.0);
    if (body.s_support) {
      s_a = std::max(s_a, body.s_support->first - F);
      s_b = std::min(s_b, body.s_support->second - F);
    }
    if (!(s_b > s_a)) return 0.0;
    const double c = std::cos(theta);
    auto inner = [&](double s) {
      const double rho = std::exp(-F - s);
      const double d = std::sqrt(z * z - 2.0 * z * rho * c + rho * rho);
      return body.sin_v(rho, theta) * rho * rho * rho / d;
    };
    std::vector<double> pts{s_a};
    for (double t : {0.1, 1.0, 4.0}) {
      if (t > s_a && t < s_b) pts.push_back(t);
    }
    pts.push_back(s_b);
    const double w = std::isfinite(body.feature_scale) ? body.feature_scale : 0.0;
    const std::vector<double> sb = panel_breakpoints(s_a, s_b, w, pts);
    const auto r = integrate_adaptive<double>(inner, std::span<const double>(sb), Tolerance{inner_rel, 0.0});
    if (!r.converged) inner_ok = false;
    if (r.l1 > 0.0) worst_rel = std::max(worst_rel, r.error / r.l1);
    return r.value;
  };
  const auto r = integrate_adaptive<double>(outer, std::span<const double>(bps), tol);
  PotentialResult out;
  out.value = r.value;
  out.err = r.error + worst_rel * r.l1;
  out.status = (r.converged && inner_ok) ? CoeffStatus::Ok : CoeffStatus::ToleranceNotMet;
  return out;
}

PotentialResult potential_direct(const PlanetProfile& profile, double z, const Tolerance& tol) {
  const double R = profile.radius();
  PotentialResult out = potential_direct(profile.body(), z / R, tol);
  out.value *= R * R;
  out.err *= R * R;
  return out;
}

PartialSum potential_partial_sum(const ScaledCoeffSeries& series, double z, int N) {
  if (N > series.n_max) throw Error(ErrorKind::InvalidArgument, "partial sum order exceeds the series");
  const double R = series.radius;
  const double q = R / z;
  const double scale = R * R * R / z;
  PartialSum out;
  double sum = 0.0;
  double last = 0.0;
  for (int n = series.n_min; n <= N; ++n) {
    last = series.at(n) * std::pow(q, n);
    sum += last;
  }
  out.value = scale * sum;
  out.last_term = scale * std::abs(last);
  return out;
}

std::string series_to_csv(const ScaledCoeffSeries& series, const std::string& header_comment) {
  std::string out;
  if (!header_comment.empty()) out += "# " + header_comment + "\n";
  out += "n,C_scaled,err\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out += std::to_string(series.n_min + static_cast<int>(i));
    out += ',' + fmt17(series.values[i]) + ',' + fmt17(series.errors[i]) + '\n';
  }
  return out;
}

std::string series_to_json(const ScaledCoeffSeries& series) {
  nlohmann::json j;
  j["fingerprint"] = hex64(series.fingerprint);
  j["radius"] = series.radius;
  j["n_min"] = series.n_min;
  j["n_max"] = series.n_max;
  j["values"] = series.values;
  j["errors"] = series.errors;
  std::vector<std::string> st;
  for (auto s : series.statuses) st.push_back(s == CoeffStatus::Ok ? "ok" : "tolerance_not_met");
  j["statuses"] = st;
  return j.dump(2);
}

}  // namespace she
