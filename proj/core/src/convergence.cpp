#include "she/convergence.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "she/error.hpp"
#include "she/stats.hpp"

namespace she {

namespace {

struct Peak {
  double n;
  double log_abs;
};

std::vector<Peak> window_peaks(const ScaledCoeffSeries& s, int lo, int hi, int width) {
  std::vector<Peak> out;
  for (int start = lo; start + width - 1 <= hi; start += width) {
    double best = 0.0;
    int arg = start;
    for (int n = start; n < start + width; ++n) {
      const double a = std::abs(s.at(n));
      if (a > best) {
        best = a;
        arg = n;
      }
    }
    if (best > 0.0 && std::isfinite(best)) out.push_back({double(arg), std::log(best)});
  }
  return out;
}

// Returns {log rho/R, power}; NaN when under-determined.
std::pair<double, double> fit_growth(const std::vector<Peak>& peaks) {
  if (peaks.size() < 4) return {std::nan(""), std::nan("")};
  std::vector<double> design;
  std::vector<double> y;
  for (const auto& p : peaks) {
    design.insert(design.end(), {1.0, std::log(p.n), p.n});
    y.push_back(p.log_abs);
  }
  const auto c = least_squares(design, y, 3);
  return {c[2], c[1]};
}

}  // namespace

RootTest root_test(const ScaledCoeffSeries& series) {
  RootTest out;
  const double R = series.radius;
  out.n_hi = series.n_max;
  out.n_lo = std::max(series.n_min, std::max(1, series.n_max / 4));
  if (series.size() == 0 || out.n_hi - out.n_lo < 8) {
    throw Error(ErrorKind::InsufficientSamples, "root test needs a longer series");
  }

  // Degenerate when no tail coefficient rises above its own error estimate.
  bool resolved = false;
  for (int n = out.n_lo; n <= out.n_hi && !resolved; ++n) {
    const auto i = static_cast<std::size_t>(n - series.n_min);
    const double err = i < series.errors.size() ? series.errors[i] : 0.0;
    resolved = std::abs(series.values[i]) > err;
  }
  if (!resolved) {
    out.degenerate = true;
    return out;
  }

  const int width = std::max(4, (out.n_hi - out.n_lo) / 60);
  const auto peaks = window_peaks(series, out.n_lo, out.n_hi, width);
  const auto [lr, power] = fit_growth(peaks);
  const std::size_t half = peaks.size() / 2;
  const auto first = fit_growth({peaks.begin(), peaks.begin() + static_cast<std::ptrdiff_t>(half)});
  const auto second = fit_growth({peaks.begin() + static_cast<std::ptrdiff_t>(half), peaks.end()});

  auto to_rho = [R](double l) { return std::isfinite(l) ? std::clamp(R * std::exp(l), 0.0, R) : std::nan(""); };
  out.rho = to_rho(lr);
  out.power = power;
  out.rho_first = to_rho(first.first);
  out.rho_second = to_rho(second.first);
  out.stable = series.n_max >= kRootMinN && std::isfinite(out.rho_first) && std::isfinite(out.rho_second) &&
               std::abs(out.rho_first - out.rho_second) <= kRootAgreement * R;
  if (!std::isfinite(out.rho)) {
    out.rho = 0.0;
    out.stable = false;
  }
  return out;
}

std::string_view to_string(Trend trend) noexcept {
  switch (trend) {
    case Trend::Decaying: return "decaying";
    case Trend::Flat: return "flat";
    case Trend::Increasing: return "increasing";
  }
  return "?";
}

LimsupStat limsup_stat(const ScaledCoeffSeries& series, double beta_m) {
  if (!(beta_m > 0.0)) throw Error(ErrorKind::InvalidArgument, "beta_m must be positive");
  LimsupStat out;
  out.beta_m = beta_m;
  const double e = 1.5 + beta_m;
  const int first = std::max({series.n_min, 1, series.n_max / 8});
  std::vector<double> lx;
  std::vector<double> ly;
  int prev = -1;
  for (double m = first; 2.0 * m <= series.n_max; m *= std::pow(2.0, 0.25)) {
    const int lo = static_cast<int>(std::lround(m));
    if (lo == prev) continue;
    prev = lo;
    double best = 0.0;
    for (int n = lo; n <= 2 * lo; ++n) best = std::max(best, std::pow(double(n), e) * std::abs(series.at(n)));
    out.window_start.push_back(lo);
    out.window_max.push_back(best);
    if (best > 0.0) {
      lx.push_back(std::log(double(lo)));
      ly.push_back(std::log(best));
    }
  }
  if (lx.size() >= 2) {
    out.slope = fit_line(lx, ly).slope;
    out.trend = out.slope > kFlatSlope ? Trend::Increasing : out.slope < -kFlatSlope ? Trend::Decaying : Trend::Flat;
  } else {
    out.trend = Trend::Decaying;
  }
  return out;
}

std::string_view to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::ConvergesExactlyAtBrillouin: return "ConvergesExactlyAtBrillouin";
    case Verdict::OverconvergenceSuspected: return "OverconvergenceSuspected";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

ConvergenceReport convergence_verdict(const ScaledCoeffSeries& series, std::optional<double> beta_m) {
  ConvergenceReport rep;
  rep.radius = series.radius;
  rep.n_min = series.n_min;
  rep.n_max = series.n_max;
  rep.root = root_test(series);
  const double R = series.radius;
  if (rep.root.degenerate) {
    rep.verdict = Verdict::OverconvergenceSuspected;
    return rep;
  }
  const double bm = beta_m.value_or(std::max(-rep.root.power - 1.5, 1e-3));
  rep.limsup = limsup_stat(series, bm);
  if (!rep.root.stable) {
    rep.verdict = Verdict::Inconclusive;
  } else if (rep.root.rho >= (1.0 - kBrillouinBand) * R && rep.limsup.trend == Trend::Flat) {
    rep.verdict = Verdict::ConvergesExactlyAtBrillouin;
  } else if (rep.root.rho < (1.0 - kOverconvergenceGap) * R) {
    rep.verdict = Verdict::OverconvergenceSuspected;
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

ConvergenceReport convergence_verdict(const PlanetProfile& profile, int n_max, const Tolerance& tol,
                                      std::optional<double> beta_m, int jobs) {
  return convergence_verdict(coeff_series(profile, 0, n_max, tol, {}, jobs), beta_m);
}

std::string convergence_to_json(const ConvergenceReport& report) {
  nlohmann::json j;
  j["verdict"] = std::string(to_string(report.verdict));
  j["radius"] = report.radius;
  j["n_min"] = report.n_min;
  j["n_max"] = report.n_max;
  j["root_test"] = {{"rho", report.root.rho},
                    {"rho_first", report.root.rho_first},
                    {"rho_second", report.root.rho_second},
                    {"power", report.root.power},
                    {"n_lo", report.root.n_lo},
                    {"n_hi", report.root.n_hi},
                    {"degenerate", report.root.degenerate},
                    {"stable", report.root.stable}};
  j["limsup"] = {{"beta_m", report.limsup.beta_m},
                 {"slope", report.limsup.slope},
                 {"trend", std::string(to_string(report.limsup.trend))},
                 {"window_start", report.limsup.window_start},
                 {"window_max", report.limsup.window_max}};
  return j.dump(2);
}

}  // namespace she
