#include "she/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "json.hpp"
#include "she/error.hpp"
#include "she/format.hpp"
#include "she/model_io.hpp"
#include "she/quadrature.hpp"
#include "she/stats.hpp"

namespace she {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
const cd kI{0.0, 1.0};

cd rotation(double theta0, int n) { return std::polar(1.0, -kPi / 4.0) * std::polar(1.0, (n + 0.5) * theta0); }

struct Thm3Form {
  TheoremCase tag;
  cd amplitude;
  double decay;
};

Thm3Form thm3_form(const PeakShape& peak, const SurfaceWeightShape& weight, C1Assembly assembly,
                   AsymptoticPrediction* record) {
  const double s2pi = std::sqrt(2.0 / kPi);
  if (const auto* cusp = std::get_if<PowerCuspPeak>(&peak)) {
    const double a = cusp->alpha;
    const double ap = cusp->a_plus;
    const double am = cusp->a_minus;
    const bool unit = a == 1.0;
    if (record) {
      record->alpha = a;
      record->a_plus = ap;
      record->a_minus = am;
    }
    if (const auto* w = std::get_if<SmoothPowerWeight>(&weight)) {
      const double k = w->k;
      const double sign = (w->k % 2 == 0) ? 1.0 : -1.0;
      if (record) {
        record->k = k;
        record->gk = w->gk;
      }
      if (unit) {
        const cd bracket = std::pow(cd(ap, -1.0), -(k + 1.0)) + sign * std::pow(cd(am, 1.0), -(k + 1.0));
        return {TheoremCase::T3_i_a_Alpha1, s2pi * std::tgamma(k + 1.0) * w->gk * bracket, 1.5 + k + 1.0};
      }
      const double e = (k + 1.0) / a;
      const double bracket = std::pow(ap, -e) + sign * std::pow(am, -e);
      return {TheoremCase::T3_i_a_AlphaLt1, s2pi * std::tgamma(e) * w->gk / a * bracket, 1.5 + e};
    }
    if (const auto* w = std::get_if<TwoSidedCuspWeight>(&weight)) {
      const double k = w->k;
      if (record) {
        record->k = k;
        record->g_plus = w->g_plus;
        record->g_minus = w->g_minus;
      }
      if (unit) {
        const cd bracket =
            w->g_plus * std::pow(cd(ap, -1.0), -(k + 1.0)) + w->g_minus * std::pow(cd(am, 1.0), -(k + 1.0));
        return {TheoremCase::T3_i_b_Alpha1, s2pi * std::tgamma(k + 1.0) * bracket, 1.5 + k + 1.0};
      }
      const double e = (k + 1.0) / a;
      const double bracket = w->g_plus * std::pow(ap, -e) + w->g_minus * std::pow(am, -e);
      return {TheoremCase::T3_i_b_AlphaLt1, s2pi * std::tgamma(e) / a * bracket, 1.5 + e};
    }
    throw Error(ErrorKind::UnsupportedPairing, "cusp peaks pair with smooth_power or two_sided_cusp weights");
  }
  if (const auto* c1 = std::get_if<PowerC1Peak>(&peak)) {
    const auto* w = std::get_if<C1MixedWeight>(&weight);
    if (!w) throw Error(ErrorKind::UnsupportedPairing, "C1 peaks pair with the c1_mixed weight");
    if (std::abs(w->alpha - c1->alpha) > 1e-12) {
      throw Error(ErrorKind::UnsupportedPairing, "C1 peak and C1 weight must share alpha");
    }
    const double a = c1->alpha;
    if (record) {
      record->alpha = a;
      record->a_plus = c1->a_plus;
      record->a_minus = c1->a_minus;
      record->g1 = w->g1;
      record->g_plus = w->g_plus;
      record->g_minus = w->g_minus;
    }
    const cd ia = std::exp(kI * (kPi * a / 2.0));
    const cd mia = std::exp(-kI * (kPi * a / 2.0));
    const cd plus = ia * (kI * w->g_plus + w->g1 * c1->a_plus * (1.0 + a));
    const cd minus = mia * (kI * w->g_minus + w->g1 * c1->a_minus * (1.0 + a));
    const cd bracket = assembly == C1Assembly::Minus ? plus - minus : plus + minus;
    const TheoremCase tag = a == 2.0 ? TheoremCase::T3_ii_Alpha2 : TheoremCase::T3_ii_AlphaIn12;
    return {tag, s2pi * std::tgamma(a + 1.0) * bracket, 1.5 + a + 1.0};
  }
  throw Error(ErrorKind::UnsupportedPairing, "quadratic peaks are covered by the Theorem-1 predictor");
}

void check_thm1(cd a0, double beta0, cd a1, double beta1) {
  if (!(beta0 > 1.0) || !(beta1 > 2.0)) throw Error(ErrorKind::RejectDomain, "need beta0 > 1 and beta1 > 2");
  const double scale = std::max({1.0, std::abs(a0), std::abs(a1)});
  if (std::abs(beta0 - (beta1 - 1.0)) <= 1e-12 && std::abs(a0 - a1) <= 1e-12 * scale) {
    throw Error(ErrorKind::ExceptionalCase, "beta0 = beta1 - 1 with a0 = a1: leading terms cancel");
  }
}

cd thm1_complex(cd a0, double beta0, cd a1, double beta1, double theta0, int n) {
  const double nn = n;
  return 2.0 * std::pow(nn, -1.5) * rotation(theta0, n) * (a0 * std::pow(nn, -beta0) - a1 * std::pow(nn, -(beta1 - 1.0)));
}

}  // namespace

std::string_view to_string(TheoremCase tag) noexcept {
  switch (tag) {
    case TheoremCase::T1: return "T1";
    case TheoremCase::T3_i_a_AlphaLt1: return "T3-i-a-alt1";
    case TheoremCase::T3_i_a_Alpha1: return "T3-i-a-a1";
    case TheoremCase::T3_i_b_AlphaLt1: return "T3-i-b-alt1";
    case TheoremCase::T3_i_b_Alpha1: return "T3-i-b-a1";
    case TheoremCase::T3_ii_AlphaIn12: return "T3-ii-ain12";
    case TheoremCase::T3_ii_Alpha2: return "T3-ii-a2";
  }
  return "unknown";
}

double predict_thm1(cd a0, double beta0, cd a1, double beta1, double theta0, int n) {
  check_thm1(a0, beta0, a1, beta1);
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  return thm1_complex(a0, beta0, a1, beta1, theta0, n).real();
}

AsymptoticPrediction predict_thm1_series(cd a0, double beta0, cd a1, double beta1, double theta0, int n_min,
                                         int n_max) {
  check_thm1(a0, beta0, a1, beta1);
  if (n_min < 1 || n_max < n_min) throw Error(ErrorKind::InvalidArgument, "need 1 <= n_min <= n_max");
  AsymptoticPrediction p;
  p.tag = TheoremCase::T1;
  p.theta0 = theta0;
  p.a0 = a0;
  p.beta0 = beta0;
  p.a1 = a1;
  p.beta1 = beta1;
  p.decay = 1.5 + (std::abs(a1) > 0.0 ? std::min(beta0, beta1 - 1.0) : beta0);
  p.n_min = n_min;
  bool all_small = true;
  for (int n = n_min; n <= n_max; ++n) {
    const cd z = thm1_complex(a0, beta0, a1, beta1, theta0, n);
    p.values.push_back(z.real());
    p.envelope.push_back(std::abs(z));
    const cd bracket = rotation(theta0, n) * (a0 * std::pow(double(n), -beta0) - a1 * std::pow(double(n), -(beta1 - 1.0)));
    if (std::abs(bracket.real()) >= 1e-12) all_small = false;
  }
  p.vanishing = all_small;
  return p;
}

double predict_thm3(const PeakShape& peak, const SurfaceWeightShape& weight, double theta0, int n,
                    C1Assembly assembly) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  const Thm3Form f = thm3_form(peak, weight, assembly, nullptr);
  return std::pow(double(n), -f.decay) * (rotation(theta0, n) * f.amplitude).real();
}

AsymptoticPrediction predict_thm3_series(const PeakShape& peak, const SurfaceWeightShape& weight, double theta0,
                                         int n_min, int n_max, C1Assembly assembly) {
  if (n_min < 1 || n_max < n_min) throw Error(ErrorKind::InvalidArgument, "need 1 <= n_min <= n_max");
  AsymptoticPrediction p;
  const Thm3Form f = thm3_form(peak, weight, assembly, &p);
  p.tag = f.tag;
  p.theta0 = theta0;
  p.amplitude = f.amplitude;
  p.decay = f.decay;
  p.n_min = n_min;
  bool all_small = true;
  for (int n = n_min; n <= n_max; ++n) {
    const cd bracket = rotation(theta0, n) * f.amplitude;
    const double scale = std::pow(double(n), -f.decay);
    p.values.push_back(scale * bracket.real());
    p.envelope.push_back(scale * std::abs(f.amplitude));
    if (std::abs(bracket.real()) >= 1e-12) all_small = false;
  }
  p.vanishing = all_small;
  return p;
}

AsymptoticPrediction predict_thm3_series(const PlanetProfile& profile, int n_min, int n_max, C1Assembly assembly) {
  const auto& s = profile.spec();
  AsymptoticPrediction p = predict_thm3_series(s.peak, s.weight, s.theta0, n_min, n_max, assembly);
  const double G = s.gravitational_constant;
  for (auto& v : p.values) v *= G;
  for (auto& v : p.envelope) v *= G;
  p.amplitude *= G;
  return p;
}

JResult oscillatory_J(const PlanetProfile& profile, int n, const Tolerance& tol) {
  const auto& spec = profile.spec();
  const AxisymmetricBody& body = profile.body();
  const double t0 = spec.theta0;
  const double m = n + 3.0;
  constexpr double level = 100.0;
  double lo = std::max(0.0, t0 - spec.delta);
  double hi = std::min(kPi, t0 + spec.delta);
  // Shrink to where e^{-(n+3)F} exceeds e^{-level}.
  const auto& grid = body.F_grid;
  if (grid.size() >= 2) {
    const double h = kPi / static_cast<double>(grid.size() - 1);
    double a = hi;
    double b = lo;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double th = i * h;
      if (th < lo - h || th > hi + h) continue;
      if (m * grid[i] <= level) {
        a = std::min(a, th - h);
        b = std::max(b, th + h);
      }
    }
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  }
  JResult out;
  if (!(hi > lo)) return out;

  const double width = 1.5 * 2.0 * kPi / (n + 0.5);
  std::vector<double> extra = body.breakpoints;
  extra.push_back(t0);
  const double floor_width = 1.0 / (8.0 * std::sqrt(std::max(n, 1)));
  double d = width;
  for (int level_j = 0; level_j < 60; ++level_j) {
    d *= 0.5;
    extra.push_back(t0 - d);
    extra.push_back(t0 + d);
    if (d < floor_width && m * std::max(body.F(t0 - d), body.F(t0 + d)) < 0.01) break;
  }
  const std::vector<double> bps = panel_breakpoints(lo, hi, width, extra);
  const double G = spec.gravitational_constant;
  auto f = [&](double theta) -> cd {
    const double amp = G * profile.eval_g(theta) * std::exp(-m * body.F(theta));
    return amp * std::polar(1.0, (n + 0.5) * theta);
  };
  const auto r = integrate_adaptive<cd>(f, std::span<const double>(bps), tol);
  out.value = r.value;
  out.err = r.error;
  out.status = r.converged ? CoeffStatus::Ok : CoeffStatus::ToleranceNotMet;
  return out;
}

double lemma1_estimate(const cd& J, int n) {
  const double nn = n;
  return std::sqrt(2.0 / kPi) / ((nn + 3.0) * std::sqrt(nn)) * (std::polar(1.0, -kPi / 4.0) * J).real();
}

double inner_watson(const PlanetProfile& profile, double theta, int n) {
  const double G = profile.spec().gravitational_constant;
  return G * profile.eval_v(profile.eval_rM(theta), theta) / (n + 3.0);
}

double inner_exact(const PlanetProfile& profile, double theta, int n) {
  return inner_integral(profile.body(), theta, n, Tolerance{1e-13, 0.0}).value / std::sin(theta);
}

RatioReport ratio_diagnostic(const ScaledCoeffSeries& series, const AsymptoticPrediction& pred) {
  const int lo = std::max(series.n_min, pred.n_min);
  const int hi = std::min(series.n_max, pred.n_max());
  if (hi < lo) throw Error(ErrorKind::InvalidArgument, "series and prediction do not overlap");
  RatioReport rep;
  std::vector<double> kept_ratio;
  std::vector<double> lx;
  std::vector<double> ly;
  for (int n = lo; n <= hi; ++n) {
    const double c = series.at(n);
    const double p = pred.at(n);
    const double env = pred.envelope.at(static_cast<std::size_t>(n - pred.n_min));
    const bool mask = !(env > 0.0) || std::abs(p) < kPhaseMaskFraction * env || !std::isfinite(c);
    rep.n.push_back(n);
    rep.coeff.push_back(c);
    rep.pred.push_back(p);
    rep.ratio.push_back(p != 0.0 ? c / p : std::numeric_limits<double>::quiet_NaN());
    rep.masked.push_back(mask);
    if (!mask) {
      kept_ratio.push_back(c / p);
      if (c != 0.0) {
        lx.push_back(std::log(double(n)));
        ly.push_back(std::log(std::abs(c)));
      }
    }
  }
  rep.kept = kept_ratio.size();
  if (kept_ratio.empty()) throw Error(ErrorKind::EmptyAfterMasking, "phase mask removed every index");
  rep.median_ratio = median(kept_ratio);
  rep.predicted_slope = -pred.decay;
  if (lx.size() >= 2 && lx.front() != lx.back()) {
    rep.slope = fit_line(lx, ly).slope;
  } else {
    rep.slope = std::numeric_limits<double>::quiet_NaN();
  }
  rep.residual_exponent = rep.slope - rep.predicted_slope;
  rep.pass = rep.median_ratio >= 0.95 && rep.median_ratio <= 1.05;
  return rep;
}

double envelope_slope(const ScaledCoeffSeries& series, int n_lo, int n_hi, int window) {
  n_lo = std::max(n_lo, series.n_min);
  n_hi = std::min(n_hi, series.n_max);
  if (window < 1) throw Error(ErrorKind::InvalidArgument, "window must be >= 1");
  std::vector<double> lx;
  std::vector<double> ly;
  for (int start = n_lo; start + window - 1 <= n_hi; start += window) {
    int arg = start;
    double best = 0.0;
    for (int n = start; n < start + window; ++n) {
      const double a = std::abs(series.at(n));
      if (a > best) {
        best = a;
        arg = n;
      }
    }
    if (best > 0.0) {
      lx.push_back(std::log(double(arg)));
      ly.push_back(std::log(best));
    }
  }
  if (lx.size() < 2) throw Error(ErrorKind::InsufficientSamples, "need at least two nonzero windows");
  return fit_line(lx, ly).slope;
}

std::string ratio_report_to_csv(const RatioReport& report, const std::string& header_comment) {
  std::string out;
  if (!header_comment.empty()) out += "# " + header_comment + "\n";
  out += "n,coeff,pred,ratio,masked\n";
  for (std::size_t i = 0; i < report.n.size(); ++i) {
    out += std::to_string(report.n[i]) + ',' + fmt17(report.coeff[i]) + ',' + fmt17(report.pred[i]) + ',' +
           fmt17(report.ratio[i]) + ',' + (report.masked[i] ? "1" : "0") + '\n';
  }
  return out;
}

std::string ratio_report_to_json(const RatioReport& report, const AsymptoticPrediction& pred) {
  nlohmann::json j;
  j["theorem"] = std::string(to_string(pred.tag));
  j["median_ratio"] = report.median_ratio;
  j["slope"] = report.slope;
  j["predicted_slope"] = report.predicted_slope;
  j["residual_exponent"] = report.residual_exponent;
  j["kept"] = report.kept;
  j["total"] = report.n.size();
  j["vanishing_prefactor"] = pred.vanishing;
  j["verdict"] = report.pass ? "pass" : "fail";
  return j.dump(2);
}

}  // namespace she
