#include "she/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"
#include "she/error.hpp"
#include "she/format.hpp"
#include "she/stats.hpp"

namespace she {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPi);

double psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = psi(t);
  return a / (a + psi(1.0 - t));
}

double Cutoff::shifted(double x) const { return smooth_step((2.0 * eps_ - std::abs(x)) / eps_); }

Cutoff build_cutoff(double theta0, double eps) {
  if (!(eps > 0.0) || !(2.0 * eps < std::min(theta0, kPi - theta0))) {
    throw Error(ErrorKind::RejectDomain, "cutoff needs eps > 0 and 2 eps < min(theta0, pi - theta0)");
  }
  return Cutoff(theta0, eps);
}

FourierResult fourier_eval(const RealFunction& f, double a, double b, double k, const Tolerance& tol,
                           const std::vector<double>& singular_points, double nodes_per_wavelength) {
  if (!(b > a)) throw Error(ErrorKind::InvalidArgument, "fourier_eval needs a < b");
  const double span = b - a;
  double width = span;
  if (k != 0.0) width = std::min(span, (15.0 / nodes_per_wavelength) * 2.0 * kPi / std::abs(k));
  std::vector<double> extra;
  for (double s : singular_points) {
    extra.push_back(s);
    for (double d = width; d > 1e-12 * span; d *= 0.5) {
      extra.push_back(s - d);
      extra.push_back(s + d);
    }
  }
  const std::vector<double> bps = panel_breakpoints(a, b, width, extra);
  auto integrand = [&](double x) -> cd { return f(x) * std::polar(kInvSqrt2Pi, -k * x); };
  const auto r = integrate_adaptive<cd>(integrand, std::span<const double>(bps), tol, 200000);
  return {r.value, r.error, r.converged};
}

RealFunction appendix_function(double beta, double eps, int m) {
  if (!(beta > 1.0) || !(eps > 0.0) || m < 1) throw Error(ErrorKind::InvalidArgument, "need beta > 1, eps > 0, m >= 1");
  const Cutoff phi(0.0, eps);
  return [beta, eps, m, phi](double x) {
    const double ax = std::abs(x);
    if (ax >= 2.0 * eps) return 0.0;
    const double u = x / eps;
    return std::pow(ax, beta - 1.0) * std::pow(1.0 - u * u, m) * phi.shifted(x);
  };
}

std::function<cd(double)> appendix_oracle(double beta, AppendixVariant variant) {
  if (!(beta > 1.0)) throw Error(ErrorKind::RejectDomain, "appendix oracle needs beta > 1");
  if (beta == std::floor(beta)) throw Error(ErrorKind::IntegerBeta, "integer beta is not covered by the closed form");
  const cd plus = std::exp(cd(0.0, -kPi * beta / 2.0));  // (-i)^beta
  const cd minus = variant == AppendixVariant::Corrected ? std::exp(cd(0.0, kPi * beta / 2.0))  // i^beta
                                                         : cd(0.0, -1.0) * std::exp(cd(0.0, kPi * beta));
  const cd coeff = std::tgamma(beta) * (plus + minus) * kInvSqrt2Pi;
  return [coeff, beta](double k) -> cd {
    const cd v = coeff * std::pow(std::abs(k), -beta);
    return k >= 0.0 ? v : std::conj(v);
  };
}

std::vector<double> negative_k_grid(double k_min, double k_max, int count) {
  if (!(k_min > 0.0) || !(k_max > k_min) || count < 2) throw Error(ErrorKind::InvalidArgument, "bad k grid");
  std::vector<double> k(static_cast<std::size_t>(count));
  const double l0 = std::log(k_min);
  const double l1 = std::log(k_max);
  for (int i = 0; i < count; ++i) k[static_cast<std::size_t>(i)] = -std::exp(l0 + (l1 - l0) * i / (count - 1));
  return k;
}

TailFit fit_tail(const std::vector<double>& k, const std::vector<cd>& fhat) {
  if (k.size() != fhat.size()) throw Error(ErrorKind::InvalidArgument, "fit_tail: size mismatch");
  std::vector<std::pair<double, cd>> s;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < 0.0) s.emplace_back(-k[i], fhat[i]);
  }
  std::sort(s.begin(), s.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  if (s.size() < 20 || s.back().first < 100.0 * s.front().first) {
    throw Error(ErrorKind::InsufficientSamples, "need >= 20 negative-k samples over >= 2 decades");
  }
  for (const auto& [ak, v] : s) {
    if (!(std::abs(v) > 0.0) || !std::isfinite(std::abs(v))) {
      throw Error(ErrorKind::NoPowerLaw, "transform vanishes or is not finite on the tail");
    }
  }

  // Window index of each sample; samples inside |k| < |kTailBase| are ignored.
  const double base = -kTailBase;
  std::vector<std::vector<std::size_t>> windows;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].first < base) continue;
    const auto j = static_cast<std::size_t>(std::floor(std::log2(s[i].first / base)));
    if (windows.size() <= j) windows.resize(j + 1);
    windows[j].push_back(i);
  }
  windows.erase(std::remove_if(windows.begin(), windows.end(), [](const auto& w) { return w.empty(); }),
                windows.end());
  if (windows.size() < 3) throw Error(ErrorKind::InsufficientSamples, "need samples in >= 3 tail windows");

  // Regression over the far half of the windows, repeated over the far
  // quarter to see how much the amplitude depends on the range.
  auto regress = [&](std::size_t from) {
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t w = from; w < windows.size(); ++w) {
      for (std::size_t i : windows[w]) {
        lx.push_back(std::log(s[i].first));
        ly.push_back(std::log(std::abs(s[i].second)));
      }
    }
    if (lx.size() < 2) throw Error(ErrorKind::InsufficientSamples, "tail windows hold fewer than two samples");
    return -fit_line(lx, ly).slope;
  };
  auto last_window_amplitude = [&](double beta) {
    cd sum{};
    for (std::size_t i : windows.back()) sum += std::pow(s[i].first, beta) * s[i].second;
    return sum / static_cast<double>(windows.back().size());
  };
  const std::size_t nw = windows.size();
  const std::size_t first = nw >= 4 ? nw / 2 : 0;
  const std::size_t quarter = std::max(first, nw - std::max<std::size_t>(2, nw / 4));
  TailFit fit;
  fit.beta = regress(first);
  for (const auto& w : windows) {
    cd sum{};
    for (std::size_t i : w) sum += std::pow(s[i].first, fit.beta) * s[i].second;
    fit.window_amplitudes.push_back(sum / static_cast<double>(w.size()));
  }
  fit.amplitude = fit.window_amplitudes.back();
  fit.k_lo = -s[windows[first].front()].first;
  fit.k_hi = -s[windows.back().back()].first;
  for (std::size_t j = nw - 2; j < nw; ++j) {
    fit.residual = std::max(fit.residual, std::abs(fit.window_amplitudes[j] - fit.window_amplitudes[j - 1]) /
                                              std::abs(fit.amplitude));
  }
  if (quarter > first) {
    const cd narrow = last_window_amplitude(regress(quarter));
    fit.residual = std::max(fit.residual, std::abs(narrow - fit.amplitude) / std::abs(fit.amplitude));
  }
  if (!std::isfinite(fit.beta) || !(fit.beta > 0.0) || !(fit.residual <= kTailMaxResidual)) {
    throw Error(ErrorKind::NoPowerLaw, "windowed amplitude drifts by " + fmt17(fit.residual));
  }
  return fit;
}

LinfReport check_Linf(double beta, const std::vector<double>& k, const std::vector<cd>& fhat) {
  if (k.size() != fhat.size() || k.empty()) throw Error(ErrorKind::InvalidArgument, "check_Linf: bad samples");
  LinfReport rep;
  std::vector<std::pair<double, double>> w;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double ak = std::abs(k[i]);
    const double v = std::pow(1.0 + ak, beta) * std::abs(fhat[i]);
    w.emplace_back(ak, v);
    if (v > rep.sup) {
      rep.sup = v;
      rep.argmax_k = k[i];
    }
  }
  std::sort(w.begin(), w.end());
  const double mid = std::sqrt((1.0 + w.front().first) * (1.0 + w.back().first));
  std::vector<double> lx;
  std::vector<double> ly;
  for (const auto& [ak, v] : w) {
    if (1.0 + ak <= mid) {
      rep.sup_inner = std::max(rep.sup_inner, v);
    } else if (v > 0.0) {
      lx.push_back(std::log(1.0 + ak));
      ly.push_back(std::log(v));
    }
  }
  if (lx.size() >= 2 && lx.front() != lx.back()) rep.outer_slope = fit_line(lx, ly).slope;
  rep.unbounded_trend = rep.outer_slope > 0.05;
  return rep;
}

cd gaussian_window(const std::function<cd(double)>& fhat, double n, double c, double q) {
  if (!(c > 0.0) || !(q > 0.5 && q < 1.0) || !(n > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "gaussian_window needs c > 0, n > 0, q in (1/2, 1)");
  }
  const double half = std::pow(n, q);
  const double sigma = std::sqrt(2.0 * c * n);
  auto integrand = [&](double k) { return fhat(k) * std::exp(-(k + n) * (k + n) / (4.0 * c * n)); };
  const double lo = -n - half;
  const double hi = -n + half;
  std::vector<double> extra;
  for (int j = -8; j <= 8; ++j) extra.push_back(-n + j * sigma);
  const std::vector<double> bps = panel_breakpoints(lo, hi, 0.0, extra);
  const auto r = integrate_adaptive<cd>(integrand, std::span<const double>(bps), Tolerance{1e-12, 0.0});
  return r.value / std::sqrt(2.0 * c * n);
}

std::string transform_to_csv(const std::vector<double>& k, const std::vector<cd>& fhat,
                             const std::string& header_comment) {
  std::string out;
  if (!header_comment.empty()) out += "# " + header_comment + "\n";
  out += "k,re,im\n";
  for (std::size_t i = 0; i < k.size(); ++i) {
    out += fmt17(k[i]) + ',' + fmt17(fhat[i].real()) + ',' + fmt17(fhat[i].imag()) + '\n';
  }
  return out;
}

std::string tail_fit_to_json(const TailFit& fit) {
  nlohmann::json j;
  j["beta"] = fit.beta;
  j["amplitude"] = {{"re", fit.amplitude.real()}, {"im", fit.amplitude.imag()}};
  j["k_lo"] = fit.k_lo;
  j["k_hi"] = fit.k_hi;
  j["residual"] = fit.residual;
  nlohmann::json w = nlohmann::json::array();
  for (const auto& a : fit.window_amplitudes) w.push_back({{"re", a.real()}, {"im", a.imag()}});
  j["window_amplitudes"] = w;
  return j.dump(2);
}

}  // namespace she
