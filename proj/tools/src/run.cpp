#include "she_cli/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "she/asymptotics.hpp"
#include "she/balayage.hpp"
#include "she/coeffs.hpp"
#include "she/convergence.hpp"
#include "she/format.hpp"
#include "she/spectral.hpp"

namespace she::cli {

namespace {

using json = nlohmann::json;
using cd = std::complex<double>;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;
constexpr double kThm1Band = 0.10;

class Context {
 public:
  Context(Command command, const ExperimentConfig& cfg, std::string dir, int jobs, std::ostream& out)
      : cfg(cfg), jobs(jobs), out(out), command_(command), hash_(config_hash(cfg, command)), dir_(std::move(dir)) {}

  const ExperimentConfig& cfg;
  int jobs;
  std::ostream& out;
  std::vector<std::string> artifacts;
  std::vector<std::string> mismatches;

  const std::string& hash() const { return hash_; }
  std::string header() const { return "config_hash=" + hash_; }

  void write(const std::string& stem, const std::string& ext, const std::string& content) {
    fs::create_directories(dir_);
    const fs::path path = fs::path(dir_) / (std::string(to_string(command_)) + "_" + hash_ + "_" + stem + "." + ext);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::Config, path.string() + ": cannot write artifact");
    f << content;
    if (!f) throw Error(ErrorKind::Config, path.string() + ": write failed");
    artifacts.push_back(path.string());
  }

  void write_json(const std::string& stem, json j) {
    j["config_hash"] = hash_;
    write(stem, "json", j.dump(2) + "\n");
  }

  void expect(bool ok, const std::string& what) {
    out << "  check: " << what << (ok ? "  [ok]" : "  [MISMATCH]") << '\n';
    if (!ok) mismatches.push_back(what);
  }

 private:
  Command command_;
  std::string hash_;
  std::string dir_;
};

PlanetProfile need_planet(const ExperimentConfig& cfg, const char* what) {
  if (!cfg.planet) throw Error(ErrorKind::Config, std::string("config.planet: required by ") + what);
  return build_profile(*cfg.planet);
}

ScaledCoeffSeries series_for(Context& ctx, int n_min, int n_max) {
  if (ctx.cfg.planet) {
    return coeff_series(build_profile(*ctx.cfg.planet), n_min, n_max, ctx.cfg.tolerance, {}, ctx.jobs);
  }
  if (ctx.cfg.oracle) return coeff_series(*ctx.cfg.oracle, n_min, n_max);
  throw Error(ErrorKind::Config, "config: planet or oracle required");
}

template <class F>
std::vector<cd> parallel_map(const std::vector<double>& xs, int jobs, F&& f) {
  std::vector<cd> out(xs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < xs.size();) {
      try {
        out[i] = f(xs[i]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int n = std::max(1, jobs == 0 ? static_cast<int>(std::thread::hardware_concurrency()) : jobs);
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

// Short form for the human-readable report; artifacts keep 17 digits.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

json complex_json(cd v) { return {{"re", v.real()}, {"im", v.imag()}}; }

// Fourier data of a function supported in [-2 eps, 2 eps], kinked at 0.
struct Transform {
  std::vector<double> k;
  std::vector<cd> fhat;
};

Transform sample_transform(const RealFunction& f, double eps, const SpectralSection& s, int jobs) {
  Transform t;
  t.k = negative_k_grid(s.k_min, s.k_max, s.count);
  t.fhat = parallel_map(t.k, jobs, [&](double k) {
    const auto r = fourier_eval(f, -2.0 * eps, 2.0 * eps, k, {1e-10, 0.0}, {0.0});
    if (!r.converged) throw Error(ErrorKind::ToleranceNotMet, "transform at k = " + fmt17(k));
    return r.value;
  });
  return t;
}

double cutoff_eps(const PlanetSpec& spec) {
  return std::min(0.5 * spec.delta, 0.45 * std::min(spec.theta0, kPi - spec.theta0));
}

// ---------------------------------------------------------------- commands

void cmd_coeffs(Context& ctx) {
  const auto series = series_for(ctx, ctx.cfg.n_min, ctx.cfg.n_max);
  ctx.write("series", "csv", series_to_csv(series, ctx.header()));
  json j = json::parse(series_to_json(series));
  ctx.write_json("series", j);
  std::size_t bad = 0;
  for (auto s : series.statuses) bad += s != CoeffStatus::Ok;
  ctx.out << "coeffs: n = " << series.n_min << ".." << series.n_max << ", " << bad << " below tolerance\n";
  if (bad) throw Error(ErrorKind::ToleranceNotMet, std::to_string(bad) + " coefficients missed the tolerance");
}

void cmd_asympt(Context& ctx) {
  const PlanetProfile profile = need_planet(ctx.cfg, "asympt");
  const AsymptSection sec = ctx.cfg.asympt.value_or(AsymptSection{});
  const PlanetSpec& spec = profile.spec();
  const double G = spec.gravitational_constant;

  AsymptoticPrediction pred;
  json extra;
  double lo_band = 0.95;
  double hi_band = 1.05;
  if (const auto* quad = std::get_if<QuadraticPeak>(&spec.peak)) {
    // Fourier route: a0 and beta0 from the cutoff times the weight, a1 and beta1 from cutoff * h * weight.
    const double eps = cutoff_eps(spec);
    const Cutoff phi = build_cutoff(spec.theta0, eps);
    SpectralSection grid;
    const RealFunction fg = [&](double x) { return phi.shifted(x) * eval_weight(spec.weight, x); };
    const auto t0 = sample_transform(fg, eps, grid, ctx.jobs);
    const TailFit fit0 = fit_tail(t0.k, t0.fhat);
    cd a1 = 0.0;
    double beta1 = 3.0;
    extra["fit_g"] = json::parse(tail_fit_to_json(fit0));
    if (!quad->remainder.is_zero()) {
      const Correction h = quad->remainder;
      const RealFunction fhg = [&](double x) { return phi.shifted(x) * h(x) * eval_weight(spec.weight, x); };
      const auto t1 = sample_transform(fhg, eps, grid, ctx.jobs);
      const TailFit fit1 = fit_tail(t1.k, t1.fhat);
      a1 = fit1.amplitude;
      beta1 = fit1.beta;
      extra["fit_hg"] = json::parse(tail_fit_to_json(fit1));
    }
    pred = predict_thm1_series(fit0.amplitude, fit0.beta, a1, beta1, spec.theta0, sec.n_min, sec.n_max);
    for (auto& v : pred.values) v *= G;
    for (auto& v : pred.envelope) v *= std::abs(G);
    lo_band = 1.0 - kThm1Band;
    hi_band = 1.0 + kThm1Band;
  } else {
    pred = predict_thm3_series(profile, sec.n_min, sec.n_max, sec.assembly);
  }

  const auto series = coeff_series(profile, sec.n_min, sec.n_max, ctx.cfg.tolerance, {}, ctx.jobs);
  const RatioReport rep = ratio_diagnostic(series, pred);
  const bool pass = rep.median_ratio >= lo_band && rep.median_ratio <= hi_band;

  ctx.write("ratio", "csv", ratio_report_to_csv(rep, ctx.header()));
  json j = json::parse(ratio_report_to_json(rep, pred));
  j["pass"] = pass;
  j["band"] = {lo_band, hi_band};
  for (auto& [key, value] : extra.items()) j[key] = value;
  ctx.write_json("ratio", j);

  ctx.out << "asympt: " << to_string(pred.tag) << ", n = " << sec.n_min << ".." << sec.n_max << '\n'
          << "  median ratio " << num(rep.median_ratio) << " (" << rep.kept << " unmasked)\n"
          << "  slope " << num(rep.slope) << ", predicted " << num(rep.predicted_slope) << '\n'
          << "  verdict: " << (pass ? "pass" : "fail") << '\n';
  if (sec.expect_pass) ctx.expect(*sec.expect_pass == pass, std::string("ratio verdict is ") + (pass ? "pass" : "fail"));
}

void cmd_radius(Context& ctx, std::optional<RadiusSection> defaults = {}) {
  const RadiusSection sec = ctx.cfg.radius ? *ctx.cfg.radius : defaults.value_or(RadiusSection{});
  const auto series = series_for(ctx, 0, sec.n_max);
  const ConvergenceReport rep = convergence_verdict(series, sec.beta_m);

  std::string csv = "# " + ctx.header() + "\nm,window_max\n";
  for (std::size_t i = 0; i < rep.limsup.window_start.size(); ++i) {
    csv += std::to_string(rep.limsup.window_start[i]) + ',' + fmt17(rep.limsup.window_max[i]) + '\n';
  }
  ctx.write("limsup", "csv", csv);
  ctx.write_json("report", json::parse(convergence_to_json(rep)));

  ctx.out << "radius: n = 0.." << sec.n_max << ", R = " << num(rep.radius) << '\n'
          << "  rho " << num(rep.root.rho) << (rep.root.degenerate ? " (degenerate)" : "") << '\n'
          << "  limsup trend " << to_string(rep.limsup.trend) << " (beta_m " << num(rep.limsup.beta_m) << ")\n"
          << "  verdict: " << to_string(rep.verdict) << '\n';
  if (sec.expect) ctx.expect(rep.verdict == *sec.expect, "verdict " + std::string(to_string(*sec.expect)));
  if (sec.expect_rho) {
    ctx.expect(std::abs(rep.root.rho - *sec.expect_rho) <= sec.rho_tolerance * rep.radius,
               "rho within " + num(sec.rho_tolerance) + " R of " + num(*sec.expect_rho));
  }
}

void cmd_spectral(Context& ctx) {
  const SpectralSection sec = ctx.cfg.spectral.value_or(SpectralSection{});
  RealFunction f;
  double eps = sec.eps;
  std::optional<cd> oracle;
  if (sec.source == "planet") {
    const PlanetProfile profile = need_planet(ctx.cfg, "spectral.source = planet");
    const PlanetSpec spec = profile.spec();
    const Cutoff phi = build_cutoff(spec.theta0, eps);
    f = [phi, spec](double x) { return phi.shifted(x) * eval_weight(spec.weight, x); };
  } else {
    f = appendix_function(sec.beta, eps, sec.taper_order);
    if (sec.beta != std::floor(sec.beta)) oracle = appendix_oracle(sec.beta)(-1.0);
  }
  const Transform t = sample_transform(f, eps, sec, ctx.jobs);
  ctx.write("transform", "csv", transform_to_csv(t.k, t.fhat, ctx.header()));

  const TailFit fit = fit_tail(t.k, t.fhat);
  const double beta_test = sec.beta_test.value_or(sec.beta);
  const LinfReport linf = check_Linf(beta_test, t.k, t.fhat);
  json j;
  j["fit"] = json::parse(tail_fit_to_json(fit));
  j["linf"] = {{"beta", beta_test},
               {"sup", linf.sup},
               {"argmax_k", linf.argmax_k},
               {"sup_inner", linf.sup_inner},
               {"outer_slope", linf.outer_slope},
               {"unbounded_trend", linf.unbounded_trend}};
  if (oracle) {
    j["oracle_amplitude"] = complex_json(*oracle);
    j["amplitude_rel_error"] = std::abs(fit.amplitude - *oracle) / std::abs(*oracle);
  }
  ctx.write_json("fit", j);

  ctx.out << "spectral: " << sec.source << ", |k| = " << num(sec.k_min) << ".." << num(sec.k_max) << '\n'
          << "  beta " << num(fit.beta) << ", amplitude " << num(fit.amplitude.real()) << " + "
          << num(fit.amplitude.imag()) << "i, residual " << num(fit.residual) << '\n'
          << "  sup (1+|k|)^" << num(beta_test) << "|f^| = " << num(linf.sup)
          << (linf.unbounded_trend ? " (growing)" : "") << '\n';
  if (sec.expect_beta) {
    ctx.expect(std::abs(fit.beta - *sec.expect_beta) <= sec.beta_tolerance,
               "beta within " + num(sec.beta_tolerance) + " of " + num(*sec.expect_beta));
  }
}

// Uniform double in [0, 1) from the top 53 bits.
double unit(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

void cmd_balayage(Context& ctx) {
  if (!ctx.cfg.balayage) throw Error(ErrorKind::Config, "config.balayage: required by balayage");
  const BalayageSection& sec = *ctx.cfg.balayage;
  std::vector<PointSource> sources = sec.sources;
  if (sec.random_sources) {
    std::mt19937_64 g(*ctx.cfg.seed);
    for (int i = 0; i < sec.random_sources->count; ++i) {
      const double r = sec.random_sources->max_radius * std::cbrt(unit(g));
      const double c = 2.0 * unit(g) - 1.0;
      const double l = 2.0 * kPi * unit(g);
      const double s = std::sqrt(1.0 - c * c);
      sources.push_back({{r * s * std::cos(l), r * s * std::sin(l), r * c}, 1.0});
    }
  }
  const SurfaceMeasure mu = mu_from_point_masses(sources);
  ctx.write("mu", "csv", measure_to_csv(mu, sec.mu_samples, ctx.header()));

  std::string csv = "# " + ctx.header() + "\nx0,mu_hat,mu,err\n";
  double worst = 0.0;
  for (int i = 0; i < sec.plemelj_points; ++i) {
    double x0 = -0.95 + 1.9 * (i + 0.5) / sec.plemelj_points;
    if (std::abs(x0) < 0.02) x0 += 0.03;
    const PlemeljResult r = plemelj_jump(mu, x0);
    const double exact = mu.mu(x0);
    worst = std::max(worst, std::abs(r.mu_hat - exact) / std::abs(exact));
    csv += fmt17(x0) + ',' + fmt17(r.mu_hat) + ',' + fmt17(exact) + ',' + fmt17(r.err) + '\n';
  }
  ctx.write("plemelj", "csv", csv);

  const PowerSeries q = maclaurin_Q(mu, sec.series_order);
  const cd by_series = apply_A_series(q)(sec.p);
  const cd by_convolution = apply_A_convolution(q)(sec.p);
  const cd by_cauchy = apply_A_cauchy(mu, 1.0 / sec.p);
  json j;
  j["sources"] = json::array();
  for (const auto& s : sources) j["sources"].push_back({{"position", {s.position.x, s.position.y, s.position.z}}, {"mass", s.mass}});
  j["mass"] = mu.mass;
  j["p"] = sec.p;
  j["AQ_series"] = complex_json(by_series);
  j["AQ_convolution"] = complex_json(by_convolution);
  j["AQ_cauchy"] = complex_json(by_cauchy);
  j["route_rel_diff"] = std::abs(by_series - by_cauchy) / std::abs(by_cauchy);
  j["plemelj_worst_rel"] = worst;
  if (sec.probe_x0) j["probe"] = json::parse(probe_to_json(analyticity_probe(mu, *sec.probe_x0)));
  ctx.write_json("summary", j);

  ctx.out << "balayage: " << sources.size() << " sources, mass " << num(mu.mass) << '\n'
          << "  AQ(1/p) series vs Cauchy rel diff " << num(j["route_rel_diff"].get<double>()) << '\n'
          << "  Plemelj worst rel error " << num(worst) << " over " << sec.plemelj_points << " points\n";
  if (sec.probe_x0) ctx.out << "  probe at " << num(*sec.probe_x0) << ": " << j["probe"]["verdict"].get<std::string>() << '\n';
}

void cmd_full_verify(Context& ctx) {
  cmd_coeffs(ctx);
  std::optional<RadiusSection> defaults;
  if (!ctx.cfg.radius) {
    RadiusSection d;
    if (ctx.cfg.oracle) {
      if (const auto* pm = std::get_if<PointMass>(&*ctx.cfg.oracle)) d.expect_rho = pm->r0;
    } else if (ctx.cfg.planet) {
      d.expect = Verdict::ConvergesExactlyAtBrillouin;
    }
    defaults = d;
  }
  cmd_radius(ctx, defaults);
  if (ctx.cfg.asympt) cmd_asympt(ctx);
  if (ctx.cfg.spectral) cmd_spectral(ctx);
  if (ctx.cfg.balayage) cmd_balayage(ctx);
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::RejectNonGeneric:
    case ErrorKind::RejectDomain:
    case ErrorKind::InvalidArgument:
    case ErrorKind::UnsupportedPairing:
    case ErrorKind::NotSerializable:
      return kExitConfig;
    default:
      return kExitNumeric;
  }
}

std::string resolve_output_dir(const ExperimentConfig& config, const RunOptions& options) {
  if (options.out) return *options.out;
  if (config.output_dir) return *config.output_dir;
  if (const char* env = std::getenv(kOutRootEnv); env && *env) return env;
  return "she_out";
}

RunResult run(Command command, ExperimentConfig config, const RunOptions& options, std::ostream& report) {
  RunResult result;
  if (options.tol) {
    if (!(*options.tol > 0.0)) {
      result.exit_code = kExitConfig;
      result.message = "--tol: must be positive";
      return result;
    }
    config.tolerance.rel = *options.tol;
  }
  Context ctx(command, config, resolve_output_dir(config, options), options.jobs.value_or(config.jobs), report);
  report << "config_hash " << ctx.hash() << '\n';
  try {
    switch (command) {
      case Command::Coeffs: cmd_coeffs(ctx); break;
      case Command::Asympt: cmd_asympt(ctx); break;
      case Command::Radius: cmd_radius(ctx); break;
      case Command::Spectral: cmd_spectral(ctx); break;
      case Command::Balayage: cmd_balayage(ctx); break;
      case Command::FullVerify: cmd_full_verify(ctx); break;
    }
  } catch (const Error& e) {
    result.exit_code = exit_code_for(e.kind());
    result.message = e.what();
  } catch (const fs::filesystem_error& e) {
    result.exit_code = kExitConfig;
    result.message = e.what();
  }
  result.artifacts = ctx.artifacts;
  if (result.exit_code == kExitOk && !ctx.mismatches.empty()) {
    result.exit_code = kExitVerdict;
    result.message = "verdict mismatch: " + ctx.mismatches.front();
  }
  return result;
}

namespace {

const char* describe(Command c) {
  switch (c) {
    case Command::Coeffs: return "scaled zonal coefficients over [n_min, n_max]";
    case Command::Asympt: return "coefficients against the large-n predictor";
    case Command::Radius: return "root test, limsup statistic and convergence verdict";
    case Command::Spectral: return "Fourier tail fit of a cutoff weight";
    case Command::Balayage: return "swept measure, Plemelj recovery and analyticity probe";
    case Command::FullVerify: return "coeffs and radius, then every section present in the config";
  }
  return "";
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Spherical harmonic expansion coefficients, asymptotics and convergence diagnostics"};
  app.require_subcommand(1);
  std::string config_path;
  RunOptions options;
  for (Command c : {Command::Coeffs, Command::Asympt, Command::Radius, Command::Spectral, Command::Balayage,
                    Command::FullVerify}) {
    auto* sub = app.add_subcommand(std::string(to_string(c)), describe(c));
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--out", options.out, "output directory");
    sub->add_option("--jobs", options.jobs, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", options.tol, "relative quadrature tolerance");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }
  const Command command = *parse_command(app.get_subcommands().front()->get_name());

  ExperimentConfig config;
  try {
    config = load_config(config_path);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  if (config.command && *config.command != command) {
    std::cerr << "config.command: names " << to_string(*config.command) << ", not " << to_string(command) << '\n';
    return kExitConfig;
  }
  const RunResult r = run(command, std::move(config), options, std::cout);
  for (const auto& a : r.artifacts) std::cout << "wrote " << a << '\n';
  if (r.exit_code != kExitOk) std::cerr << r.message << '\n';
  return r.exit_code;
}

}  // namespace she::cli
