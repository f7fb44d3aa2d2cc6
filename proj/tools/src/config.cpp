#include "she_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "she/error.hpp"
#include "she/format.hpp"
#include "she/model_io.hpp"

namespace she::cli {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::Config, path + ": " + what);
}

class Fields {
 public:
  Fields(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_, "expected an object");
  }

  bool has(const char* key) const { return node_.contains(key); }
  std::string at(const char* key) const { return path_ + "." + key; }

  const json& get(const char* key) {
    seen_.insert(key);
    if (!node_.contains(key)) fail(at(key), "missing required field");
    return node_.at(key);
  }

  double number(const char* key) {
    const json& v = get(key);
    if (!v.is_number()) fail(at(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(at(key), "expected a finite number");
    return d;
  }
  double number_or(const char* key, double fallback) { return has(key) ? number(key) : fallback; }
  std::optional<double> maybe_number(const char* key) {
    return has(key) ? std::optional<double>(number(key)) : std::nullopt;
  }

  int integer(const char* key) {
    const json& v = get(key);
    if (!v.is_number_integer()) fail(at(key), "expected an integer");
    return v.get<int>();
  }
  int integer_or(const char* key, int fallback) { return has(key) ? integer(key) : fallback; }

  std::string string(const char* key) {
    const json& v = get(key);
    if (!v.is_string()) fail(at(key), "expected a string");
    return v.get<std::string>();
  }

  bool boolean(const char* key) {
    const json& v = get(key);
    if (!v.is_boolean()) fail(at(key), "expected true or false");
    return v.get<bool>();
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) fail(path_ + "." + key, "unknown field");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& path, const char* what) {
  if (!ok) fail(path, what);
}

OraclePlanet parse_oracle(const json& node, const std::string& path) {
  Fields f(node, path);
  const std::string kind = f.string("kind");
  OraclePlanet out;
  if (kind == "point_mass") {
    const double r0 = f.number("r0");
    const double c = f.number("cos_theta");
    require(c >= -1.0 && c <= 1.0, f.at("cos_theta"), "must lie in [-1, 1]");
    const double mass = f.number_or("mass", 1.0);
    const double G = f.number_or("gravitational_constant", 1.0);
    const double R = f.number_or("reference_radius", 1.0);
    require(r0 >= 0.0 && r0 < R, f.at("r0"), "must lie in [0, reference_radius)");
    out = point_mass_planet(r0, std::acos(c), mass, G, R);
  } else if (kind == "ball") {
    const double radius = f.number_or("radius", 1.0);
    require(radius > 0.0, f.at("radius"), "must be positive");
    out = homogeneous_ball(radius, f.number_or("density", 1.0), f.number_or("gravitational_constant", 1.0));
  } else {
    fail(f.at("kind"), "expected point_mass or ball");
  }
  f.finish();
  return out;
}

AsymptSection parse_asympt(const json& node, const std::string& path) {
  Fields f(node, path);
  AsymptSection s;
  s.n_min = f.integer_or("n_min", s.n_min);
  s.n_max = f.integer_or("n_max", s.n_max);
  require(s.n_min >= 1 && s.n_max >= s.n_min, path, "needs 1 <= n_min <= n_max");
  if (f.has("assembly")) {
    const std::string a = f.string("assembly");
    if (a == "minus") {
      s.assembly = C1Assembly::Minus;
    } else if (a == "plus") {
      s.assembly = C1Assembly::Plus;
    } else {
      fail(f.at("assembly"), "expected minus or plus");
    }
  }
  if (f.has("expect_pass")) s.expect_pass = f.boolean("expect_pass");
  f.finish();
  return s;
}

RadiusSection parse_radius(const json& node, const std::string& path) {
  Fields f(node, path);
  RadiusSection s;
  s.n_max = f.integer_or("n_max", s.n_max);
  require(s.n_max >= 1, f.at("n_max"), "must be positive");
  s.beta_m = f.maybe_number("beta_m");
  if (s.beta_m) require(*s.beta_m > 0.0, f.at("beta_m"), "must be positive");
  if (f.has("expect")) {
    const std::string v = f.string("expect");
    for (Verdict cand : {Verdict::ConvergesExactlyAtBrillouin, Verdict::OverconvergenceSuspected, Verdict::Inconclusive}) {
      if (v == to_string(cand)) s.expect = cand;
    }
    require(s.expect.has_value(), f.at("expect"), "unknown verdict");
  }
  s.expect_rho = f.maybe_number("expect_rho");
  s.rho_tolerance = f.number_or("rho_tolerance", s.rho_tolerance);
  require(s.rho_tolerance > 0.0, f.at("rho_tolerance"), "must be positive");
  f.finish();
  return s;
}

SpectralSection parse_spectral(const json& node, const std::string& path) {
  Fields f(node, path);
  SpectralSection s;
  if (f.has("source")) s.source = f.string("source");
  require(s.source == "appendix" || s.source == "planet", f.at("source"), "expected appendix or planet");
  s.beta = f.number_or("beta", s.beta);
  s.eps = f.number_or("eps", s.eps);
  s.taper_order = f.integer_or("taper_order", s.taper_order);
  s.k_min = f.number_or("k_min", s.k_min);
  s.k_max = f.number_or("k_max", s.k_max);
  s.count = f.integer_or("count", s.count);
  s.beta_test = f.maybe_number("beta_test");
  s.expect_beta = f.maybe_number("expect_beta");
  s.beta_tolerance = f.number_or("beta_tolerance", s.beta_tolerance);
  require(s.beta > 1.0, f.at("beta"), "must exceed 1");
  require(s.eps > 0.0, f.at("eps"), "must be positive");
  require(s.taper_order >= 1, f.at("taper_order"), "must be >= 1");
  require(s.k_min > 0.0 && s.k_max > s.k_min, path, "needs 0 < k_min < k_max");
  require(s.count >= 2, f.at("count"), "must be >= 2");
  f.finish();
  return s;
}

BalayageSection parse_balayage(const json& node, const std::string& path) {
  Fields f(node, path);
  BalayageSection s;
  if (f.has("sources")) {
    const json& arr = f.get("sources");
    require(arr.is_array(), f.at("sources"), "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = f.at("sources") + "[" + std::to_string(i) + "]";
      Fields e(arr[i], p);
      const json& pos = e.get("position");
      require(pos.is_array() && pos.size() == 3, e.at("position"), "expected three numbers");
      for (const auto& c : pos) require(c.is_number(), e.at("position"), "expected three numbers");
      PointSource src;
      src.position = {pos[0].get<double>(), pos[1].get<double>(), pos[2].get<double>()};
      src.mass = e.number_or("mass", 1.0);
      require(norm(src.position) < 1.0, e.at("position"), "must lie inside the unit sphere");
      e.finish();
      s.sources.push_back(src);
    }
  }
  if (f.has("random_sources")) {
    Fields r(f.get("random_sources"), f.at("random_sources"));
    RandomSources rs;
    rs.count = r.integer_or("count", rs.count);
    rs.max_radius = r.number_or("max_radius", rs.max_radius);
    require(rs.count >= 1, r.at("count"), "must be >= 1");
    require(rs.max_radius > 0.0 && rs.max_radius < 1.0, r.at("max_radius"), "must lie in (0, 1)");
    r.finish();
    s.random_sources = rs;
  }
  require(!s.sources.empty() || s.random_sources, path, "needs sources or random_sources");
  s.plemelj_points = f.integer_or("plemelj_points", s.plemelj_points);
  s.p = f.number_or("p", s.p);
  s.series_order = f.integer_or("series_order", s.series_order);
  s.probe_x0 = f.maybe_number("probe_x0");
  s.mu_samples = f.integer_or("mu_samples", s.mu_samples);
  require(s.plemelj_points >= 1, f.at("plemelj_points"), "must be >= 1");
  require(std::abs(s.p) < 1.0 && s.p != 0.0, f.at("p"), "must satisfy 0 < |p| < 1");
  require(s.series_order >= 1, f.at("series_order"), "must be >= 1");
  require(s.mu_samples >= 2, f.at("mu_samples"), "must be >= 2");
  f.finish();
  return s;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::Coeffs, Command::Asympt, Command::Radius, Command::Spectral, Command::Balayage,
                    Command::FullVerify}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

std::string_view to_string(Command command) noexcept {
  switch (command) {
    case Command::Coeffs: return "coeffs";
    case Command::Asympt: return "asympt";
    case Command::Radius: return "radius";
    case Command::Spectral: return "spectral";
    case Command::Balayage: return "balayage";
    case Command::FullVerify: return "full-verify";
  }
  return "?";
}

ExperimentConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("config", std::string("malformed JSON: ") + e.what());
  }
  Fields f(root, "config");
  ExperimentConfig cfg;
  const int version = f.integer("schema_version");
  if (version != kConfigSchemaVersion) fail(f.at("schema_version"), "unsupported version " + std::to_string(version));

  if (f.has("command")) {
    cfg.command = parse_command(f.string("command"));
    require(cfg.command.has_value(), f.at("command"), "unknown command");
  }
  if (f.has("planet")) cfg.planet = planet_spec_from_json(f.get("planet").dump(), f.at("planet"));
  if (f.has("oracle")) cfg.oracle = parse_oracle(f.get("oracle"), f.at("oracle"));
  require(!(cfg.planet && cfg.oracle), "config", "planet and oracle are mutually exclusive");

  cfg.n_min = f.integer_or("n_min", cfg.n_min);
  cfg.n_max = f.integer_or("n_max", cfg.n_max);
  require(cfg.n_min >= 0 && cfg.n_max >= cfg.n_min, "config", "needs 0 <= n_min <= n_max");
  if (f.has("tolerance")) {
    Fields t(f.get("tolerance"), f.at("tolerance"));
    cfg.tolerance.rel = t.number_or("rel", cfg.tolerance.rel);
    cfg.tolerance.abs = t.number_or("abs", cfg.tolerance.abs);
    require(cfg.tolerance.rel >= 0.0 && cfg.tolerance.abs >= 0.0, f.at("tolerance"), "must be non-negative");
    require(cfg.tolerance.rel > 0.0 || cfg.tolerance.abs > 0.0, f.at("tolerance"), "needs rel or abs > 0");
    t.finish();
  }
  if (f.has("output_dir")) cfg.output_dir = f.string("output_dir");
  if (f.has("seed")) {
    const json& v = f.get("seed");
    require(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0), f.at("seed"),
            "expected a non-negative integer");
    cfg.seed = v.get<std::uint64_t>();
  }
  cfg.jobs = f.integer_or("jobs", cfg.jobs);
  require(cfg.jobs >= 0, f.at("jobs"), "must be >= 0");

  if (f.has("asympt")) cfg.asympt = parse_asympt(f.get("asympt"), f.at("asympt"));
  if (f.has("radius")) cfg.radius = parse_radius(f.get("radius"), f.at("radius"));
  if (f.has("spectral")) cfg.spectral = parse_spectral(f.get("spectral"), f.at("spectral"));
  if (f.has("balayage")) cfg.balayage = parse_balayage(f.get("balayage"), f.at("balayage"));
  if (cfg.balayage && cfg.balayage->random_sources && !cfg.seed) {
    fail(f.at("seed"), "required when balayage.random_sources is present");
  }
  f.finish();

  json canon = root;
  canon.erase("output_dir");
  canon.erase("jobs");
  cfg.canonical = canon.dump();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Config, path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_hash(const ExperimentConfig& config, Command command) {
  const std::string key = config.canonical + "|" + std::string(to_string(command)) +
                          "|rel=" + fmt17(config.tolerance.rel) + "|abs=" + fmt17(config.tolerance.abs);
  return hex64(fnv1a64(key));
}

}  // namespace she::cli
