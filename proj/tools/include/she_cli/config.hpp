#pragma once

// Experiment configuration for the batch front end.
//
//   {
//     "schema_version": 1,
//     "planet": { ...planet spec... }            or
//     "oracle": {"kind": "point_mass", "r0": 0.9, "cos_theta": 0.5, "mass": 1.0},
//     "n_min": 0, "n_max": 200,
//     "tolerance": {"rel": 1e-10, "abs": 0.0},
//     "output_dir": "out", "seed": 7, "jobs": 1,
//     "asympt":   {"n_min": 500, "n_max": 1000, "assembly": "minus", "expect_pass": true},
//     "radius":   {"n_max": 2000, "beta_m": 4.0, "expect": "ConvergesExactlyAtBrillouin",
//                  "expect_rho": 0.9, "rho_tolerance": 0.005},
//     "spectral": {"source": "appendix", "beta": 1.5, "eps": 0.3, "taper_order": 3,
//                  "k_min": 50, "k_max": 20000, "count": 60, "beta_test": 1.5,
//                  "expect_beta": 1.5, "beta_tolerance": 0.03},
//     "balayage": {"sources": [{"position": [0, 0, 0.6], "mass": 1}],
//                  "random_sources": {"count": 3, "max_radius": 0.8},
//                  "plemelj_points": 20, "p": 0.3, "series_order": 60,
//                  "probe_x0": 0.5, "mu_samples": 201}
//   }
//
// Unknown keys are rejected at every level. "seed" is required when
// random_sources is present.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "she/asymptotics.hpp"
#include "she/balayage.hpp"
#include "she/convergence.hpp"
#include "she/model.hpp"
#include "she/quadrature.hpp"

namespace she::cli {

inline constexpr int kConfigSchemaVersion = 1;

enum class Command { Coeffs, Asympt, Radius, Spectral, Balayage, FullVerify };

std::optional<Command> parse_command(std::string_view name);
std::string_view to_string(Command command) noexcept;

struct AsymptSection {
  int n_min = 500;
  int n_max = 1000;
  C1Assembly assembly = C1Assembly::Minus;
  std::optional<bool> expect_pass;
};

struct RadiusSection {
  int n_max = 2000;
  std::optional<double> beta_m;
  std::optional<Verdict> expect;
  std::optional<double> expect_rho;
  double rho_tolerance = 0.005;
};

struct SpectralSection {
  /// "appendix" or "planet" (cutoff times the planet's surface weight).
  std::string source = "appendix";
  double beta = 1.5;
  double eps = 0.3;
  int taper_order = 3;
  double k_min = 50.0;
  double k_max = 2e4;
  int count = 60;
  std::optional<double> beta_test;
  std::optional<double> expect_beta;
  double beta_tolerance = 0.03;
};

struct RandomSources {
  int count = 3;
  double max_radius = 0.8;
};

struct BalayageSection {
  std::vector<PointSource> sources;
  std::optional<RandomSources> random_sources;
  int plemelj_points = 20;
  double p = 0.3;
  int series_order = 60;
  std::optional<double> probe_x0;
  int mu_samples = 201;
};

struct ExperimentConfig {
  std::optional<PlanetSpec> planet;
  std::optional<OraclePlanet> oracle;
  std::optional<Command> command;
  int n_min = 0;
  int n_max = 200;
  Tolerance tolerance{1e-10, 0.0};
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::optional<AsymptSection> asympt;
  std::optional<RadiusSection> radius;
  std::optional<SpectralSection> spectral;
  std::optional<BalayageSection> balayage;
  /// Canonical text of everything that can change a number (sorted keys,
  /// without output_dir and jobs).
  std::string canonical;
};

/// Throws Error(ErrorKind::Config) with a field path such as
/// "config.planet.theta0: missing required field".
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// FNV-1a of the canonical text and the command name, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config, Command command);

}  // namespace she::cli
