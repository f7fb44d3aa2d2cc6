#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "she_cli/config.hpp"
#include "she_cli/run.hpp"

using namespace she;
using namespace she::cli;
namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& name) { return std::string(SHE_FIXTURES_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("she_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunResult run_fixture(Command c, const std::string& name, const fs::path& out) {
  std::ostringstream report;
  RunOptions opt;
  opt.out = out.string();
  return run(c, load_config(fixture(name)), opt, report);
}

int main_with(std::vector<std::string> args) {
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("command names") {
    CHECK(parse_command("full-verify") == Command::FullVerify);
    CHECK(parse_command("spectral") == Command::Spectral);
    CHECK_FALSE(parse_command("bogus").has_value());
    CHECK(to_string(Command::Asympt) == "asympt");
  }

  TEST_CASE("exit code classes") {
    CHECK(exit_code_for(ErrorKind::Config) == kExitConfig);
    CHECK(exit_code_for(ErrorKind::RejectNonGeneric) == kExitConfig);
    CHECK(exit_code_for(ErrorKind::UnsupportedPairing) == kExitConfig);
    CHECK(exit_code_for(ErrorKind::ToleranceNotMet) == kExitNumeric);
    CHECK(exit_code_for(ErrorKind::NoPowerLaw) == kExitNumeric);
  }

  TEST_CASE("config validation") {
    try {
      load_config(fixture("missing_theta0.json"));
      FAIL("accepted a planet without theta0");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Config);
      CHECK(std::string(e.what()).find("config.planet.theta0: missing required field") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "oracle": {"kind": "point_mass", "r0": 0.9, "cos_theta": 0.5}, "n_mx": 3})"),
                    Error);
    CHECK_THROWS_AS(parse_config(R"({"schema_version": 1, "balayage": {"random_sources": {"count": 2}}})"), Error);
    const auto c = parse_config(R"({"schema_version": 1, "oracle": {"kind": "point_mass", "r0": 0.9, "cos_theta": 0.5}})");
    CHECK(c.n_max == 200);
    CHECK(c.oracle.has_value());
  }

  TEST_CASE("hash ignores output placement") {
    const auto a = parse_config(R"({"schema_version": 1, "oracle": {"kind": "point_mass", "r0": 0.9, "cos_theta": 0.5}, "output_dir": "x", "jobs": 4})");
    const auto b = parse_config(R"({"jobs": 1, "oracle": {"cos_theta": 0.5, "r0": 0.9, "kind": "point_mass"}, "schema_version": 1})");
    const auto c = parse_config(R"({"schema_version": 1, "oracle": {"kind": "point_mass", "r0": 0.8, "cos_theta": 0.5}})");
    CHECK(config_hash(a, Command::Coeffs) == config_hash(b, Command::Coeffs));
    CHECK(config_hash(a, Command::Coeffs) != config_hash(c, Command::Coeffs));
    CHECK(config_hash(a, Command::Coeffs) != config_hash(a, Command::Radius));
    CHECK(config_hash(a, Command::Coeffs).size() == 16);
  }

  TEST_CASE("output directory precedence") {
    auto c = parse_config(R"({"schema_version": 1, "oracle": {"kind": "point_mass", "r0": 0.9, "cos_theta": 0.5}, "output_dir": "from_config"})");
    RunOptions opt;
    CHECK(resolve_output_dir(c, opt) == "from_config");
    opt.out = "from_flag";
    CHECK(resolve_output_dir(c, opt) == "from_flag");
    c.output_dir.reset();
    opt.out.reset();
    ::setenv(kOutRootEnv, "from_env", 1);
    CHECK(resolve_output_dir(c, opt) == "from_env");
    ::unsetenv(kOutRootEnv);
    CHECK(resolve_output_dir(c, opt) == "she_out");
  }

  TEST_CASE("full-verify on the point mass") {
    const auto out = scratch("full");
    const auto r = run_fixture(Command::FullVerify, "point_mass.json", out);
    CHECK(r.exit_code == kExitOk);
    CHECK(r.artifacts.size() >= 3);
    bool has_report = false;
    for (const auto& a : r.artifacts) {
      CHECK(fs::exists(a));
      if (a.find("_report.json") != std::string::npos) {
        has_report = true;
        CHECK(slurp(a).find("\"config_hash\"") != std::string::npos);
      }
      if (a.ends_with(".csv")) CHECK(slurp(a).rfind("# config_hash=", 0) == 0);
    }
    CHECK(has_report);
  }

  TEST_CASE("verdict mismatch") {
    auto c = load_config(fixture("point_mass.json"));
    c.radius->expect = Verdict::ConvergesExactlyAtBrillouin;
    std::ostringstream report;
    RunOptions opt;
    opt.out = scratch("mismatch").string();
    CHECK(run(Command::Radius, c, opt, report).exit_code == kExitVerdict);
  }

  TEST_CASE("planet commands need a planet") {
    std::ostringstream report;
    RunOptions opt;
    opt.out = scratch("noplanet").string();
    const auto r = run(Command::Asympt, load_config(fixture("point_mass.json")), opt, report);
    CHECK(r.exit_code == kExitConfig);
    CHECK_FALSE(r.message.empty());
  }

  TEST_CASE("deterministic artifacts") {
    for (auto [cmd, file] : {std::pair{Command::Spectral, "appendix.json"}, std::pair{Command::Balayage, "balayage.json"},
                             std::pair{Command::Coeffs, "point_mass.json"}}) {
      const auto a = run_fixture(cmd, file, scratch("det_a"));
      const auto b = run_fixture(cmd, file, scratch("det_b"));
      REQUIRE(a.exit_code == kExitOk);
      REQUIRE(a.artifacts.size() == b.artifacts.size());
      for (std::size_t i = 0; i < a.artifacts.size(); ++i) {
        CHECK(fs::path(a.artifacts[i]).filename() == fs::path(b.artifacts[i]).filename());
        CHECK(slurp(a.artifacts[i]) == slurp(b.artifacts[i]));
      }
    }
  }

  TEST_CASE("command line") {
    const auto out = scratch("argv");
    CHECK(main_with({"she", "coeffs", "--config", fixture("point_mass.json"), "--out", out.string()}) == kExitOk);
    CHECK(main_with({"she", "coeffs", "--config", fixture("missing_theta0.json"), "--out", out.string()}) == kExitConfig);
    CHECK(main_with({"she", "coeffs"}) == kExitUsage);
    CHECK(main_with({"she", "nonsense"}) == kExitUsage);
    CHECK(main_with({"she", "coeffs", "--config", fixture("does_not_exist.json")}) == kExitConfig);
  }
}
