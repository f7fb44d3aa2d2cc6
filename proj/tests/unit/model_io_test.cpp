#include <cmath>
#include <string>

#include "doctest.h"
#include "she/error.hpp"
#include "she/model_io.hpp"

using namespace she;

namespace {

std::string error_text(std::string_view json) {
  try {
    planet_spec_from_json(json);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    return e.what();
  }
  FAIL("accepted malformed spec");
  return {};
}

}  // namespace

TEST_SUITE("model_io") {
  TEST_CASE("round trip") {
    PlanetSpec s;
    s.theta0 = 1.2;
    s.delta = 0.25;
    s.peak = PowerCuspPeak{0.5, 1.0, 2.0, Correction::signed_power(0.3, 0.9)};
    s.weight = TwoSidedCuspWeight{1.5, 2.0, 0.5, Correction::power(0.1, 1.0)};
    const std::string text = planet_spec_to_json(s);
    const PlanetSpec back = planet_spec_from_json(text);
    CHECK(planet_spec_to_json(back) == text);
    CHECK(spec_fingerprint(back) == spec_fingerprint(s));
    const auto& peak = std::get<PowerCuspPeak>(back.peak);
    CHECK(peak.a_plus == 2.0);
    CHECK(peak.remainder.kind == Correction::Kind::SignedPower);
    CHECK(back.delta == 0.25);

    s.theta0 = 1.2000000000000002;
    CHECK(spec_fingerprint(s) != spec_fingerprint(back));
  }

  TEST_CASE("fourier tail and c1 shapes") {
    PlanetSpec s;
    s.peak = PowerC1Peak{1.5, 1.0, 2.0};
    s.weight = C1MixedWeight{1.0, 1.0, 0.5, 1.5};
    CHECK(planet_spec_to_json(planet_spec_from_json(planet_spec_to_json(s))) == planet_spec_to_json(s));
    s.peak = QuadraticPeak{2.0, {}};
    s.weight = FourierTailWeight{1.5, 0.3, 4};
    const auto back = planet_spec_from_json(planet_spec_to_json(s));
    CHECK(std::get<FourierTailWeight>(back.weight).taper_order == 4);
  }

  TEST_CASE("schema errors carry a field path") {
    const std::string no_theta =
        R"({"schema_version": 1, "peak": {"kind": "quadratic", "curvature": 2}, "weight": {"kind": "smooth_power", "k": 1, "gk": 1}})";
    CHECK(error_text(no_theta).find("planet.theta0: missing required field") != std::string::npos);
    const std::string no_alpha =
        R"({"schema_version": 1, "theta0": 1, "peak": {"kind": "power_cusp", "a_minus": 1, "a_plus": 1}, "weight": {"kind": "smooth_power", "k": 1, "gk": 1}})";
    CHECK(error_text(no_alpha).find("planet.peak.alpha: missing required field") != std::string::npos);
    const std::string extra =
        R"({"schema_version": 1, "theta0": 1, "colour": "red", "peak": {"kind": "quadratic", "curvature": 2}, "weight": {"kind": "smooth_power", "k": 1, "gk": 1}})";
    CHECK(error_text(extra).find("planet.colour: unknown field") != std::string::npos);
    const std::string no_version =
        R"({"theta0": 1, "peak": {"kind": "quadratic", "curvature": 2}, "weight": {"kind": "smooth_power", "k": 1, "gk": 1}})";
    CHECK(error_text(no_version).find("schema_version") != std::string::npos);
    CHECK(error_text("{not json").size() > 0);
  }

  TEST_CASE("custom callables") {
    PlanetSpec s;
    s.peak = QuadraticPeak{2.0, Correction::custom_fn([](double x) { return x * x * x; }, 3.0)};
    try {
      planet_spec_to_json(s);
      FAIL("serialized a callable");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotSerializable);
    }
    PlanetSpec t = s;
    t.peak = QuadraticPeak{2.0, Correction::custom_fn([](double x) { return 2 * x * x * x; }, 3.0)};
    CHECK(spec_fingerprint(s) == spec_fingerprint(t));
  }

  TEST_CASE("fnv1a") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(hex64(0xabcULL) == "0000000000000abc");
  }
}
