#include <cmath>
#include <numbers>

#include "doctest.h"
#include "she/error.hpp"
#include "she/legendre.hpp"
#include "she/model.hpp"

using namespace she;

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Config;
}

PlanetSpec quadratic_spec() {
  PlanetSpec s;
  s.theta0 = 1.0;
  s.peak = QuadraticPeak{2.0, {}};
  s.weight = SmoothPowerWeight{1, 1.0, {}};
  return s;
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("cusp peak values") {
    PlanetSpec s;
    s.theta0 = kPi / 3;
    s.peak = PowerCuspPeak{1.0, 1.0, 1.0, {}};
    const auto p = build_profile(s);
    CHECK(p.eval_F(s.theta0) == 0.0);
    CHECK(p.eval_F(s.theta0 + 0.1) == doctest::Approx(0.1).epsilon(1e-14));
    for (double x : {1e-2, 1e-4}) CHECK(std::abs(p.eval_F(s.theta0 + x) - p.eval_F(s.theta0 - x)) < 1e-15);
    CHECK(derivative_count(s.peak) == 0);
    CHECK(derivative_count(PeakShape{PowerC1Peak{}}) == 1);
    CHECK(derivative_count(PeakShape{QuadraticPeak{}}) == 2);
  }

  TEST_CASE("quadratic peak and outer radius") {
    const auto p = build_profile(quadratic_spec());
    CHECK(p.eval_F(1.1) == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(p.eval_rM(1.0) == 1.0);
    CHECK(p.eval_rM(1.1) == doctest::Approx(0.98019867330675527).epsilon(1e-14));
    CHECK(p.eval_rm(1.1) == doctest::Approx(0.5 * p.eval_rM(1.1)));
  }

  TEST_CASE("surface weight from a radial density") {
    PlanetSpec s = quadratic_spec();
    s.radial_density = [](double, double) { return 1.0; };
    auto p = build_profile(s);
    CHECK(p.eval_g(kPi / 2) == doctest::Approx(1.0));
    CHECK(p.eval_g(kPi / 6) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));

    // v(r) = r with r_M(pi/4) = 0.9
    PlanetSpec t;
    t.theta0 = kPi / 4;
    t.peak = QuadraticPeak{1.0, {}};
    t.radius = 0.9;
    t.radial_density = [](double r, double) { return r; };
    p = build_profile(t);
    CHECK(p.eval_g(kPi / 4) == doctest::Approx(0.9 * std::sqrt(std::sqrt(2.0) / 2)).epsilon(1e-14));
  }

  TEST_CASE("weights") {
    CHECK(eval_weight(SmoothPowerWeight{2, 3.0, {}}, 0.1) == doctest::Approx(0.03));
    CHECK(eval_weight(TwoSidedCuspWeight{1.5, 2.0, 1.0, {}}, -0.04) == doctest::Approx(0.008));
    CHECK(eval_weight(TwoSidedCuspWeight{1.5, 2.0, 1.0, {}}, 0.04) == doctest::Approx(0.016));
    const FourierTailWeight f{1.5, 0.3, 4};
    CHECK(eval_taper(f, 0.0) == 1.0);
    CHECK(eval_taper(f, 0.3) == 0.0);
    CHECK(eval_weight(f, 0.5) == 0.0);
    CHECK(eval_weight(f, 0.09) == doctest::Approx(0.3 * std::pow(1 - 0.09, 4)));
  }

  TEST_CASE("rejections") {
    PlanetSpec s = quadratic_spec();
    s.theta0 = kPi / 2;
    CHECK(kind_of([&] { build_profile(s); }) == ErrorKind::RejectDomain);
    s.theta0 = 0.0;
    CHECK(kind_of([&] { build_profile(s); }) == ErrorKind::RejectDomain);

    s = quadratic_spec();
    s.delta1 = 10.0;
    CHECK(kind_of([&] { build_profile(s); }) == ErrorKind::RejectNonGeneric);

    s = quadratic_spec();
    s.peak = QuadraticPeak{2.0, Correction::custom_fn([](double x) { return std::pow(std::abs(x), 2.5); }, 4.0)};
    CHECK(kind_of([&] { build_profile(s); }) == ErrorKind::InvalidArgument);

    s = quadratic_spec();
    s.peak = QuadraticPeak{2.0, Correction::power(0.1, 3.0)};
    CHECK_NOTHROW(build_profile(s));

    s = quadratic_spec();
    s.peak = PowerCuspPeak{1.5, 1.0, 1.0, {}};
    CHECK(kind_of([&] { build_profile(s); }) == ErrorKind::RejectDomain);
  }

  TEST_CASE("point-mass oracle") {
    const auto pm = point_mass_planet(0.9, std::acos(0.5), 1.0);
    CHECK(oracle_coefficient(pm, 2) == doctest::Approx(0.10125).epsilon(1e-14));
    CHECK(oracle_coefficient(pm, 0) == doctest::Approx(-1.0));
    CHECK(oracle_coefficient(point_mass_planet(0.0, 0.3, 1.0), 3) == 0.0);
    CHECK(oracle_potential(pm, 3.0) == doctest::Approx(-1.0 / std::sqrt(9.0 - 5.4 * 0.5 + 0.81)).epsilon(1e-14));
    // z V(z) -> C_0
    CHECK(1e8 * oracle_potential(pm, 1e8) == doctest::Approx(-1.0).epsilon(1e-7));
    for (int n : {5, 50, 200}) {
      CHECK(oracle_scaled_coefficient(pm, n) ==
            doctest::Approx(-std::pow(0.9, n) * legendre_eval(n, 0.5)).epsilon(1e-13));
    }
  }

  TEST_CASE("ball oracle") {
    const auto ball = homogeneous_ball(1.0, 1.0);
    CHECK(oracle_coefficient(ball, 0) == doctest::Approx(-4 * kPi / 3).epsilon(1e-14));
    for (int n : {1, 3, 7, 50}) CHECK(oracle_coefficient(ball, n) == 0.0);
    CHECK(oracle_potential(ball, 2.0) == doctest::Approx(-(4 * kPi / 3) / 2).epsilon(1e-14));
  }
}
