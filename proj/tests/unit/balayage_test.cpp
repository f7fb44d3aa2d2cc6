#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "she/balayage.hpp"
#include "she/error.hpp"
#include "she/model.hpp"

using namespace she;
using cd = std::complex<double>;

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

SurfaceMeasure half() {
  return make_measure([](double) { return 0.5; });
}

}  // namespace

TEST_SUITE("balayage") {
  TEST_CASE("green function") {
    CHECK(green_sphere({0, 0, 0}, {0, 0.5, 0}) == doctest::Approx(1 / (4 * kPi) * (1 / 0.5 - 1)).epsilon(1e-14));
    const Vec3 a{0.1, 0.2, -0.3};
    const Vec3 b{-0.4, 0.1, 0.5};
    CHECK(green_sphere(a, b) == doctest::Approx(green_sphere(b, a)).epsilon(1e-14));
    CHECK(green_sphere(a, b) > 0.0);
    CHECK(std::abs(green_sphere({0, 0, 0.5}, {0.6, 0.8, 0})) < 1e-15);
  }

  TEST_CASE("swept density") {
    CHECK(swept_density_point({0, 0, 0}, {0, 0, 1}) == doctest::Approx(1 / (4 * kPi)));
    CHECK(swept_density_point({0, 0, 0}, {0.6, 0, 0.8}) == doctest::Approx(1 / (4 * kPi)));
    const auto c = mu_from_point_masses({{{0, 0, 0}, 1.0}});
    CHECK(c.mu(0.3) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(c.mass == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("axial and off-axis measures") {
    const auto ax = mu_from_point_masses({{{0, 0, 0.6}, 1.0}});
    for (double x : {-0.9, -0.3, 0.2, 0.7, 0.95}) CHECK(ax.mu(x) == doctest::Approx(mu_axial(0.6, x)).epsilon(1e-13));
    // mpmath longitude quadrature of the swept density of (0.3, -0.2, 0.5) at x = 0.4
    const auto off = mu_from_point_masses({{{0.3, -0.2, 0.5}, 1.0}});
    CHECK(off.mu(0.4) == doctest::Approx(0.56718659565934761).epsilon(1e-13));
    CHECK(make_measure(off.mu).mass == doctest::Approx(1.0).epsilon(1e-12));
    const auto two = mu_from_point_masses({{{0, 0, 0.6}, 1.0}, {{0.3, -0.2, 0.5}, 2.0}}, 0.5);
    CHECK(two.mu(0.4) == doctest::Approx(0.5 * (mu_axial(0.6, 0.4) + 2 * 0.56718659565934761)).epsilon(1e-13));
  }

  TEST_CASE("Q operator") {
    CHECK(build_Q(half(), 0.0) == doctest::Approx(1.0).epsilon(1e-13));
    const double p = 0.5;
    CHECK(build_Q(half(), p) == doctest::Approx((std::sqrt(1 + p) - std::sqrt(1 - p)) / p).epsilon(1e-13));
    // mpmath quadrature of mu_axial(0.6, x) (1 - x/2)^{-1/2}
    const auto ax = mu_from_point_masses({{{0, 0, 0.6}, 1.0}});
    CHECK(build_Q(ax, 0.5) == doctest::Approx(1.2336017333496931).epsilon(1e-12));
    CHECK(build_Q(ax, cd(0.5, 0.0)).real() == doctest::Approx(1.2336017333496931).epsilon(1e-12));
    CHECK(kind_of([&] { build_Q(ax, 1.0); }) == ErrorKind::CutViolation);
    CHECK(kind_of([&] { build_Q(ax, -1.5); }) == ErrorKind::CutViolation);
    const auto pm = point_mass_planet(0.6, 0.0, 1.0);
    CHECK(axial_potential(ax, 3.0) == doctest::Approx(oracle_potential(pm, 3.0)).epsilon(1e-13));
    CHECK(axial_potential(ax, 3.0) < 0.0);
  }

  TEST_CASE("maclaurin series of Q") {
    const auto ax = mu_from_point_masses({{{0, 0, 0.6}, 1.0}});
    const auto s = maclaurin_Q(ax, 80);
    CHECK(s.size() == 81);
    CHECK(s(0.3).real() == doctest::Approx(build_Q(ax, 0.3)).epsilon(1e-12));
  }

  TEST_CASE("operator A") {
    const auto b = binomial_half_series(50);
    const auto a = apply_A_series(b);
    for (const auto& c : a.c) CHECK(std::abs(c - 1.0) < 1e-12);
    const auto conv = apply_A_convolution(b);
    for (const auto& c : conv.c) CHECK(std::abs(c - 1.0) < 1e-12);

    PowerSeries one{{1.0}};
    CHECK(std::abs(apply_A_series(one).c[0] - 1.0) < 1e-15);
    PowerSeries lin{{0.0, 1.0}};
    CHECK(std::abs(apply_A_series(lin).c[1] - 2.0) < 1e-15);
  }

  TEST_CASE("Cauchy route") {
    CHECK(apply_A_cauchy(half(), cd(2.0, 0.0)).real() == doctest::Approx(std::log(3.0)).epsilon(1e-13));
    CHECK(apply_A_cauchy(half(), cd(1e7, 0.0)).real() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(kind_of([] { apply_A_cauchy(half(), cd(0.5, 0.0)); }) == ErrorKind::OnCut);

    const auto ax = mu_from_point_masses({{{0, 0, 0.6}, 1.0}});
    // mpmath: zeta int mu / (zeta - x) at zeta = 1/0.3
    const cd cauchy = apply_A_cauchy(ax, cd(1.0 / 0.3, 0.0));
    CHECK(cauchy.real() == doctest::Approx(1.2484171825509099).epsilon(1e-12));
    const cd series = apply_A_series(maclaurin_Q(ax, 60))(0.3);
    CHECK(std::abs(cauchy - series) <= 1e-8 * std::abs(cauchy));
  }

  TEST_CASE("Plemelj jump") {
    const auto r = plemelj_jump(half(), 0.5);
    CHECK(std::abs(r.jump - cd(0.0, -kPi / 2)) < 1e-8);
    CHECK(r.mu_hat == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(r.raw.size() == kPlemeljEps.size());

    const auto ax = mu_from_point_masses({{{0, 0, 0.6}, 1.0}});
    CHECK(plemelj_jump(ax, 0.5).mu_hat == doctest::Approx(mu_axial(0.6, 0.5)).epsilon(1e-6));
    CHECK(kind_of([&] { plemelj_jump(ax, 0.0); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([&] { plemelj_jump(ax, 0.9999); }) == ErrorKind::InvalidArgument);

    const auto cusp = make_measure([](double x) { return 0.3 + std::sqrt(std::abs(x - 0.4)); }, 0.5, {0.4});
    CHECK(plemelj_jump(cusp, 0.4).mu_hat == doctest::Approx(0.3).epsilon(0.05));
    CHECK(plemelj_to_json(r, 0.5).find("\"mu_hat\"") != std::string::npos);
  }

  TEST_CASE("analyticity probe") {
    const auto analytic = make_measure([](double x) { return 1.0 / (2.0 - x); });
    CHECK(analyticity_probe(analytic, 0.5).verdict == Analyticity::ConsistentWithAnalytic);
    const auto ax = mu_from_point_masses({{{0, 0, 0.6}, 1.0}});
    CHECK(analyticity_probe(ax, 0.5).verdict == Analyticity::ConsistentWithAnalytic);

    const auto kink = make_measure([](double x) { return std::pow(std::abs(x - 0.5), 1.5) + 1.0 / (2.0 - x); });
    CHECK(analyticity_probe(kink, 0.5).verdict == Analyticity::NonAnalyticSignature);

    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto noisy = make_measure([seed](double x) {
        std::mt19937_64 g(std::hash<double>{}(x) ^ seed);
        return 1.0 / (2.0 - x) + 1e-3 * std::normal_distribution<>()(g);
      });
      CHECK(analyticity_probe(noisy, 0.5).verdict == Analyticity::Inconclusive);
    }
    CHECK(probe_to_json(analyticity_probe(analytic, 0.5)).find("ConsistentWithAnalytic") != std::string::npos);
  }

  TEST_CASE("measure csv") {
    const auto csv = measure_to_csv(half(), 5, "config_hash=z");
    CHECK(csv.rfind("# config_hash=z\nx,mu\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  }
}
