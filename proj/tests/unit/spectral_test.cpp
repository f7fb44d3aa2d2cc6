#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "she/error.hpp"
#include "she/spectral.hpp"

using namespace she;
using cd = std::complex<double>;

namespace {

const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

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

std::vector<cd> transform(const RealFunction& f, double eps, const std::vector<double>& k) {
  std::vector<cd> out;
  for (double kk : k) out.push_back(fourier_eval(f, -2 * eps, 2 * eps, kk, {1e-10, 0.0}, {0.0}).value);
  return out;
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("cutoff") {
    const Cutoff phi = build_cutoff(1.0, 0.2);
    CHECK(phi(1.0) == 1.0);
    CHECK(phi(1.19) == 1.0);
    CHECK(phi(0.81) == 1.0);
    CHECK(phi(1.4) == 0.0);
    CHECK(phi(0.55) == 0.0);
    CHECK(phi(1.3) == doctest::Approx(0.5));
    CHECK(phi.shifted(-0.25) == doctest::Approx(phi.shifted(0.25)).epsilon(1e-15));
    CHECK(smooth_step(-1.0) == 0.0);
    CHECK(smooth_step(2.0) == 1.0);
    CHECK(smooth_step(0.5) == doctest::Approx(0.5));
    CHECK(kind_of([] { build_cutoff(1.0, 0.6); }) == ErrorKind::RejectDomain);
    CHECK(kind_of([] { build_cutoff(1.0, 0.0); }) == ErrorKind::RejectDomain);
  }

  TEST_CASE("zero frequency is the plain integral") {
    const RealFunction f = appendix_function(1.5, 0.3, 3);
    const auto plain = integrate_adaptive<double>(f, {-0.6, 0.0, 0.6}, {1e-13, 0.0});
    const auto r = fourier_eval(f, -0.6, 0.6, 0.0, {1e-12, 0.0}, {0.0});
    CHECK(r.converged);
    CHECK(r.value.real() == doctest::Approx(plain.value / kSqrt2Pi).epsilon(1e-11));
    CHECK(std::abs(r.value.imag()) < 1e-14);
  }

  TEST_CASE("gaussian self transform") {
    const RealFunction g = [](double x) { return std::exp(-0.5 * x * x); };
    for (double k : {-5.0, -2.5, 0.0, 1.0, 3.0, 5.0}) {
      const auto r = fourier_eval(g, -10.0, 10.0, k, {1e-13, 0.0});
      CHECK(std::abs(r.value - std::exp(-0.5 * k * k)) <= 1e-8 * std::exp(-0.5 * k * k));
    }
  }

  TEST_CASE("appendix tail oracle") {
    // sqrt(2/pi) Gamma(beta) cos(pi beta / 2), mpmath
    const double amp[] = {-0.27675839655552545, -0.5, -0.75};
    const double betas[] = {1.25, 1.5, 2.5};
    for (int i = 0; i < 3; ++i) {
      const auto oracle = appendix_oracle(betas[i]);
      const cd scaled = oracle(-1000.0) * std::pow(1000.0, betas[i]);
      CHECK(scaled.real() == doctest::Approx(amp[i]).epsilon(1e-12));
      CHECK(std::abs(scaled.imag()) < 1e-12);
      CHECK(std::abs(oracle(1000.0) - std::conj(oracle(-1000.0))) < 1e-15);
    }
    const auto printed = appendix_oracle(1.5, AppendixVariant::AsPrinted);
    CHECK(std::abs(printed(-1000.0) - appendix_oracle(1.5)(-1000.0)) > 0.1 * std::abs(appendix_oracle(1.5)(-1000.0)));
    CHECK(kind_of([] { appendix_oracle(2.0); }) == ErrorKind::IntegerBeta);
    CHECK(kind_of([] { appendix_oracle(0.8); }) == ErrorKind::RejectDomain);
  }

  TEST_CASE("transform of the appendix function follows the oracle") {
    for (double beta : {1.25, 1.5, 2.5}) {
      const RealFunction f = appendix_function(beta, 0.3, 4);
      const cd num = fourier_eval(f, -0.6, 0.6, -1000.0, {1e-10, 0.0}, {0.0}).value;
      const cd ref = appendix_oracle(beta)(-1000.0);
      CHECK(std::abs(num - ref) <= 0.02 * std::abs(ref));
    }
    // reality symmetry
    const RealFunction f = appendix_function(2.5, 0.3, 4);
    const cd plus = fourier_eval(f, -0.6, 0.6, 700.0, {1e-10, 0.0}, {0.0}).value;
    const cd minus = fourier_eval(f, -0.6, 0.6, -700.0, {1e-10, 0.0}, {0.0}).value;
    CHECK(std::abs(plus) == doctest::Approx(std::abs(minus)).epsilon(1e-9));
  }

  TEST_CASE("tail fit on exact input") {
    const auto k = negative_k_grid(50.0, 2e4, 60);
    CHECK(k.size() == 60);
    CHECK(k.front() == doctest::Approx(-50.0));
    CHECK(k.back() == doctest::Approx(-2e4));
    std::vector<cd> f;
    for (double kk : k) f.push_back(std::pow(-kk, -1.5));
    const auto fit = fit_tail(k, f);
    CHECK(fit.beta == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(std::abs(fit.amplitude - 1.0) < 1e-6);
    CHECK(fit.residual < 1e-6);
    CHECK(tail_fit_to_json(fit).find("\"beta\"") != std::string::npos);
  }

  TEST_CASE("tail fit failures") {
    const auto k = negative_k_grid(50.0, 2e4, 60);
    std::vector<cd> gauss;
    for (double kk : k) gauss.push_back(std::exp(-0.5 * kk * kk / 1e6));
    CHECK(kind_of([&] { fit_tail(k, gauss); }) == ErrorKind::NoPowerLaw);

    const auto shortk = negative_k_grid(50.0, 500.0, 60);
    std::vector<cd> p(shortk.size(), 1.0);
    CHECK(kind_of([&] { fit_tail(shortk, p); }) == ErrorKind::InsufficientSamples);
    const auto fewk = negative_k_grid(50.0, 2e4, 10);
    std::vector<cd> q(fewk.size(), 1.0);
    CHECK(kind_of([&] { fit_tail(fewk, q); }) == ErrorKind::InsufficientSamples);
  }

  TEST_CASE("tail fit on the appendix function and cutoff independence") {
    const auto k = negative_k_grid(50.0, 2e4, 60);
    for (double beta : {1.25, 1.5, 2.5}) {
      const auto fit = fit_tail(k, transform(appendix_function(beta, 0.3, 4), 0.3, k));
      const double amp = (appendix_oracle(beta)(-1.0)).real();
      CHECK(fit.beta == doctest::Approx(beta).epsilon(0.02));
      CHECK(std::abs(fit.amplitude - amp) <= 0.05 * std::abs(amp));
    }
    const auto wide = fit_tail(k, transform(appendix_function(1.5, 0.3, 3), 0.3, k));
    const auto narrow = fit_tail(k, transform(appendix_function(1.5, 0.15, 3), 0.15, k));
    CHECK(std::abs(wide.amplitude - narrow.amplitude) <=
          std::abs(wide.amplitude) * std::max(0.01, 10 * (wide.residual + narrow.residual)));
  }

  TEST_CASE("weighted sup") {
    const auto k = negative_k_grid(50.0, 2e4, 60);
    std::vector<cd> exact;
    for (double kk : k) exact.push_back(std::pow(1.0 + std::abs(kk), -1.5));
    const auto r = check_Linf(1.5, k, exact);
    CHECK(r.sup == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_FALSE(r.unbounded_trend);

    const std::vector<cd> zero(k.size(), 0.0);
    CHECK(check_Linf(1.5, k, zero).sup == 0.0);

    const auto f = transform(appendix_function(1.5, 0.3, 3), 0.3, k);
    const auto low = check_Linf(1.4, k, f);
    const auto high = check_Linf(1.6, k, f);
    CHECK(std::isfinite(low.sup));
    CHECK_FALSE(low.unbounded_trend);
    CHECK(high.unbounded_trend);
    CHECK(high.outer_slope > 0.05);
  }

  TEST_CASE("gaussian window") {
    const auto constant = [](double) { return cd(2.0, 0.0); };
    CHECK(std::abs(gaussian_window(constant, 1e4, 1.0, 0.75) - 2.0 * kSqrt2Pi) < 1e-8);
    const auto tail = [](double k) { return cd(std::pow(-k, -1.5), 0.0); };
    const cd w1 = gaussian_window(tail, 2000.0, 1.0, 0.75);
    const cd w2 = gaussian_window(tail, 4000.0, 1.0, 0.75);
    CHECK(w1.real() == doctest::Approx(kSqrt2Pi * std::pow(2000.0, -1.5)).epsilon(0.03));
    CHECK((w2 / w1).real() == doctest::Approx(std::pow(2.0, -1.5)).epsilon(0.03));
    CHECK(kind_of([&] { gaussian_window(constant, 100.0, 1.0, 0.4); }) == ErrorKind::InvalidArgument);
  }

  TEST_CASE("transform csv") {
    const auto csv = transform_to_csv({-1.0}, {cd(0.5, -0.25)}, "config_hash=1");
    CHECK(csv == "# config_hash=1\nk,re,im\n-1,0.5,-0.25\n");
  }
}
