#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "phasegrating/errors.hpp"
#include "phasegrating/numerics/ode.hpp"
#include "phasegrating/numerics/quadrature.hpp"

using namespace phasegrating;
using namespace phasegrating::numerics;

namespace {

void oscillator(double, std::span<const double> y, std::span<double> dy) {
  dy[0] = y[1];
  dy[1] = -y[0];
}

}  // namespace

TEST_CASE("dopri5 follows the harmonic oscillator") {
  OdeOptions opt;
  opt.rtol = 1e-11;
  opt.atol = {1e-13};
  const std::vector<double> y0 = {1.0, 0.0};
  const auto sol = integrate_dopri5(oscillator, 0.0, 10.0, y0, opt);
  CHECK(sol.t_end() == 10.0);
  CHECK(sol.final_state()[0] == doctest::Approx(std::cos(10.0)).epsilon(1e-9));
  CHECK(sol.final_state()[1] == doctest::Approx(-std::sin(10.0)).epsilon(1e-9));

  SUBCASE("dense output between nodes") {
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double t = 10.0 * i / 400.0;
      const auto y = sol.evaluate(t);
      worst = std::max(worst, std::abs(y[0] - std::cos(t)));
    }
    CHECK(worst < 1e-8);
  }
  SUBCASE("outside the span") { CHECK_THROWS_AS(sol.evaluate(10.5), std::out_of_range); }
}

TEST_CASE("dopri5 integrates backwards in time") {
  const std::vector<double> y0 = {std::cos(3.0), -std::sin(3.0)};
  OdeOptions opt;
  opt.rtol = 1e-11;
  opt.atol = {1e-13};
  const auto sol = integrate_dopri5(oscillator, 3.0, -1.0, y0, opt);
  CHECK(sol.final_state()[0] == doctest::Approx(std::cos(-1.0)).epsilon(1e-9));
  CHECK(sol.evaluate(1.0)[0] == doctest::Approx(std::cos(1.0)).epsilon(1e-8));
}

TEST_CASE("observer sees every accepted step in order") {
  std::vector<double> times;
  const std::vector<double> y0 = {1.0};
  auto rhs = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = -2.0 * y[0]; };
  const auto sol = integrate_dopri5(rhs, 0.0, 2.0, y0, {}, [&](double t, std::span<const double>) { times.push_back(t); });
  REQUIRE(times.size() == sol.steps());
  for (std::size_t i = 1; i < times.size(); ++i) CHECK(times[i] > times[i - 1]);
  CHECK(times.back() == 2.0);
  CHECK(sol.final_state()[0] == doctest::Approx(std::exp(-4.0)).epsilon(1e-9));
}

TEST_CASE("per-component absolute tolerance is honoured") {
  // Two decoupled decays with very different magnitudes.
  const std::vector<double> y0 = {1e8, 1e-8};
  auto rhs = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = -y[0];
    dy[1] = -y[1];
  };
  OdeOptions opt;
  opt.rtol = 1e-10;
  opt.atol = {1e-2, 1e-20};
  const auto sol = integrate_dopri5(rhs, 0.0, 1.0, y0, opt);
  CHECK(sol.final_state()[1] == doctest::Approx(1e-8 * std::exp(-1.0)).epsilon(1e-8));
}

TEST_CASE("dopri5 without dense output keeps only the end points") {
  OdeOptions opt;
  opt.dense = false;
  const std::vector<double> y0 = {1.0, 0.0};
  const auto sol = integrate_dopri5(oscillator, 0.0, 1.0, y0, opt);
  CHECK(sol.steps() == 1);
  CHECK(sol.final_state()[0] == doctest::Approx(std::cos(1.0)).epsilon(1e-8));
  CHECK_THROWS_AS(sol.evaluate(0.5), std::logic_error);
}

TEST_CASE("finite-time blow-up raises IntegrationError with the last good state") {
  // y' = y^2, y(0) = 1 diverges at t = 1.
  auto rhs = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0] * y[0]; };
  const std::vector<double> y0 = {1.0};
  try {
    integrate_dopri5(rhs, 0.0, 2.0, y0);
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.time() == doctest::Approx(1.0).epsilon(1e-3));
    REQUIRE(e.last_state().size() == 1);
    CHECK(std::isfinite(e.last_state()[0]));
    CHECK(e.last_state()[0] > 1e3);
  }
}

TEST_CASE("dopri5 rejects malformed input") {
  const std::vector<double> empty;
  const std::vector<double> y0 = {1.0, 2.0};
  CHECK_THROWS_AS(integrate_dopri5(oscillator, 0.0, 1.0, empty), std::invalid_argument);
  OdeOptions opt;
  opt.atol = {1e-9, 1e-9, 1e-9};
  CHECK_THROWS_AS(integrate_dopri5(oscillator, 0.0, 1.0, y0, opt), std::invalid_argument);
  opt = {};
  opt.rtol = 0.0;
  CHECK_THROWS_AS(integrate_dopri5(oscillator, 0.0, 1.0, y0, opt), std::invalid_argument);
}

TEST_CASE("zero-length span returns the initial state") {
  const std::vector<double> y0 = {0.25, 0.5};
  const auto sol = integrate_dopri5(oscillator, 1.0, 1.0, y0);
  CHECK(sol.steps() == 0);
  CHECK(sol.evaluate(1.0)[1] == 0.5);
}

TEST_CASE("Gauss-Kronrod on smooth integrands") {
  const QuadratureOptions opt{1e-14, 1e-14, 2000};
  CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, opt).value ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK(integrate_adaptive([](double x) { return std::exp(-x * x); }, -10.0, 10.0, opt).value ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
  // Oscillatory with decay: int_0^100 cos(x) e^{-x/50} dx.
  const double a = 1.0 / 50.0;
  const double exact = (a - std::exp(-100.0 * a) * (a * std::cos(100.0) - std::sin(100.0))) / (1.0 + a * a);
  CHECK(integrate_adaptive([a](double x) { return std::cos(x) * std::exp(-a * x); }, 0.0, 100.0, opt).value ==
        doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("Gauss-Kronrod copes with an endpoint derivative singularity") {
  const auto r = integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, {1e-12, 1e-12, 2000});
  CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-11));
  CHECK_FALSE(r.used_fallback);
}

TEST_CASE("reversed bounds and empty interval") {
  CHECK(integrate_adaptive([](double x) { return x; }, 1.0, 0.0).value == doctest::Approx(-0.5));
  CHECK(integrate_adaptive([](double x) { return x; }, 2.0, 2.0).value == 0.0);
}

TEST_CASE("Simpson fallback takes over when subdivisions run out") {
  const QuadratureOptions opt{1e-10, 1e-10, 1};
  const auto r = integrate_adaptive([](double x) { return std::cos(40.0 * x); }, 0.0, 3.0, opt);
  CHECK(r.used_fallback);
  CHECK(r.value == doctest::Approx(std::sin(120.0) / 40.0).epsilon(1e-8));
}

TEST_CASE("divergent integral reports estimate and bound") {
  try {
    integrate_adaptive([](double x) { return 1.0 / x; }, 0.0, 1.0, {1e-10, 1e-10, 200});
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(e.error_bound() > 0.0);
  }
}
