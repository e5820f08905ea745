#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "phasegrating/bessel.hpp"

using phasegrating::bessel_j;
using phasegrating::bessel_j_table;

namespace {

// Ascending series summed term by term in long double; independent of the library path.
double series_oracle(int n, double x, int terms = 30) {
  long double sum = 0.0L;
  long double fact_k = 1.0L;
  for (int k = 0; k < terms; ++k) {
    if (k > 0) fact_k *= k;
    long double fact_nk = 1.0L;
    for (int i = 2; i <= n + k; ++i) fact_nk *= i;
    const long double term = ((k % 2) ? -1.0L : 1.0L) * std::pow(0.5L * x, 2 * k + n) / (fact_k * fact_nk);
    sum += term;
  }
  return static_cast<double>(sum);
}

struct Frozen {
  int n;
  double x;
  double value;
};

// mpmath.besselj at 30 significant digits, rounded to 20.
const Frozen kFrozen[] = {
    {0, 3.0, -0.26005195490193343762},  {1, 3.0, 0.33905895852593645893},
    {2, 3.0, 0.48609126058589107691},   {3, 3.0, 0.30906272225525164362},
    {5, 0.5, 8.053627241357474086e-6},  {0, 10.0, -0.2459357644513483352},
    {7, 10.0, 0.21671091768505151406},  {20, 10.0, 0.000011513369247813397783},
    {30, 29.0, 0.10304804665860467132}, {1, 1e-4, 0.000049999999937500002422},
    {4, 50.0, 0.070840977281654952354}, {12, 3.0, 2.2757254483205719769e-7},
    {0, 100.0, 0.019985850304223122424}, {40, 100.0, 0.072701754822811056577},
};

}  // namespace

TEST_CASE("frozen high-precision values") {
  for (const auto& f : kFrozen) {
    CAPTURE(f.n);
    CAPTURE(f.x);
    CHECK(std::abs(bessel_j(f.n, f.x) - f.value) < 1e-13);
  }
  // Far below the turning point the value itself is tiny; check it relatively.
  CHECK(bessel_j(25, 0.9) == doctest::Approx(1.3686241266398785678e-34).epsilon(1e-12));
}

TEST_CASE("J_1(3) against a 30-term ascending series") {
  CHECK(std::abs(bessel_j(1, 3.0) - series_oracle(1, 3.0)) < 1e-14);
  CHECK(bessel_j(1, 3.0) == doctest::Approx(0.3390590).epsilon(1e-7));
}

TEST_CASE("values at the origin") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  for (int n = 1; n < 10; ++n) CHECK(bessel_j(n, 0.0) == 0.0);
}

TEST_CASE("agreement with std::cyl_bessel_j on a grid") {
  double worst = 0.0;
  for (int n = 0; n <= 40; ++n) {
    for (double x = 0.05; x <= 60.0; x += 0.37) {
      worst = std::max(worst, std::abs(bessel_j(n, x) - std::cyl_bessel_j(static_cast<double>(n), x)));
    }
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("three-term recurrence residual") {
  double worst = 0.0;
  for (double x : {0.3, 1.0, 2.5, 3.0, 7.7, 15.0, 42.0}) {
    for (int n = 1; n < 30; ++n) {
      const double r = bessel_j(n - 1, x) + bessel_j(n + 1, x) - 2.0 * n / x * bessel_j(n, x);
      worst = std::max(worst, std::abs(r));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("reflection symmetries in order and argument") {
  for (int n = 0; n < 8; ++n) {
    const double sign = (n % 2) ? -1.0 : 1.0;
    CHECK(bessel_j(-n, 2.3) == doctest::Approx(sign * bessel_j(n, 2.3)));
    CHECK(bessel_j(n, -2.3) == doctest::Approx(sign * bessel_j(n, 2.3)));
  }
}

TEST_CASE("completeness: J_0^2 + 2 sum J_n^2 = 1") {
  for (double x : {0.5, 3.0, 10.0, 35.0}) {
    const int top = static_cast<int>(x) + 30;
    const auto j = bessel_j_table(top, x);
    double s = j[0] * j[0];
    for (int n = 1; n <= top; ++n) s += 2.0 * j[n] * j[n];
    CHECK(std::abs(s - 1.0) < 1e-13);
  }
}

TEST_CASE("table matches the scalar routine") {
  for (double x : {1e-5, 0.2, 3.0, -3.0, 18.0}) {
    const auto j = bessel_j_table(25, x);
    REQUIRE(j.size() == 26);
    for (int n = 0; n <= 25; ++n) CHECK(std::abs(j[n] - bessel_j(n, x)) < 1e-14);
  }
  CHECK(bessel_j_table(3, 0.0) == std::vector<double>{1.0, 0.0, 0.0, 0.0});
  CHECK_THROWS_AS(bessel_j_table(-1, 1.0), std::invalid_argument);
}

TEST_CASE("non-finite argument is rejected") {
  CHECK_THROWS_AS(bessel_j(0, INFINITY), std::invalid_argument);
  CHECK_THROWS_AS(bessel_j(1, NAN), std::invalid_argument);
}
