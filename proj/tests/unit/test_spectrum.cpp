#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "phasegrating/bessel.hpp"
#include "phasegrating/spectrum.hpp"

using namespace phasegrating;

namespace {

ExitWavefunction phase_grating(double u, std::size_t samples, double period = std::numbers::pi,
                               double shift = 0.0, double z = 0.0) {
  const double G = 2.0 * std::numbers::pi / period;
  std::vector<complex> env(samples);
  for (std::size_t j = 0; j < samples; ++j) {
    const double x = period * static_cast<double>(j) / static_cast<double>(samples);
    env[j] = std::polar(1.0, -u * std::cos(G * (x - shift)));
  }
  return ExitWavefunction(period, z, std::move(env));
}

const BeamParameters kNormal(1.0, 1e4, 0.0);

}  // namespace

TEST_CASE("order kinematics") {
  const BeamParameters b(1.0, 10.0, 0.0);
  const auto o0 = order_momenta(b, 1.0, 0);
  CHECK(o0.px == 0.0);
  CHECK(o0.pz == 10.0);
  CHECK(o0.open);
  const auto o3 = order_momenta(b, 1.0, 3);
  CHECK(o3.px == 3.0);
  CHECK(o3.pz == doctest::Approx(std::sqrt(91.0)).epsilon(1e-15));
  CHECK(o3.open);
  CHECK_FALSE(order_momenta(BeamParameters(1.0, 2.0, 0.0), 1.0, 3).open);

  const BeamParameters tilted(1.0, 50.0, 0.3);
  for (int n = -20; n <= 20; ++n) {
    const auto o = order_momenta(tilted, 1.7, n);
    CHECK(o.px == doctest::Approx(tilted.px() + 1.7 * n));
    if (o.open) {
      CHECK(o.pz >= 0.0);
      CHECK(std::abs(o.px * o.px + o.pz * o.pz - 2500.0) <= 1e-12 * 2500.0);
    }
  }
}

TEST_CASE("exit wavefunction sample count") {
  CHECK_THROWS_AS(ExitWavefunction(1.0, 0.0, std::vector<complex>(32, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(ExitWavefunction(1.0, 0.0, std::vector<complex>(96, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(ExitWavefunction(1.0, 0.0, std::vector<complex>(64, 1.0), std::vector<double>(32, 1.0)),
                  std::invalid_argument);
  CHECK_NOTHROW(ExitWavefunction(1.0, 0.0, std::vector<complex>(64, 1.0)));
}

TEST_CASE("uniform wavefunction goes entirely into order 0") {
  // The envelope is relative to the incident carrier, so a_0 = 1 on any plane.
  const ExitWavefunction psi(std::numbers::pi, 123.0, std::vector<complex>(128, 1.0));
  const auto s = amplitudes_fourier(psi, kNormal, 2.0);
  CHECK(std::abs(s.amplitude(0) - complex(1.0, 0.0)) < 1e-14);
  for (const auto& o : s.orders()) {
    if (o.n != 0) CHECK(std::abs(o.amplitude) < 1e-14);
  }
  const ExitWavefunction with_pz(std::numbers::pi, 0.0, std::vector<complex>(128, 1.0), std::vector<double>(128, kNormal.pz()));
  const auto k = amplitudes_kirchhoff(with_pz, kNormal, 2.0);
  CHECK(std::abs(k.amplitude(0) - complex(1.0, 0.0)) < 1e-14);
  CHECK(k.population(1) < 1e-28);
}

TEST_CASE("Jacobi-Anger: pure phase grating gives (-i)^n J_n(u)") {
  const auto s = amplitudes_fourier(phase_grating(3.0, 256), kNormal, 2.0);
  for (int n = -8; n <= 8; ++n) {
    const double jn = bessel_j(n, 3.0);
    CHECK(std::abs(s.population(n) - jn * jn) < 1e-13);
  }
  CHECK(s.population(1) == doctest::Approx(0.11496097735669269975).epsilon(1e-12));
  const auto c = closed_form_spectrum(3.0, {-8, 8});
  for (int n = -8; n <= 8; ++n) CHECK(std::abs(s.amplitude(n) - c.amplitude(n)) < 1e-13);
  CHECK(std::abs(c.amplitude(1) - complex(0.0, -bessel_j(1, 3.0))) < 1e-15);
  CHECK(std::abs(c.amplitude(2) - complex(-bessel_j(2, 3.0), 0.0)) < 1e-15);
}

TEST_CASE("plane-wave factor of the exit plane") {
  // For z != 0 each order picks up exp(i (p_iz - p_z^(n)) z/hbar).
  const double z = 500.0;
  const auto s = amplitudes_fourier(phase_grating(1.0, 128, std::numbers::pi, 0.0, z), kNormal, 2.0);
  const auto c = closed_form_spectrum(1.0, {-3, 3});
  for (int n = -3; n <= 3; ++n) {
    const double pzn = std::sqrt(1e8 - 4.0 * n * n);
    const complex expected = c.amplitude(n) * std::polar(1.0, (1e4 - pzn) * z);
    CHECK(std::abs(s.amplitude(n) - expected) < 1e-9);
  }
}

TEST_CASE("closed form spectrum") {
  const auto zero = closed_form_spectrum(0.0, {-3, 3});
  CHECK(zero.population(0) == 1.0);
  CHECK(zero.population(2) == 0.0);
  for (double u : {0.5, 3.0, 10.0}) {
    const int top = static_cast<int>(u) + 20;
    CHECK(std::abs(closed_form_spectrum(u, {-top, top}).total_population() - 1.0) < 1e-10);
  }
  CHECK(closed_form_spectrum(3.0, {-5, 5}).population(0) == doctest::Approx(0.0676).epsilon(1e-3));
  CHECK_THROWS_AS(closed_form_spectrum(-1.0, {-3, 3}), std::invalid_argument);
  CHECK_THROWS_AS(closed_form_spectrum(1.0, {3, -3}), std::invalid_argument);
  const OrderWindow w = default_order_window(3.0);
  CHECK(w.max >= 18);
  CHECK(w.min == -w.max);
}

TEST_CASE("closed channels are kept with zero amplitude") {
  const BeamParameters slow(1.0, 5.0, 0.0);
  const auto c = closed_form_spectrum(3.0, {-8, 8}, slow, 2.0);
  CHECK_FALSE(c.orders().front().kinematics->open);
  CHECK(c.population(-8) == 0.0);
  CHECK(c.population(2) > 0.0);
  const auto f = amplitudes_fourier(phase_grating(3.0, 128), slow, 2.0, OrderWindow{-8, 8});
  CHECK(f.population(3) == 0.0);
  CHECK_FALSE(f.orders()[static_cast<std::size_t>(3 + 8)].kinematics->open);
}

TEST_CASE("grazing order is excluded from the obliquity route") {
  // p = 4 hbar G/2: order 2 has px = p and pz = 0.
  const BeamParameters b(1.0, 4.0, 0.0);
  const ExitWavefunction psi(std::numbers::pi, 0.0, std::vector<complex>(64, 1.0), std::vector<double>(64, 4.0));
  const auto k = amplitudes_kirchhoff(psi, b, 2.0, OrderWindow{-3, 3});
  const auto& o2 = k.orders()[static_cast<std::size_t>(2 + 3)];
  CHECK(o2.kinematics->open);
  CHECK(o2.excluded);
  CHECK(k.amplitude(2) == complex(0.0, 0.0));
  CHECK_THROWS_AS(amplitudes_kirchhoff(phase_grating(1.0, 64), b, 2.0), std::invalid_argument);
}

TEST_CASE("obliquity factor with a uniform exit momentum") {
  // p_fz = p_iz everywhere: each order is the Fourier amplitude times (1 + p_iz/p_z^(n))/2.
  const BeamParameters b(1.0, 40.0, 0.0);
  const auto phase = phase_grating(2.0, 128);
  const ExitWavefunction psi(phase.period(), 0.0, phase.envelope(), std::vector<double>(128, b.pz()));
  const auto f = amplitudes_fourier(psi, b, 2.0, OrderWindow{-6, 6});
  const auto k = amplitudes_kirchhoff(psi, b, 2.0, OrderWindow{-6, 6});
  for (int n = -6; n <= 6; ++n) {
    const double factor = 0.5 * (1.0 + b.pz() / order_momenta(b, 2.0, n).pz);
    CHECK(std::abs(k.amplitude(n) - factor * f.amplitude(n)) < 1e-14);
  }
  CHECK(k.amplitude(0) == f.amplitude(0));
}

TEST_CASE("unitarity and parity of the Fourier route") {
  for (double u : {0.5, 3.0, 10.0}) {
    const auto s = amplitudes_fourier(phase_grating(u, 512), kNormal, 2.0);
    CHECK(std::abs(s.total_population() - 1.0) < 1e-10);
    for (int n = 1; n <= s.max_order(); ++n) CHECK(std::abs(s.population(n) - s.population(-n)) < 1e-12);
  }
  // Default window extends past 15 when the edge still carries population.
  const auto wide = amplitudes_fourier(phase_grating(14.0, 512), kNormal, 2.0);
  CHECK(wide.max_order() > 15);
  CHECK(wide.population(wide.max_order()) < 1e-14);
}

TEST_CASE("shifting the grating multiplies a_n by exp(-i n G d)") {
  const double d = 0.37;
  const auto s0 = amplitudes_fourier(phase_grating(3.0, 256), kNormal, 2.0);
  const auto s1 = amplitudes_fourier(phase_grating(3.0, 256, std::numbers::pi, d), kNormal, 2.0);
  for (int n = -8; n <= 8; ++n) {
    CHECK(std::abs(s1.amplitude(n) - s0.amplitude(n) * std::polar(1.0, -2.0 * n * d)) < 1e-13);
    CHECK(s1.population(n) == doctest::Approx(s0.population(n)).epsilon(1e-12));
  }
}

TEST_CASE("trapezoid rule is spectrally converged") {
  const auto a = amplitudes_fourier(phase_grating(3.0, 256), kNormal, 2.0, OrderWindow{-12, 12});
  const auto b = amplitudes_fourier(phase_grating(3.0, 512), kNormal, 2.0, OrderWindow{-12, 12});
  for (int n = -12; n <= 12; ++n) CHECK(std::abs(a.amplitude(n) - b.amplitude(n)) < 1e-12);
}

TEST_CASE("reciprocal vector must match the period") {
  CHECK_THROWS_AS(amplitudes_fourier(phase_grating(1.0, 64), kNormal, 3.0), std::invalid_argument);
}

TEST_CASE("method tags") {
  CHECK(to_string(SpectrumMethod::closed_form) == "closed-form");
  CHECK(to_string(SpectrumMethod::fourier) == "fourier");
  CHECK(to_string(SpectrumMethod::kirchhoff) == "kirchhoff-wkb");
  CHECK(to_string(SpectrumMethod::ode_oracle) == "ode-oracle");
  CHECK_THROWS_AS(DiffractionSpectrum(SpectrumMethod::fourier, {}), std::invalid_argument);
}
