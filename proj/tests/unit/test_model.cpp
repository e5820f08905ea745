#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "phasegrating/model.hpp"

using namespace phasegrating;
using fixtures::Gen;

TEST_CASE("beam components") {
  const BeamParameters b(2.0, 10.0, 0.3, 0.5);
  CHECK(b.px() == doctest::Approx(10.0 * std::sin(0.3)));
  CHECK(b.pz() == doctest::Approx(10.0 * std::cos(0.3)));
  CHECK(b.vz() == doctest::Approx(b.pz() / 2.0));
  CHECK(b.hbar() == 0.5);

  Gen gen(11);
  for (int i = 0; i < 200; ++i) {
    const double p = gen.log_uniform(1e-3, 1e7);
    const BeamParameters beam(1.0, p, gen.uniform(0.0, 1.5707));
    CHECK(std::abs(beam.px() * beam.px() + beam.pz() * beam.pz() - p * p) <= 4e-16 * p * p);
  }
}

TEST_CASE("normal incidence has no transverse momentum") {
  const BeamParameters b(1.0, 5.0, 0.0);
  CHECK(b.px() == 0.0);
  CHECK(b.pz() == 5.0);
}

TEST_CASE("invalid beams are rejected") {
  CHECK_THROWS_AS(BeamParameters(1.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(BeamParameters(1.0, -1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(BeamParameters(0.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(BeamParameters(1.0, 1.0, std::numbers::pi / 2), std::invalid_argument);
  CHECK_THROWS_AS(BeamParameters(1.0, 1.0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(BeamParameters::from_normal_momentum(1.0, 1.0, 2.0), std::invalid_argument);
}

TEST_CASE("from_normal_momentum fixes pz") {
  const auto b = BeamParameters::from_normal_momentum(1.0, 100.0, 0.7);
  CHECK(b.pz() == doctest::Approx(100.0).epsilon(1e-14));
}

TEST_CASE("invalid gratings are rejected") {
  CHECK_THROWS_AS(GaussianGrating(1.0, 0.0, 1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(GaussianGrating(1.0, 1.0, -1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(GaussianGrating(1.0, 1.0, 1.0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(EvanescentGrating(0.0, 1.0, 1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(EvanescentGrating(1.0, 1.0, 0.0, 0.1), std::invalid_argument);
}

TEST_CASE("grating geometry") {
  const GaussianGrating g(1.0, 50.0, 2.0, 0.1);
  CHECK(g.period() == doctest::Approx(std::numbers::pi / 2.0));
  CHECK(g.reciprocal() == doctest::Approx(4.0));
  CHECK(g.period() * g.reciprocal() == doctest::Approx(2.0 * std::numbers::pi));
  const BeamParameters b(2.0, 10.0, 0.0, 1.0);
  CHECK(g.interaction_time(b) == doctest::Approx(2.0 * 50.0 / 10.0));
  CHECK(g.recoil_energy(b) == doctest::Approx(1.0));

  const EvanescentGrating e(100.0, 2.0, 3.0, 0.1);
  CHECK(e.period() == doctest::Approx(std::numbers::pi / 3.0));
  CHECK(e.reciprocal() == doctest::Approx(6.0));
  CHECK(e.interaction_time(b) == doctest::Approx(2.0 / (2.0 * 10.0)));
  CHECK(e.reflects(b));
  CHECK_FALSE(EvanescentGrating(20.0, 2.0, 3.0, 0.1).reflects(b));
  CHECK_THROWS_AS(EvanescentGrating(20.0, 2.0, 3.0, 0.1).turning_point(b), std::invalid_argument);
}

TEST_CASE("potential_total examples") {
  const GratingModel g = GaussianGrating(1.0, 3.0, 1.0, 0.1);
  CHECK(potential_total(g, 0.0, 0.0) == doctest::Approx(0.1 * 2.0 / std::sqrt(2.0 * std::numbers::pi)));
  CHECK(potential_total(g, 0.0, 0.0) == doctest::Approx(0.0797885).epsilon(1e-6));
  CHECK(potential_total(g, 0.3, 1e3) == 0.0);
  CHECK(unperturbed_potential(g, 0.3, 0.2) == 0.0);

  // At the turning point of the plain mirror the potential equals the normal kinetic energy.
  const BeamParameters b(1.0, 10.0, 0.4);
  const EvanescentGrating plain(80.0, 1.5, 1.0, 0.0);
  const double zt = plain.turning_point(b);
  CHECK(potential_total(GratingModel{plain}, 0.7, zt) == doctest::Approx(b.normal_energy()).epsilon(1e-14));
  const GratingModel e = EvanescentGrating(80.0, 1.5, 1.0, 0.2);
  CHECK(potential_total(e, 0.0, 0.0) == doctest::Approx(80.0 * 1.2));
}

TEST_CASE("potentials are periodic in x") {
  Gen gen(3);
  const GratingModel models[] = {GaussianGrating(2.0, 5.0, 1.3, 0.1), EvanescentGrating(50.0, 0.8, 1.7, 0.05)};
  for (const auto& m : models) {
    const double a = grating_period(m);
    for (int i = 0; i < 500; ++i) {
      const double x = gen.uniform(-20.0, 20.0), z = gen.uniform(-3.0, 3.0);
      const double v = potential_total(m, x, z);
      CHECK(std::abs(potential_total(m, x + a, z) - v) <= 1e-12 * std::abs(v) + 1e-300);
    }
  }
}

TEST_CASE("gradients and Hessian match finite differences") {
  const GratingModel models[] = {GaussianGrating(2.0, 5.0, 1.3, 0.1), EvanescentGrating(50.0, 0.8, 1.7, 0.05)};
  const double h = 1e-5;
  for (const auto& m : models) {
    for (double x : {0.1, 0.9, 2.2}) {
      for (double z : {-1.0, 0.4, 2.0}) {
        const Vec2 g = perturbation_gradient(m, x, z);
        const double fx = (perturbation_potential(m, x + h, z) - perturbation_potential(m, x - h, z)) / (2 * h);
        const double fz = (perturbation_potential(m, x, z + h) - perturbation_potential(m, x, z - h)) / (2 * h);
        CHECK(g.x == doctest::Approx(fx).epsilon(1e-7));
        CHECK(g.z == doctest::Approx(fz).epsilon(1e-7));
        const Vec2 g0 = unperturbed_gradient(m, x, z);
        const double f0 = (unperturbed_potential(m, x, z + h) - unperturbed_potential(m, x, z - h)) / (2 * h);
        CHECK(g0.z == doctest::Approx(f0).epsilon(1e-7));
        const Hessian2 hs = unperturbed_hessian(m, x, z);
        const double hzz = (unperturbed_gradient(m, x, z + h).z - unperturbed_gradient(m, x, z - h).z) / (2 * h);
        CHECK(hs.zz == doctest::Approx(hzz).epsilon(1e-7));
        CHECK(hs.xx == 0.0);
      }
    }
  }
}

TEST_CASE("dimensionless groups: phase amplitude 3 at normal incidence") {
  // eps V1 tau/(2 hbar) = 3
  const auto kd = fixtures::kd_case(3.0, 0.05);
  const auto g = dimensionless_groups(kd.model(), kd.beam, 3);
  CHECK(g.u == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(g.beta == 1.0);
  CHECK(g.eta == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(g.recoil_energy == doctest::Approx(0.5));

  // eps p_z/(hbar kappa) = 3
  const auto ew = fixtures::ew_case(3.0);
  CHECK(dimensionless_groups(ew.model(), ew.beam, 3).u == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("dimensionless groups: eps = 0 gives u = 0") {
  const auto kd = fixtures::kd_case(3.0, 0.05);
  CHECK(dimensionless_groups(kd.grating.with_epsilon(0.0), kd.beam, 1).u == 0.0);
  const auto ew = fixtures::ew_case(3.0);
  CHECK(dimensionless_groups(ew.grating.with_epsilon(0.0), ew.beam, 1).u == 0.0);
  CHECK_THROWS_AS(dimensionless_groups(kd.model(), kd.beam, -1), std::invalid_argument);
}

TEST_CASE("eta is twice n_max times the Raman-Nath parameter") {
  Gen gen(5);
  for (int i = 0; i < 50; ++i) {
    const auto kd = fixtures::kd_case(gen.uniform(0.1, 8.0), gen.uniform(0.001, 1.0), gen.uniform(0.0, 0.003));
    const int n = gen.integer(0, 12);
    const auto g = dimensionless_groups(kd.model(), kd.beam, n);
    CHECK(g.eta == 2.0 * n * g.rn_param);
    CHECK(g.u >= 0.0);
    CHECK(g.rn_param >= 0.0);
  }
}

TEST_CASE("dimensionless groups do not depend on the unit system") {
  Gen gen(17);
  for (int i = 0; i < 100; ++i) {
    const double m = gen.log_uniform(1e-3, 1e3);   // mass unit
    const double l = gen.log_uniform(1e-4, 1e4);   // length unit
    const double t = gen.log_uniform(1e-4, 1e4);   // time unit
    const double hbar = m * l * l / t;             // action in the rescaled units
    const double p = m * l / t, e = m * l * l / (t * t);
    const double theta = gen.uniform(0.0, 1.2);
    const int n = gen.integer(1, 6);

    const GaussianGrating g0(3.0, 40.0, 1.0, 0.02);
    const GaussianGrating g1(3.0 * e, 40.0 * l, 1.0 / l, 0.02);
    const BeamParameters b0(1.0, 2e3, theta * 0.001), b1(m, 2e3 * p, theta * 0.001, hbar);
    const auto d0 = dimensionless_groups(g0, b0, n), d1 = dimensionless_groups(g1, b1, n);
    CHECK(d1.u == doctest::Approx(d0.u).epsilon(1e-12));
    CHECK(d1.beta == doctest::Approx(d0.beta).epsilon(1e-12));
    CHECK(d1.eta == doctest::Approx(d0.eta).epsilon(1e-12));
    CHECK(d1.rn_param == doctest::Approx(d0.rn_param).epsilon(1e-12));

    const EvanescentGrating e0(1e4, 1.0, 0.7, 0.03), e1(1e4 * e, 1.0 / l, 0.7 / l, 0.03);
    const BeamParameters c0(1.0, 100.0, theta), c1(m, 100.0 * p, theta, hbar);
    const auto f0 = dimensionless_groups(e0, c0, n), f1 = dimensionless_groups(e1, c1, n);
    CHECK(f1.u == doctest::Approx(f0.u).epsilon(1e-12));
    CHECK(f1.beta == doctest::Approx(f0.beta).epsilon(1e-12));
    CHECK(f1.eta == doctest::Approx(f0.eta).epsilon(1e-12));
  }
}
