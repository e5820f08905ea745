#include "phasegrating/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "detail/overloaded.hpp"
#include "phasegrating/action.hpp"

namespace phasegrating {

using detail::overloaded;

namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934381868;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

BeamParameters::BeamParameters(double mass, double momentum, double theta, double hbar)
    : mass_(mass), p_(momentum), theta_(theta), hbar_(hbar) {
  require(std::isfinite(mass) && mass > 0.0, "BeamParameters: mass must be > 0");
  require(std::isfinite(momentum) && momentum > 0.0, "BeamParameters: momentum must be > 0");
  require(std::isfinite(hbar) && hbar > 0.0, "BeamParameters: hbar must be > 0");
  require(theta >= 0.0 && theta < std::numbers::pi / 2,
          "BeamParameters: incidence angle must satisfy 0 <= theta < pi/2");
  px_ = p_ * std::sin(theta_);
  pz_ = p_ * std::cos(theta_);
}

BeamParameters BeamParameters::from_normal_momentum(double mass, double normal_momentum,
                                                    double theta, double hbar) {
  require(theta >= 0.0 && theta < std::numbers::pi / 2,
          "BeamParameters: incidence angle must satisfy 0 <= theta < pi/2");
  return {mass, normal_momentum / std::cos(theta), theta, hbar};
}

GaussianGrating::GaussianGrating(double v1, double waist, double k, double epsilon)
    : v1_(v1), w_(waist), k_(k), eps_(epsilon) {
  require(std::isfinite(v1) && v1 >= 0.0, "GaussianGrating: V1 must be finite and >= 0");
  require(std::isfinite(waist) && waist > 0.0, "GaussianGrating: waist must be > 0");
  require(std::isfinite(k) && k > 0.0, "GaussianGrating: k must be > 0");
  require(std::isfinite(epsilon) && epsilon >= 0.0, "GaussianGrating: epsilon must be >= 0");
}

double GaussianGrating::period() const noexcept { return std::numbers::pi / k_; }
double GaussianGrating::reciprocal() const noexcept { return 2.0 * k_; }
double GaussianGrating::recoil_energy(const BeamParameters& beam) const noexcept {
  const double hk = beam.hbar() * k_;
  return 0.5 * hk * hk / beam.mass();
}

EvanescentGrating::EvanescentGrating(double v1, double kappa, double q, double epsilon)
    : v1_(v1), kappa_(kappa), q_(q), eps_(epsilon) {
  require(std::isfinite(v1) && v1 > 0.0, "EvanescentGrating: V1 must be > 0");
  require(std::isfinite(kappa) && kappa > 0.0, "EvanescentGrating: kappa must be > 0");
  require(std::isfinite(q) && q > 0.0, "EvanescentGrating: q must be > 0");
  require(std::isfinite(epsilon) && epsilon >= 0.0, "EvanescentGrating: epsilon must be >= 0");
}

double EvanescentGrating::period() const noexcept { return std::numbers::pi / q_; }
double EvanescentGrating::reciprocal() const noexcept { return 2.0 * q_; }
double EvanescentGrating::recoil_energy(const BeamParameters& beam) const noexcept {
  const double hq = beam.hbar() * q_;
  return 0.5 * hq * hq / beam.mass();
}

double EvanescentGrating::turning_point(const BeamParameters& beam) const {
  if (!reflects(beam)) {
    throw std::invalid_argument("EvanescentGrating: barrier V1 below the normal kinetic energy");
  }
  return -std::log(beam.normal_energy() / v1_) / (2.0 * kappa_);
}

double grating_period(const GratingModel& m) {
  return std::visit([](const auto& g) { return g.period(); }, m);
}
double grating_reciprocal(const GratingModel& m) {
  return std::visit([](const auto& g) { return g.reciprocal(); }, m);
}
double grating_epsilon(const GratingModel& m) {
  return std::visit([](const auto& g) { return g.epsilon(); }, m);
}
double interaction_time(const GratingModel& m, const BeamParameters& beam) {
  return std::visit([&](const auto& g) { return g.interaction_time(beam); }, m);
}
double recoil_energy(const GratingModel& m, const BeamParameters& beam) {
  return std::visit([&](const auto& g) { return g.recoil_energy(beam); }, m);
}

double unperturbed_potential(const GratingModel& m, double /*x*/, double z) {
  return std::visit(overloaded{[](const GaussianGrating&) { return 0.0; },
                               [z](const EvanescentGrating& g) {
                                 return g.v1() * std::exp(-2.0 * g.kappa() * z);
                               }},
                    m);
}

double perturbation_potential(const GratingModel& m, double x, double z) {
  return std::visit(overloaded{[x, z](const GaussianGrating& g) {
                                 const double s = z / g.waist();
                                 return g.v1() * kInvSqrt2Pi * std::exp(-2.0 * s * s) *
                                        (1.0 + std::cos(2.0 * g.k() * x));
                               },
                               [x, z](const EvanescentGrating& g) {
                                 return g.v1() * std::exp(-2.0 * g.kappa() * z) *
                                        std::cos(2.0 * g.q() * x);
                               }},
                    m);
}

double potential_total(const GratingModel& m, double x, double z) {
  return unperturbed_potential(m, x, z) + grating_epsilon(m) * perturbation_potential(m, x, z);
}

Vec2 unperturbed_gradient(const GratingModel& m, double /*x*/, double z) {
  return std::visit(overloaded{[](const GaussianGrating&) { return Vec2{}; },
                               [z](const EvanescentGrating& g) {
                                 const double v = g.v1() * std::exp(-2.0 * g.kappa() * z);
                                 return Vec2{0.0, -2.0 * g.kappa() * v};
                               }},
                    m);
}

Vec2 perturbation_gradient(const GratingModel& m, double x, double z) {
  return std::visit(
      overloaded{[x, z](const GaussianGrating& g) {
                   const double s = z / g.waist();
                   const double env = g.v1() * kInvSqrt2Pi * std::exp(-2.0 * s * s);
                   const double arg = 2.0 * g.k() * x;
                   return Vec2{-2.0 * g.k() * env * std::sin(arg),
                               -4.0 * z / (g.waist() * g.waist()) * env * (1.0 + std::cos(arg))};
                 },
                 [x, z](const EvanescentGrating& g) {
                   const double env = g.v1() * std::exp(-2.0 * g.kappa() * z);
                   const double arg = 2.0 * g.q() * x;
                   return Vec2{-2.0 * g.q() * env * std::sin(arg),
                               -2.0 * g.kappa() * env * std::cos(arg)};
                 }},
      m);
}

Hessian2 unperturbed_hessian(const GratingModel& m, double /*x*/, double z) {
  return std::visit(overloaded{[](const GaussianGrating&) { return Hessian2{}; },
                               [z](const EvanescentGrating& g) {
                                 const double v = g.v1() * std::exp(-2.0 * g.kappa() * z);
                                 return Hessian2{0.0, 0.0, 4.0 * g.kappa() * g.kappa() * v};
                               }},
                    m);
}

DimensionlessGroups dimensionless_groups(const GratingModel& m, const BeamParameters& beam,
                                         int n_max) {
  if (n_max < 0) throw std::invalid_argument("dimensionless_groups: n_max must be >= 0");
  DimensionlessGroups out;
  out.beta = incidence_factor(m, beam).beta;
  out.recoil_energy = recoil_energy(m, beam);
  const double tau = interaction_time(m, beam);
  const double hbar = beam.hbar();
  out.u = std::visit(overloaded{[&](const GaussianGrating& g) {
                                  return out.beta * g.epsilon() * g.v1() * tau / (2.0 * hbar);
                                },
                                [&](const EvanescentGrating& g) {
                                  return out.beta * g.epsilon() * beam.pz() / (hbar * g.kappa());
                                }},
                     m);
  const double n = static_cast<double>(n_max);
  out.rn_param = 2.0 * n * out.recoil_energy * tau / hbar;
  out.eta = 2.0 * n * out.rn_param;
  return out;
}

}  // namespace phasegrating
