#include "phasegrating/action.hpp"

#include <cmath>
#include <numbers>

#include "detail/overloaded.hpp"
#include "phasegrating/numerics/quadrature.hpp"
#include "phasegrating/trajectories.hpp"

namespace phasegrating {

using detail::overloaded;

GratingKind grating_kind(const GratingModel& model) noexcept {
  return std::holds_alternative<GaussianGrating>(model) ? GratingKind::gaussian
                                                        : GratingKind::evanescent;
}

IncidenceFactor beta_kd(const BeamParameters& beam, const GaussianGrating& grating) {
  const double s = grating.k() * grating.waist() * std::tan(beam.theta());
  return {std::exp(-0.5 * s * s), GratingKind::gaussian};
}

IncidenceFactor beta_ew(const BeamParameters& beam, const EvanescentGrating& grating) {
  const double s = std::numbers::pi * std::tan(beam.theta()) * grating.q() / grating.kappa();
  double beta;
  if (std::abs(s) < 1e-4) {
    const double s2 = s * s;
    beta = 1.0 - s2 / 6.0 + 7.0 * s2 * s2 / 360.0;
  } else if (s > 30.0) {
    beta = 2.0 * s * std::exp(-s) / (1.0 - std::exp(-2.0 * s));
  } else {
    beta = s / std::sinh(s);
  }
  return {beta, GratingKind::evanescent};
}

IncidenceFactor incidence_factor(const GratingModel& model, const BeamParameters& beam) {
  return std::visit(overloaded{[&](const GaussianGrating& g) { return beta_kd(beam, g); },
                               [&](const EvanescentGrating& g) { return beta_ew(beam, g); }},
                    model);
}

double s1_quadrature(const GratingModel& model, const BeamParameters& beam, double x_i,
                     const ActionTolerances& tol) {
  const TimeWindow w = interaction_window(model, beam);
  const double tau = interaction_time(model, beam);
  // Peak potential met along the path times tau: V1 tau for the standing wave, and the
  // normal kinetic energy times tau for the mirror (the atom never climbs higher).
  const double scale = std::visit(
      overloaded{[&](const GaussianGrating& g) { return g.v1() * tau; },
                 [&](const EvanescentGrating&) { return beam.normal_energy() * tau; }},
      model);
  if (scale == 0.0) return 0.0;
  auto integrand = [&](double t) {
    const State r0 = unperturbed_state(model, beam, x_i, t);
    return -perturbation_potential(model, r0.x, r0.z);
  };
  numerics::QuadratureOptions opt;
  opt.abs_tol = tol.quadrature_abs * std::abs(scale);
  opt.rel_tol = tol.quadrature_rel;
  // Split at the path's symmetry point so both halves are smooth and monotone in envelope.
  const double left = numerics::integrate_adaptive(integrand, w.t_begin, 0.0, opt).value;
  const double right = numerics::integrate_adaptive(integrand, 0.0, w.t_end, opt).value;
  return left + right;
}

double s1_closed_form(const GratingModel& model, const BeamParameters& beam, double x_i) {
  const double beta = incidence_factor(model, beam).beta;
  return std::visit(
      overloaded{[&](const GaussianGrating& g) {
                   const double tau = g.interaction_time(beam);
                   return -0.5 * g.v1() * tau * (1.0 + beta * std::cos(2.0 * g.k() * x_i));
                 },
                 [&](const EvanescentGrating& g) {
                   return -beta * beam.pz() / g.kappa() * std::cos(2.0 * g.q() * x_i);
                 }},
      model);
}

double s2_quadrature(const GratingModel& model, const BeamParameters& beam, double x_i,
                     const ActionTolerances& tol) {
  const Trajectory base = unperturbed_trajectory(model, beam, x_i, interaction_window(model, beam), 2);
  return linearized_deviation(model, beam, base, tol.ode).second_order_action();
}

ActionExpansion action_expansion(const GratingModel& model, const BeamParameters& beam, double x_i,
                                 const ActionTolerances& tol) {
  // Both gratings carry a single cos(G x_i) harmonic, so two points half a period apart
  // separate the constant and modulated parts exactly.
  const double a = grating_period(model);
  const double s_top = s1_quadrature(model, beam, 0.0, tol);
  const double s_mid = s1_quadrature(model, beam, 0.5 * a, tol);
  ActionExpansion out;
  out.s1 = s1_quadrature(model, beam, x_i, tol);
  out.s2 = s2_quadrature(model, beam, x_i, tol);
  out.s1_constant_part = 0.5 * (s_top + s_mid);
  out.s1_modulated_amplitude = 0.5 * (s_top - s_mid);
  return out;
}

}  // namespace phasegrating
