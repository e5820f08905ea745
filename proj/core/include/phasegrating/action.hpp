#pragma once

#include "phasegrating/model.hpp"

namespace phasegrating {

enum class GratingKind { gaussian, evanescent };

GratingKind grating_kind(const GratingModel& model) noexcept;

struct IncidenceFactor {
  double beta = 1.0;
  GratingKind kind = GratingKind::gaussian;
};

// exp(-(k w tan theta)^2 / 2)
IncidenceFactor beta_kd(const BeamParameters& beam, const GaussianGrating& grating);
// s/sinh(s) with s = pi tan(theta) q/kappa
IncidenceFactor beta_ew(const BeamParameters& beam, const EvanescentGrating& grating);
IncidenceFactor incidence_factor(const GratingModel& model, const BeamParameters& beam);

// First and second order actions for one unperturbed path labelled by x_i, the transverse
// position at t = 0 (crossing of the beam axis, or the turning point of the mirror).
// Both exclude epsilon: the phase is (eps s1 + eps^2 s2)/hbar.
struct ActionExpansion {
  double s1 = 0.0;
  double s2 = 0.0;
  double s1_constant_part = 0.0;
  double s1_modulated_amplitude = 0.0;  // s1 = constant + amplitude * cos(G x_i)
};

struct ActionTolerances {
  double quadrature_abs = 1e-12;  // in units of the peak potential times tau
  double quadrature_rel = 1e-13;
  double ode = 1e-11;
};

// -int V(r0(t)) dt over the truncated interaction window, adaptive Gauss-Kronrod.
double s1_quadrature(const GratingModel& model, const BeamParameters& beam, double x_i,
                     const ActionTolerances& tol = {});
// Closed forms: -V1 tau/2 (1 + beta cos 2k x_i) and -beta (p_z/kappa) cos 2q x_i.
double s1_closed_form(const GratingModel& model, const BeamParameters& beam, double x_i);
// -1/2 int r1 . grad V(r0) dt with the deviation started from rest at the window entry.
double s2_quadrature(const GratingModel& model, const BeamParameters& beam, double x_i,
                     const ActionTolerances& tol = {});

ActionExpansion action_expansion(const GratingModel& model, const BeamParameters& beam, double x_i,
                                 const ActionTolerances& tol = {});

}  // namespace phasegrating
