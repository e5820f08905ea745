#pragma once

#include <variant>

namespace phasegrating {

// Incident atom. Momentum components are cached: px = p sin(theta), pz = p cos(theta).
// pz is the magnitude of the normal momentum; for the mirror the atom arrives moving
// towards -z and leaves towards +z.
class BeamParameters {
 public:
  BeamParameters(double mass, double momentum, double theta, double hbar = 1.0);
  static BeamParameters from_normal_momentum(double mass, double normal_momentum, double theta,
                                             double hbar = 1.0);

  double mass() const noexcept { return mass_; }
  double momentum() const noexcept { return p_; }
  double theta() const noexcept { return theta_; }
  double hbar() const noexcept { return hbar_; }
  double px() const noexcept { return px_; }
  double pz() const noexcept { return pz_; }
  double vx() const noexcept { return px_ / mass_; }
  double vz() const noexcept { return pz_ / mass_; }
  double energy() const noexcept { return 0.5 * p_ * p_ / mass_; }
  double normal_energy() const noexcept { return 0.5 * pz_ * pz_ / mass_; }

  BeamParameters with_theta(double theta) const { return {mass_, p_, theta, hbar_}; }

 private:
  double mass_, p_, theta_, hbar_, px_, pz_;
};

// Gaussian standing wave crossing the beam at normal incidence on its own axis.
// Light potential: eps * V1/sqrt(2 pi) * exp(-2 z^2/w^2) * (1 + cos 2kx).
class GaussianGrating {
 public:
  GaussianGrating(double v1, double waist, double k, double epsilon);

  double v1() const noexcept { return v1_; }
  double waist() const noexcept { return w_; }
  double k() const noexcept { return k_; }
  double epsilon() const noexcept { return eps_; }

  double period() const noexcept;      // pi/k
  double reciprocal() const noexcept;  // 2k
  double interaction_time(const BeamParameters& beam) const noexcept { return beam.mass() * w_ / beam.pz(); }
  double recoil_energy(const BeamParameters& beam) const noexcept;

  GaussianGrating with_epsilon(double epsilon) const { return {v1_, w_, k_, epsilon}; }
  GaussianGrating with_v1(double v1) const { return {v1, w_, k_, eps_}; }

 private:
  double v1_, w_, k_, eps_;
};

// Evanescent-wave mirror V1 exp(-2 kappa z) with a weak modulation eps V1 exp(-2 kappa z) cos 2qx.
class EvanescentGrating {
 public:
  EvanescentGrating(double v1, double kappa, double q, double epsilon);

  double v1() const noexcept { return v1_; }
  double kappa() const noexcept { return kappa_; }
  double q() const noexcept { return q_; }
  double epsilon() const noexcept { return eps_; }

  double period() const noexcept;      // pi/q
  double reciprocal() const noexcept;  // 2q
  double interaction_time(const BeamParameters& beam) const noexcept { return beam.mass() / (kappa_ * beam.pz()); }
  double recoil_energy(const BeamParameters& beam) const noexcept;

  // Barrier higher than the normal kinetic energy.
  bool reflects(const BeamParameters& beam) const noexcept { return v1_ > beam.normal_energy(); }
  // Classical turning point of the unmodulated mirror; throws std::invalid_argument if the
  // atom is not reflected.
  double turning_point(const BeamParameters& beam) const;

  EvanescentGrating with_epsilon(double epsilon) const { return {v1_, kappa_, q_, epsilon}; }

 private:
  double v1_, kappa_, q_, eps_;
};

using GratingModel = std::variant<GaussianGrating, EvanescentGrating>;

struct Vec2 {
  double x = 0.0;
  double z = 0.0;
};

// Symmetric 2x2 matrix of second derivatives.
struct Hessian2 {
  double xx = 0.0, xz = 0.0, zz = 0.0;
};

double grating_period(const GratingModel& model);
double grating_reciprocal(const GratingModel& model);
double grating_epsilon(const GratingModel& model);
double interaction_time(const GratingModel& model, const BeamParameters& beam);
double recoil_energy(const GratingModel& model, const BeamParameters& beam);

// V0: zero for the standing wave (free flight), V1 exp(-2 kappa z) for the mirror.
double unperturbed_potential(const GratingModel& model, double x, double z);
// V: the shape multiplied by epsilon (epsilon itself excluded).
double perturbation_potential(const GratingModel& model, double x, double z);
// V0 + eps V.
double potential_total(const GratingModel& model, double x, double z);

Vec2 unperturbed_gradient(const GratingModel& model, double x, double z);
Vec2 perturbation_gradient(const GratingModel& model, double x, double z);
Hessian2 unperturbed_hessian(const GratingModel& model, double x, double z);

struct DimensionlessGroups {
  double u = 0.0;     // phase-modulation depth, incidence factor included
  double beta = 1.0;  // incidence factor
  double eta = 0.0;   // 4 n_max^2 E_R tau / hbar
  double rn_param = 0.0;  // 2 n_max E_R tau / hbar
  double recoil_energy = 0.0;
};

DimensionlessGroups dimensionless_groups(const GratingModel& model, const BeamParameters& beam,
                                         int n_max);

}  // namespace phasegrating
