#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "phasegrating/model.hpp"
#include "phasegrating/numerics/ode.hpp"
#include "phasegrating/spectrum.hpp"

namespace phasegrating {

struct State {
  double t = 0.0;
  double x = 0.0;
  double z = 0.0;
  double px = 0.0;
  double pz = 0.0;
};

struct TimeWindow {
  double t_begin = 0.0;
  double t_end = 0.0;
};

// Time span outside which the grating is treated as absent: |t| <= 6 tau for the standing
// wave (|z| <= 6w), |t| <= 20 tau for the mirror.
TimeWindow interaction_window(const GratingModel& model, const BeamParameters& beam);

// Time-sampled classical path. at() interpolates with the integrator's dense output, or
// evaluates the closed form for analytic paths.
class Trajectory {
 public:
  using Evaluator = std::function<State(double)>;

  Trajectory(std::vector<State> samples, Evaluator evaluator);

  State at(double t) const;
  const std::vector<State>& samples() const noexcept { return samples_; }
  const State& front() const { return samples_.front(); }
  const State& back() const { return samples_.back(); }
  double t_begin() const { return samples_.front().t; }
  double t_end() const { return samples_.back().t; }

 private:
  std::vector<State> samples_;
  Evaluator evaluator_;
};

// Straight line through (x_i, 0) at t = 0.
State unperturbed_kd(const BeamParameters& beam, double x_i, double t);
// Bounce off the plain mirror with the turning point reached at t = 0; the atom comes in
// from z = +inf, so pz(t) = pz_i tanh(t/tau). Throws std::invalid_argument if not reflected.
State unperturbed_ew(const BeamParameters& beam, const EvanescentGrating& grating, double x_i,
                     double t);
State unperturbed_state(const GratingModel& model, const BeamParameters& beam, double x_i,
                        double t);
Trajectory unperturbed_trajectory(const GratingModel& model, const BeamParameters& beam, double x_i,
                                  const TimeWindow& window, std::size_t samples = 257);

// Full equations of motion in V0 + eps V from `initial` (at initial.t) to t_end.
Trajectory integrate_perturbed(const GratingModel& model, double mass, const State& initial,
                               double t_end, double tol = 1e-10);

struct DeviationSample {
  double t = 0.0;
  double x1 = 0.0, z1 = 0.0;
  double vx1 = 0.0, vz1 = 0.0;
};

// First-order path correction r1 (the coefficient of eps) along an unperturbed path,
// together with the second order action it generates.
class DeviationTrajectory {
 public:
  DeviationTrajectory(std::shared_ptr<const numerics::DenseSolution> solution, double mass);

  DeviationSample at(double t) const;
  std::vector<DeviationSample> samples() const;
  DeviationSample final_sample() const;
  double second_order_action() const;

 private:
  DeviationSample from_state(double t, std::span<const double> y) const;

  std::shared_ptr<const numerics::DenseSolution> solution_;
  double mass_;
};

// M r1'' = -grad V(r0) - H0(r0) r1, with r1 = r1' = 0 at base.t_begin().
DeviationTrajectory linearized_deviation(const GratingModel& model, const BeamParameters& beam,
                                         const Trajectory& base, double tol = 1e-10);

// Ray state once it has reached the exit plane z = z_exit, continued in a straight line
// beyond the interaction window. phase is the WKB phase relative to the incident carrier
// exp(i(px x + pz z)/hbar) on that plane, with the x_i-independent bounce phase removed.
struct ExitPoint {
  double x_initial = 0.0;
  double x_exit = 0.0;
  double z_exit = 0.0;
  double px_exit = 0.0;
  double pz_exit = 0.0;
  double phase = 0.0;
};

struct ShotRay {
  ExitPoint exit;
  Trajectory path;
  int iterations = 0;
};

struct ShootingOptions {
  double tol = 1e-10;
  int table_size = 64;
  int max_iterations = 80;
};

// Solves the mixed boundary problem p(t_i) = p_i, r(t_f) on the plane z = z_exit by secant
// iteration on the initial transverse offset. Integrates the deviation from the analytic
// unperturbed path so that large absolute momenta do not swamp the phase.
class ShootingSolver {
 public:
  // Throws CausticError if the offset -> exit map is not monotone over one period.
  ShootingSolver(const GratingModel& model, const BeamParameters& beam, double z_exit,
                 const ShootingOptions& options = {});

  const GratingModel& model() const noexcept { return model_; }
  const BeamParameters& beam() const noexcept { return beam_; }
  double z_exit() const noexcept { return z_exit_; }

  // Forward propagation of the ray labelled by its unperturbed position x_i at t = 0.
  ExitPoint propagate(double x_i) const;
  ExitPoint solve(double x_f, int* iterations = nullptr) const;
  ShotRay shoot(double x_f) const;
  ExitWavefunction exit_wavefunction(std::size_t samples) const;

 private:
  std::shared_ptr<const numerics::DenseSolution> integrate_deviation(double x_i, bool dense) const;
  ExitPoint exit_from(double x_i, std::span<const double> y_end) const;

  GratingModel model_;
  BeamParameters beam_;
  double z_exit_;
  ShootingOptions options_;
  TimeWindow window_;
  std::vector<double> atol_;
  std::vector<double> table_xi_;
  std::vector<double> table_xf_;
};

ShotRay shoot_boundary(const GratingModel& model, const BeamParameters& beam, double x_f,
                       double z_f, const ShootingOptions& options = {});

// Height of the unperturbed path at the end of the interaction window.
double default_exit_plane(const GratingModel& model, const BeamParameters& beam);

// Height at t = 0 of the straight outgoing asymptote of the unperturbed path: 0 for the
// standing wave, z_t - ln(2)/kappa for the mirror. On this (virtual) plane the exit rays
// land where their label x_i says, so sampled phases line up with the action.
double reference_plane(const GratingModel& model, const BeamParameters& beam);

}  // namespace phasegrating
