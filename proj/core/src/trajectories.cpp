#include "phasegrating/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "detail/overloaded.hpp"
#include "phasegrating/errors.hpp"

namespace phasegrating {

using detail::overloaded;
using numerics::DenseSolution;
using numerics::OdeOptions;

namespace {

// log(cosh s) without overflow; even in s by construction.
double log_cosh(double s) {
  const double a = std::abs(s);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double sech2(double s) {
  const double a = std::abs(s);
  const double e = std::exp(-2.0 * a);
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

// Typical magnitude of the potential met along the unperturbed path.
double potential_scale(const GratingModel& model, const BeamParameters& beam) {
  return std::visit(overloaded{[](const GaussianGrating& g) { return g.v1(); },
                               [&](const EvanescentGrating&) { return beam.normal_energy(); }},
                    model);
}

double inverse_length_scale(const GratingModel& model) {
  return std::visit(overloaded{[](const GaussianGrating& g) { return std::max(2.0 * g.k(), 2.0 / g.waist()); },
                               [](const EvanescentGrating& g) { return std::max(2.0 * g.q(), 2.0 * g.kappa()); }},
                    model);
}

}  // namespace

TimeWindow interaction_window(const GratingModel& model, const BeamParameters& beam) {
  const double tau = interaction_time(model, beam);
  const double half = std::holds_alternative<GaussianGrating>(model) ? 6.0 * tau : 20.0 * tau;
  return {-half, half};
}

Trajectory::Trajectory(std::vector<State> samples, Evaluator evaluator)
    : samples_(std::move(samples)), evaluator_(std::move(evaluator)) {
  if (samples_.empty()) throw std::invalid_argument("Trajectory: no samples");
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (!(samples_[i].t > samples_[i - 1].t)) {
      throw std::invalid_argument("Trajectory: sample times must be strictly increasing");
    }
  }
}

State Trajectory::at(double t) const {
  const double slack = 1e-12 * std::max({1.0, std::abs(t_begin()), std::abs(t_end())});
  if (t < t_begin() - slack || t > t_end() + slack) {
    throw std::out_of_range("Trajectory::at: time outside the sampled span");
  }
  return evaluator_(t);
}

State unperturbed_kd(const BeamParameters& beam, double x_i, double t) {
  return {t, x_i + beam.vx() * t, beam.vz() * t, beam.px(), beam.pz()};
}

State unperturbed_ew(const BeamParameters& beam, const EvanescentGrating& grating, double x_i,
                     double t) {
  const double z_t = grating.turning_point(beam);
  const double tau = grating.interaction_time(beam);
  const double s = t / tau;
  return {t, x_i + beam.vx() * t, z_t + log_cosh(s) / grating.kappa(), beam.px(),
          beam.pz() * std::tanh(s)};
}

State unperturbed_state(const GratingModel& model, const BeamParameters& beam, double x_i,
                        double t) {
  return std::visit(
      overloaded{[&](const GaussianGrating&) { return unperturbed_kd(beam, x_i, t); },
                 [&](const EvanescentGrating& g) { return unperturbed_ew(beam, g, x_i, t); }},
      model);
}

Trajectory unperturbed_trajectory(const GratingModel& model, const BeamParameters& beam, double x_i,
                                  const TimeWindow& window, std::size_t samples) {
  if (samples < 2) throw std::invalid_argument("unperturbed_trajectory: need >= 2 samples");
  if (std::holds_alternative<EvanescentGrating>(model)) {
    std::get<EvanescentGrating>(model).turning_point(beam);  // validates reflection
  }
  std::vector<State> out;
  out.reserve(samples);
  const double dt = (window.t_end - window.t_begin) / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = i + 1 == samples ? window.t_end : window.t_begin + dt * static_cast<double>(i);
    out.push_back(unperturbed_state(model, beam, x_i, t));
  }
  return Trajectory(std::move(out),
                    [model, beam, x_i](double t) { return unperturbed_state(model, beam, x_i, t); });
}

Trajectory integrate_perturbed(const GratingModel& model, double mass, const State& initial,
                               double t_end, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("integrate_perturbed: tol must be > 0");
  if (!(mass > 0.0)) throw std::invalid_argument("integrate_perturbed: mass must be > 0");
  const double eps = grating_epsilon(model);
  auto rhs = [&model, mass, eps](double, std::span<const double> y, std::span<double> dy) {
    const Vec2 g0 = unperturbed_gradient(model, y[0], y[1]);
    const Vec2 g1 = perturbation_gradient(model, y[0], y[1]);
    dy[0] = y[2] / mass;
    dy[1] = y[3] / mass;
    dy[2] = -(g0.x + eps * g1.x);
    dy[3] = -(g0.z + eps * g1.z);
  };
  const double p_scale = std::max(std::hypot(initial.px, initial.pz), 1e-300);
  const double l_scale = 1.0 / inverse_length_scale(model);
  // tol is a target for the accumulated error; local steps run ten times tighter.
  const double local = 0.1 * tol;
  OdeOptions opt;
  opt.rtol = local;
  opt.atol = {local * l_scale, local * l_scale, local * p_scale, local * p_scale};
  const std::vector<double> y0 = {initial.x, initial.z, initial.px, initial.pz};
  auto sol = std::make_shared<const DenseSolution>(
      numerics::integrate_dopri5(rhs, initial.t, t_end, y0, opt));

  auto to_state = [](double t, std::span<const double> y) { return State{t, y[0], y[1], y[2], y[3]}; };
  std::vector<State> samples;
  samples.reserve(sol->steps() + 1);
  for (std::size_t i = 0; i <= sol->steps(); ++i) samples.push_back(to_state(sol->node_time(i), sol->node_state(i)));
  if (t_end < initial.t) std::reverse(samples.begin(), samples.end());
  return Trajectory(std::move(samples), [sol, to_state](double t) {
    std::vector<double> y = sol->evaluate(t);
    return to_state(t, y);
  });
}

DeviationTrajectory::DeviationTrajectory(std::shared_ptr<const DenseSolution> solution, double mass)
    : solution_(std::move(solution)), mass_(mass) {}

DeviationSample DeviationTrajectory::from_state(double t, std::span<const double> y) const {
  return {t, y[0], y[1], y[2] / mass_, y[3] / mass_};
}

DeviationSample DeviationTrajectory::at(double t) const {
  std::vector<double> y = solution_->evaluate(t);
  return from_state(t, y);
}

std::vector<DeviationSample> DeviationTrajectory::samples() const {
  std::vector<DeviationSample> out;
  out.reserve(solution_->steps() + 1);
  for (std::size_t i = 0; i <= solution_->steps(); ++i) {
    out.push_back(from_state(solution_->node_time(i), solution_->node_state(i)));
  }
  return out;
}

DeviationSample DeviationTrajectory::final_sample() const {
  return from_state(solution_->t_end(), solution_->final_state());
}

double DeviationTrajectory::second_order_action() const { return solution_->final_state()[4]; }

DeviationTrajectory linearized_deviation(const GratingModel& model, const BeamParameters& beam,
                                         const Trajectory& base, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("linearized_deviation: tol must be > 0");
  const double mass = beam.mass();
  // State: x1, z1, p1x, p1z, S2.
  auto rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    const State r0 = base.at(t);
    const Vec2 g = perturbation_gradient(model, r0.x, r0.z);
    const Hessian2 h = unperturbed_hessian(model, r0.x, r0.z);
    dy[0] = y[2] / mass;
    dy[1] = y[3] / mass;
    dy[2] = -g.x - (h.xx * y[0] + h.xz * y[1]);
    dy[3] = -g.z - (h.xz * y[0] + h.zz * y[1]);
    dy[4] = -0.5 * (y[0] * g.x + y[1] * g.z);
  };
  const double tau = interaction_time(model, beam);
  double p1 = potential_scale(model, beam) * inverse_length_scale(model) * tau;
  if (!(p1 > 1e-200 * beam.momentum())) p1 = beam.momentum();  // no perturbing force at all
  const double r1 = p1 * tau / mass;
  OdeOptions opt;
  opt.rtol = tol;
  opt.atol = {tol * r1, tol * r1, tol * p1, tol * p1, tol * p1 * r1};
  const std::vector<double> y0(5, 0.0);
  auto sol = std::make_shared<const DenseSolution>(
      numerics::integrate_dopri5(rhs, base.t_begin(), base.t_end(), y0, opt));
  return DeviationTrajectory(std::move(sol), mass);
}

// ---------------------------------------------------------------------------------------
// Shooting

ShootingSolver::ShootingSolver(const GratingModel& model, const BeamParameters& beam, double z_exit,
                               const ShootingOptions& options)
    : model_(model), beam_(beam), z_exit_(z_exit), options_(options),
      window_(interaction_window(model, beam)) {
  if (!(options_.tol > 0.0)) throw std::invalid_argument("ShootingSolver: tol must be > 0");
  if (options_.table_size < 8) throw std::invalid_argument("ShootingSolver: table_size must be >= 8");
  if (std::holds_alternative<EvanescentGrating>(model_)) {
    std::get<EvanescentGrating>(model_).turning_point(beam_);
  }

  // Absolute tolerances sized by how each component feeds the exit phase: a position error
  // dz costs p dz/hbar, a momentum error dp costs L dp/hbar over the path length L.
  const double hbar = beam_.hbar();
  const double path_length = beam_.momentum() / beam_.mass() * (window_.t_end - window_.t_begin);
  const double tol = options_.tol;
  atol_ = {tol * std::min(hbar / beam_.momentum(), grating_period(model_)),
           tol * hbar / beam_.momentum(), tol * hbar / path_length, tol * hbar / path_length,
           tol * hbar};

  const double a = grating_period(model_);
  const int n = options_.table_size;
  table_xi_.resize(static_cast<std::size_t>(n) + 1);
  table_xf_.resize(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j < n; ++j) {
    const double xi = a * j / n;
    table_xi_[static_cast<std::size_t>(j)] = xi;
    table_xf_[static_cast<std::size_t>(j)] = propagate(xi).x_exit;
  }
  table_xi_.back() = a;
  table_xf_.back() = table_xf_.front() + a;
  for (int j = 0; j < n; ++j) {
    if (!(table_xf_[static_cast<std::size_t>(j) + 1] > table_xf_[static_cast<std::size_t>(j)])) {
      std::ostringstream msg;
      msg << "ShootingSolver: rays cross before the exit plane (fold near x_i=" << table_xi_[static_cast<std::size_t>(j)] << ")";
      throw CausticError(msg.str(), table_xi_[static_cast<std::size_t>(j)]);
    }
  }
}

std::shared_ptr<const DenseSolution> ShootingSolver::integrate_deviation(double x_i, bool dense) const {
  const double mass = beam_.mass();
  const double eps = grating_epsilon(model_);
  const GratingModel& model = model_;
  const BeamParameters& beam = beam_;

  // y = (dx, dz, dpx, dpz, dW) relative to the analytic path through x_i. dW accumulates
  // the change of the reduced action int p.dr = int |p|^2/M dt.
  numerics::OdeRhs rhs;
  if (const auto* g = std::get_if<GaussianGrating>(&model)) {
    (void)g;
    rhs = [&model, &beam, x_i, mass, eps](double t, std::span<const double> y, std::span<double> dy) {
      const State r0 = unperturbed_kd(beam, x_i, t);
      const Vec2 f = perturbation_gradient(model, r0.x + y[0], r0.z + y[1]);
      dy[0] = y[2] / mass;
      dy[1] = y[3] / mass;
      dy[2] = -eps * f.x;
      dy[3] = -eps * f.z;
      dy[4] = (2.0 * (r0.px * y[2] + r0.pz * y[3]) + y[2] * y[2] + y[3] * y[3]) / mass;
    };
  } else {
    const auto& gr = std::get<EvanescentGrating>(model);
    const double kappa = gr.kappa(), q = gr.q();
    const double tau = gr.interaction_time(beam);
    rhs = [&gr, &beam, x_i, mass, eps, kappa, q, tau](double t, std::span<const double> y,
                                                       std::span<double> dy) {
      const State r0 = unperturbed_ew(beam, gr, x_i, t);
      // V1 exp(-2 kappa z0) from the bounce itself, free of the large-z exponential.
      const double v0 = beam.normal_energy() * sech2(t / tau);
      const double decay = std::exp(-2.0 * kappa * y[1]);
      const double arg = 2.0 * q * (r0.x + y[0]);
      const double vmod = eps * v0 * decay;
      dy[0] = y[2] / mass;
      dy[1] = y[3] / mass;
      dy[2] = 2.0 * q * vmod * std::sin(arg);
      dy[3] = 2.0 * kappa * v0 * std::expm1(-2.0 * kappa * y[1]) + 2.0 * kappa * vmod * std::cos(arg);
      dy[4] = (2.0 * (r0.px * y[2] + r0.pz * y[3]) + y[2] * y[2] + y[3] * y[3]) / mass;
    };
  }
  OdeOptions opt;
  opt.rtol = options_.tol;
  opt.atol = atol_;
  opt.dense = dense;
  const std::vector<double> y0(5, 0.0);
  return std::make_shared<const DenseSolution>(
      numerics::integrate_dopri5(rhs, window_.t_begin, window_.t_end, y0, opt));
}

ExitPoint ShootingSolver::exit_from(double x_i, std::span<const double> y) const {
  const State r0 = unperturbed_state(model_, beam_, x_i, window_.t_end);
  const double px = r0.px + y[2];
  const double pz = r0.pz + y[3];
  if (!(pz > 0.0)) throw NumericalError("ShootingSolver: ray does not leave towards +z");
  const double dz0 = z_exit_ - r0.z;  // unperturbed straight continuation
  const double dz = dz0 - y[1];
  const double p0sq = r0.px * r0.px + r0.pz * r0.pz;
  // |p|^2/pz - |p0|^2/p0z written without the cancellation between the two terms.
  const double d = 2.0 * (r0.px * y[2] + r0.pz * y[3]) + y[2] * y[2] + y[3] * y[3];
  const double slope_gap = -p0sq * y[3] / (pz * r0.pz) + d / pz;
  const double dw_total = y[4] + slope_gap * dz0 - (p0sq + d) / pz * y[1];
  const double x0f = r0.x + r0.px / r0.pz * dz0;
  const double xf = r0.x + y[0] + px / pz * dz;
  ExitPoint out;
  out.x_initial = x_i;
  out.x_exit = xf;
  out.z_exit = z_exit_;
  out.px_exit = px;
  out.pz_exit = pz;
  out.phase = (beam_.px() * (x0f - xf) + dw_total) / beam_.hbar();
  return out;
}

ExitPoint ShootingSolver::propagate(double x_i) const {
  auto sol = integrate_deviation(x_i, false);
  return exit_from(x_i, sol->final_state());
}

ExitPoint ShootingSolver::solve(double x_f, int* iterations) const {
  const double a = grating_period(model_);
  const double target_tol = options_.tol * a;
  // Reduce into the tabulated period.
  const double shift = std::floor((x_f - table_xf_.front()) / a) * a;
  const double xr = x_f - shift;
  auto it = std::upper_bound(table_xf_.begin(), table_xf_.end(), xr);
  std::size_t j = it == table_xf_.begin() ? 0 : static_cast<std::size_t>(it - table_xf_.begin()) - 1;
  j = std::min(j, table_xf_.size() - 2);

  double lo = table_xi_[j], hi = table_xi_[j + 1];
  double flo = table_xf_[j] - xr, fhi = table_xf_[j + 1] - xr;
  int count = 0;
  auto finish = [&](const ExitPoint& p) {
    if (iterations) *iterations = count;
    ExitPoint out = p;
    out.x_initial += shift;
    out.x_exit += shift;
    return out;
  };
  if (std::abs(flo) <= target_tol) return finish(propagate(lo));
  if (std::abs(fhi) <= target_tol) return finish(propagate(hi));
  if (flo > 0.0 || fhi < 0.0) {
    throw CausticError("ShootingSolver: exit position not bracketed (fold in the ray map)", lo);
  }
  // Illinois-modified regula falsi: secant steps kept inside the bracket.
  int side = 0;
  while (count < options_.max_iterations) {
    ++count;
    double xi = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(xi > lo && xi < hi)) xi = 0.5 * (lo + hi);
    ExitPoint p = propagate(xi);
    const double f = p.x_exit - xr;
    if (std::abs(f) <= target_tol) return finish(p);
    if (f < 0.0) {
      lo = xi;
      flo = f;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = xi;
      fhi = f;
      if (side == +1) flo *= 0.5;
      side = +1;
    }
    if (hi - lo <= 1e-15 * a) {
      if (iterations) *iterations = count;
      return finish(p);
    }
  }
  std::ostringstream msg;
  msg << "ShootingSolver: no convergence for x_f=" << x_f;
  throw NumericalError(msg.str());
}

ShotRay ShootingSolver::shoot(double x_f) const {
  int iterations = 0;
  const ExitPoint exit = solve(x_f, &iterations);
  const double x_i = exit.x_initial;
  auto sol = integrate_deviation(x_i, true);
  std::vector<State> samples;
  samples.reserve(sol->steps() + 1);
  auto combine = [this, x_i](double t, std::span<const double> y) {
    State s = unperturbed_state(model_, beam_, x_i, t);
    return State{t, s.x + y[0], s.z + y[1], s.px + y[2], s.pz + y[3]};
  };
  for (std::size_t i = 0; i <= sol->steps(); ++i) samples.push_back(combine(sol->node_time(i), sol->node_state(i)));
  Trajectory path(std::move(samples), [sol, combine](double t) {
    std::vector<double> y = sol->evaluate(t);
    return combine(t, y);
  });
  return ShotRay{exit, std::move(path), iterations};
}

ExitWavefunction ShootingSolver::exit_wavefunction(std::size_t samples) const {
  const double a = grating_period(model_);
  std::vector<complex> env(samples);
  std::vector<double> pz(samples);
  for (std::size_t j = 0; j < samples; ++j) {
    const double xf = a * static_cast<double>(j) / static_cast<double>(samples);
    const ExitPoint p = solve(xf);
    env[j] = std::polar(1.0, p.phase);
    pz[j] = p.pz_exit;
  }
  return ExitWavefunction(a, z_exit_, std::move(env), std::move(pz));
}

ShotRay shoot_boundary(const GratingModel& model, const BeamParameters& beam, double x_f,
                       double z_f, const ShootingOptions& options) {
  // The exit plane must sit where the potential has died off to 1e-12 of its peak.
  const double envelope = std::visit(
      overloaded{[z_f](const GaussianGrating& g) {
                   const double s = z_f / g.waist();
                   return std::exp(-2.0 * s * s);
                 },
                 [z_f, &beam](const EvanescentGrating& g) {
                   return std::exp(-2.0 * g.kappa() * (z_f - g.turning_point(beam)));
                 }},
      model);
  const bool outgoing_side = std::holds_alternative<EvanescentGrating>(model) || z_f > 0.0;
  if (!outgoing_side || envelope >= 1e-12) {
    throw std::invalid_argument("shoot_boundary: exit plane inside the interaction region");
  }
  return ShootingSolver(model, beam, z_f, options).shoot(x_f);
}

double default_exit_plane(const GratingModel& model, const BeamParameters& beam) {
  const TimeWindow w = interaction_window(model, beam);
  return unperturbed_state(model, beam, 0.0, w.t_end).z;
}

double reference_plane(const GratingModel& model, const BeamParameters& beam) {
  return std::visit(overloaded{[](const GaussianGrating&) { return 0.0; },
                               [&beam](const EvanescentGrating& g) {
                                 return g.turning_point(beam) - std::numbers::ln2 / g.kappa();
                               }},
                    model);
}

}  // namespace phasegrating
