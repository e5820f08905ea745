#pragma once

// Scenario builders in units hbar = M = 1 with k = 1 (lambda = 2 pi) or kappa = 1.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "phasegrating/action.hpp"
#include "phasegrating/model.hpp"

namespace fixtures {

using namespace phasegrating;

inline constexpr double kLambda = 2.0 * std::numbers::pi;

struct KdCase {
  GaussianGrating grating;
  BeamParameters beam;
  GratingModel model() const { return grating; }
};

// Standing wave of waist w = waist_lambdas * lambda. `phase_amplitude` is eps V1 tau/(2 hbar)
// before the incidence factor; the normal momentum is chosen so that
// eta = 4 n_max^2 E_R tau/hbar hits `eta` with n_max = max(1, round(beta * phase_amplitude)).
inline KdCase kd_case(double phase_amplitude, double eta, double theta = 0.0,
                      double waist_lambdas = 100.0, double epsilon = 0.01) {
  const double w = waist_lambdas * kLambda;
  const double beta = std::exp(-0.5 * std::pow(w * std::tan(theta), 2));
  const int n_max = std::max(1, static_cast<int>(std::lround(beta * phase_amplitude)));
  const double tau = eta / (2.0 * n_max * n_max);  // E_R = 1/2
  const double pz = w / tau;
  const double v1 = 2.0 * phase_amplitude / (epsilon * tau);
  return {GaussianGrating(v1, w, 1.0, epsilon), BeamParameters::from_normal_momentum(1.0, pz, theta)};
}

struct EwCase {
  EvanescentGrating grating;
  BeamParameters beam;
  GratingModel model() const { return grating; }
};

// Mirror with kappa = 1, q = q_over_kappa. `phase_amplitude` is eps p_z/(hbar kappa); the
// barrier sits `barrier_factor` above the normal kinetic energy.
inline EwCase ew_case(double phase_amplitude, double pz = 100.0, double theta = 0.0,
                      double q_over_kappa = 1.0, double barrier_factor = 2.0) {
  const double eps = phase_amplitude / pz;
  return {EvanescentGrating(barrier_factor * 0.5 * pz * pz, 1.0, q_over_kappa, eps),
          BeamParameters::from_normal_momentum(1.0, pz, theta)};
}

// Deterministic generator for property tests.
class Gen {
 public:
  explicit Gen(unsigned long long seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace fixtures
