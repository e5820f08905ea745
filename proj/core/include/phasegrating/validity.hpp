#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "phasegrating/model.hpp"

namespace phasegrating {

// Second-order action phase eps^2 S2/hbar sampled over one period of x_i.
struct SecondOrderPhase {
  std::vector<double> x_initial;
  std::vector<double> phase;
  double mean = 0.0;
};

struct ValidityReport {
  double u = 0.0;
  double beta = 1.0;
  double eta = 0.0;
  double rn_param = 0.0;
  double dp_max = 0.0;
  double dr_max = 0.0;
  int n_max = 1;
  double margin = 0.1;

  // Raw ratios; a condition holds when its ratio is below `margin`.
  double perturbation_ratio = 0.0;    // dp_max dr_max / (2 hbar)
  double displacement_ratio = 0.0;    // dr_max n_max / (2a)
  double wkb_ratio = 0.0;             // dr_max / a
  double rn_ratio = 0.0;              // 2 n_max E_R tau / hbar

  bool perturbation_ok = true;
  bool displacement_ok = true;
  bool wkb_ok = true;
  bool rn_ok = true;
  bool perturbative_trivial = false;  // u < 1: fewer than one order populated

  std::optional<SecondOrderPhase> second_order;

  bool all_ok() const noexcept { return perturbation_ok && displacement_ok && wkb_ok && rn_ok; }
};

ValidityReport validity_report(const GratingModel& model, const BeamParameters& beam,
                               double margin = 0.1);

SecondOrderPhase second_order_phase(const GratingModel& model, const BeamParameters& beam,
                                    int samples = 32);

// -eta sin^2(phi), phi = 2k (x_f - z_f tan theta)
double delta_phi(double eta, double phase_coordinate);

// Weights of exp(i delta_phi) = sum_m c_m exp(4imk(...)) on the even-order lattice:
// c_m = exp(-i eta/2) i^m J_m(eta/2), m = -m_max..m_max.
std::vector<std::complex<double>> convolution_spectrum(double eta, int m_max);

// |a_n^pert|^2 - |a_n^WKB|^2 to second order in eta, Bessel arguments u:
// (eta^2/16) [2 J_n^2 + J_n (J_{n-4} + J_{n+4}) - (J_{n-2} + J_{n+2})^2].
double population_difference(double u, double eta, int n);

struct FeasibilityOptions {
  double margin = 0.1;
  double target_emission = 0.01;
};

struct FeasibilityReport {
  double min_p_iz_raw = 0.0;     // 2 n^2 hbar q^2/kappa (the bound itself)
  double min_p_iz = 0.0;         // raw / margin
  double p_iz = 0.0;
  double p_sp = 0.0;             // (Gamma/Delta) p_iz/(hbar kappa)
  double required_detuning_ratio = 0.0;  // Delta/Gamma giving target_emission at this p_iz
  double required_barrier = 0.0;  // minimum V1/E_R to reflect
  double barrier = 0.0;           // actual V1/E_R
  bool momentum_ok = false;
  bool barrier_ok = false;
};

FeasibilityReport feasibility(const BeamParameters& beam, const EvanescentGrating& grating,
                              double gamma_over_delta, int n_target,
                              const FeasibilityOptions& options = {});

}  // namespace phasegrating
