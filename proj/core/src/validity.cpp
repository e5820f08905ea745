#include "phasegrating/validity.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "phasegrating/action.hpp"
#include "phasegrating/bessel.hpp"

namespace phasegrating {

ValidityReport validity_report(const GratingModel& model, const BeamParameters& beam, double margin) {
  if (!(margin > 0.0)) throw std::invalid_argument("validity_report: margin must be > 0");
  ValidityReport r;
  r.margin = margin;
  const DimensionlessGroups probe = dimensionless_groups(model, beam, 1);
  r.u = probe.u;
  r.beta = probe.beta;
  r.n_max = std::max(1, static_cast<int>(std::lround(probe.u)));
  r.perturbative_trivial = probe.u < 1.0;
  const DimensionlessGroups g = dimensionless_groups(model, beam, r.n_max);
  r.eta = g.eta;
  r.rn_param = g.rn_param;

  const double hbar = beam.hbar();
  const double tau = interaction_time(model, beam);
  const double a = grating_period(model);
  r.dp_max = r.n_max * hbar * grating_reciprocal(model);
  r.dr_max = r.dp_max * tau / beam.mass();

  r.perturbation_ratio = 0.5 * r.dp_max * r.dr_max / hbar;
  r.displacement_ratio = r.dr_max * r.n_max / (2.0 * a);
  r.wkb_ratio = r.dr_max / a;
  r.rn_ratio = r.rn_param;

  r.perturbation_ok = r.perturbation_ratio < margin;
  r.displacement_ok = r.displacement_ratio < margin;
  r.wkb_ok = r.wkb_ratio < margin;
  r.rn_ok = r.rn_ratio < margin;
  return r;
}

SecondOrderPhase second_order_phase(const GratingModel& model, const BeamParameters& beam, int samples) {
  if (samples < 1) throw std::invalid_argument("second_order_phase: samples must be >= 1");
  SecondOrderPhase out;
  const double a = grating_period(model);
  const double eps = grating_epsilon(model);
  double sum = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double x = a * j / samples;
    const double phi = eps * eps * s2_quadrature(model, beam, x) / beam.hbar();
    out.x_initial.push_back(x);
    out.phase.push_back(phi);
    sum += phi;
  }
  out.mean = sum / samples;
  return out;
}

double delta_phi(double eta, double phase_coordinate) {
  if (!(eta >= 0.0)) throw std::invalid_argument("delta_phi: eta must be >= 0");
  const double s = std::sin(phase_coordinate);
  return -eta * s * s;
}

std::vector<std::complex<double>> convolution_spectrum(double eta, int m_max) {
  if (!(eta >= 0.0)) throw std::invalid_argument("convolution_spectrum: eta must be >= 0");
  if (m_max < 0) throw std::invalid_argument("convolution_spectrum: m_max must be >= 0");
  const std::vector<double> j = bessel_j_table(m_max, 0.5 * eta);
  const std::complex<double> global = std::polar(1.0, -0.5 * eta);
  std::vector<std::complex<double>> c;
  c.reserve(static_cast<std::size_t>(2 * m_max + 1));
  for (int m = -m_max; m <= m_max; ++m) {
    const int k = std::abs(m);
    double jm = j[static_cast<std::size_t>(k)];
    if (m < 0 && (k % 2)) jm = -jm;
    // i^m
    static constexpr std::complex<double> powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    c.push_back(global * powers[((m % 4) + 4) % 4] * jm);
  }
  return c;
}

double population_difference(double u, double eta, int n) {
  if (!(u >= 0.0) || !(eta >= 0.0)) {
    throw std::invalid_argument("population_difference: u and eta must be >= 0");
  }
  auto J = [u](int m) { return bessel_j(m, u); };
  const double jn = J(n);
  const double side2 = J(n - 2) + J(n + 2);
  const double side4 = J(n - 4) + J(n + 4);
  return eta * eta / 16.0 * (2.0 * jn * jn + jn * side4 - side2 * side2);
}

FeasibilityReport feasibility(const BeamParameters& beam, const EvanescentGrating& grating,
                              double gamma_over_delta, int n_target, const FeasibilityOptions& options) {
  if (!(gamma_over_delta > 0.0)) throw std::invalid_argument("feasibility: Gamma/Delta must be > 0");
  if (n_target < 1) throw std::invalid_argument("feasibility: n_target must be >= 1");
  if (!(options.margin > 0.0) || !(options.target_emission > 0.0)) {
    throw std::invalid_argument("feasibility: margin and target emission must be > 0");
  }
  FeasibilityReport r;
  const double hbar = beam.hbar();
  const double q = grating.q(), kappa = grating.kappa();
  const double n = static_cast<double>(n_target);
  r.p_iz = beam.pz();
  r.min_p_iz_raw = 2.0 * n * n * hbar * q * q / kappa;
  r.min_p_iz = r.min_p_iz_raw / options.margin;
  const double p_units = r.p_iz / (hbar * kappa);
  r.p_sp = gamma_over_delta * p_units;
  r.required_detuning_ratio = p_units / options.target_emission;
  const double e_r = grating.recoil_energy(beam);
  r.required_barrier = beam.normal_energy() / e_r;
  r.barrier = grating.v1() / e_r;
  r.momentum_ok = r.p_iz >= r.min_p_iz;
  r.barrier_ok = grating.reflects(beam);
  return r;
}

}  // namespace phasegrating
