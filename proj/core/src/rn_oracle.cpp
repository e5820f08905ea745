#include "phasegrating/rn_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "phasegrating/errors.hpp"
#include "phasegrating/numerics/ode.hpp"

namespace phasegrating {

namespace {

double wrap(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  return a <= -std::numbers::pi ? a + 2.0 * std::numbers::pi : a;
}

}  // namespace

ModeVector::ModeVector(int truncation, double time, std::vector<complex> amplitudes,
                       double max_norm_error)
    : truncation_(truncation), time_(time), amplitudes_(std::move(amplitudes)),
      max_norm_error_(max_norm_error) {
  if (truncation_ < 0 || amplitudes_.size() != static_cast<std::size_t>(2 * truncation_ + 1)) {
    throw std::invalid_argument("ModeVector: amplitude count must be 2N+1");
  }
}

complex ModeVector::amplitude(int n) const {
  if (n < -truncation_ || n > truncation_) return {0.0, 0.0};
  return amplitudes_[static_cast<std::size_t>(n + truncation_)];
}

double ModeVector::norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return s;
}

int default_truncation(double u) { return static_cast<int>(std::ceil(std::max(u, 0.0))) + 20; }

ModeVector evolve_modes(const GaussianGrating& grating, const BeamParameters& beam,
                        bool include_kinetic, int truncation, const ModeOptions& options) {
  if (truncation < 1) throw std::invalid_argument("evolve_modes: truncation must be >= 1");
  if (!(options.tol > 0.0)) throw std::invalid_argument("evolve_modes: tol must be > 0");
  const int N = truncation;
  const std::size_t dim = static_cast<std::size_t>(2 * N + 1);
  const double hbar = beam.hbar();
  const double tau = grating.interaction_time(beam);
  const double A = grating.epsilon() * grating.v1() / std::sqrt(2.0 * std::numbers::pi);
  const double doppler = 2.0 * grating.k() * beam.vx();
  const double recoil = include_kinetic ? 4.0 * grating.recoil_energy(beam) / hbar : 0.0;
  const double t0 = -6.0 * tau, t1 = 6.0 * tau;

  // Interaction picture c_n = a_n exp(i (4 n^2 E_R/hbar) t + i Lambda(t)), where Lambda is the
  // integrated light shift. Only the neighbour couplings remain:
  //   c_n' = -i (A g / 2 hbar) [e^{i(phi + w_n - w_{n-1}) t} c_{n-1} + e^{-i(phi - w_n + w_{n+1}) t} c_{n+1}]
  // with w_n = recoil n^2. State layout: re(c_-N), im(c_-N), ...
  auto rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    const double s = t / tau;
    const double c = 0.5 * A * std::exp(-2.0 * s * s) / hbar;
    for (int n = -N; n <= N; ++n) {
      const std::size_t i = static_cast<std::size_t>(n + N);
      double re = 0.0, im = 0.0;  // accumulates sum of coupling * c_m
      if (n > -N) {
        const double ph = (doppler + recoil * (2.0 * n - 1.0)) * t;
        const double cr = std::cos(ph), ci = std::sin(ph);
        const double ar = y[2 * (i - 1)], ai = y[2 * (i - 1) + 1];
        re += cr * ar - ci * ai;
        im += cr * ai + ci * ar;
      }
      if (n < N) {
        const double ph = -(doppler + recoil * (2.0 * n + 1.0)) * t;
        const double cr = std::cos(ph), ci = std::sin(ph);
        const double ar = y[2 * (i + 1)], ai = y[2 * (i + 1) + 1];
        re += cr * ar - ci * ai;
        im += cr * ai + ci * ar;
      }
      // multiply by -i c
      dy[2 * i] = c * im;
      dy[2 * i + 1] = -c * re;
    }
  };

  std::vector<double> y0(2 * dim, 0.0);
  y0[2 * static_cast<std::size_t>(N)] = 1.0;

  double max_norm_error = 0.0;
  double max_leak = 0.0;
  double leak_time = t0;
  auto observer = [&](double t, std::span<const double> y) {
    double norm = 0.0;
    for (double v : y) norm += v * v;
    max_norm_error = std::max(max_norm_error, std::abs(norm - 1.0));
    const double edge = std::max(y[0] * y[0] + y[1] * y[1],
                                 y[2 * dim - 2] * y[2 * dim - 2] + y[2 * dim - 1] * y[2 * dim - 1]);
    if (edge > max_leak) {
      max_leak = edge;
      leak_time = t;
    }
  };

  numerics::OdeOptions opt;
  opt.rtol = options.tol;
  opt.atol = {options.tol * 1e-2};
  opt.dense = false;
  // The coupling oscillates at up to the Doppler plus recoil frequency of the outermost
  // order; cap the step so the controller never strides over a whole period.
  const double w_max = std::abs(doppler) + recoil * (2.0 * N + 1.0);
  if (w_max > 0.0) opt.max_step = 0.5 / w_max;
  const auto sol = numerics::integrate_dopri5(rhs, t0, t1, y0, opt, observer);

  if (max_leak > options.leakage_limit) {
    std::ostringstream msg;
    msg << "evolve_modes: population " << max_leak << " reached the truncation edge |n|=" << N
        << " at t=" << leak_time << "; increase the truncation";
    throw TruncationError(msg.str(), max_leak);
  }

  // Restore the light-shift phase: Lambda(t) = (A/hbar) int g dt = (A tau/hbar) sqrt(pi/8) (erf(sqrt2 t/tau) + erf(6 sqrt2)).
  const double light_shift = A * tau / hbar * std::sqrt(std::numbers::pi / 8.0) *
                             (std::erf(std::sqrt(2.0) * 6.0) - std::erf(-std::sqrt(2.0) * 6.0));
  const complex global = std::polar(1.0, -light_shift);
  const auto yf = sol.final_state();
  std::vector<complex> amps(dim);
  for (std::size_t i = 0; i < dim; ++i) amps[i] = global * complex(yf[2 * i], yf[2 * i + 1]);
  return ModeVector(N, t1, std::move(amps), max_norm_error);
}

PhaseComparison phase_comparison(const ModeVector& with_kinetic, const ModeVector& without_kinetic) {
  if (with_kinetic.truncation() != without_kinetic.truncation() ||
      with_kinetic.time() != without_kinetic.time()) {
    throw std::invalid_argument("phase_comparison: mode vectors differ in truncation or time");
  }
  PhaseComparison out;
  const int N = with_kinetic.truncation();
  complex overlap{0.0, 0.0};
  double ref = 0.0;
  for (int n = -N; n <= N; ++n) {
    const complex a = with_kinetic.amplitude(n);
    const complex b = without_kinetic.amplitude(n);
    overlap += std::conj(b) * a;
    const bool ok = std::norm(a) >= 1e-10 && std::norm(b) >= 1e-10;
    const double d = ok ? wrap(std::arg(a) - std::arg(b)) : 0.0;
    if (n == 0) ref = d;
    out.orders.push_back(n);
    out.difference.push_back(d);
    out.reliable.push_back(ok);
  }
  for (std::size_t i = 0; i < out.orders.size(); ++i) {
    out.relative.push_back(out.reliable[i] ? wrap(out.difference[i] - ref) : 0.0);
  }
  out.common_offset = std::abs(overlap) > 0.0 ? std::arg(overlap) : 0.0;
  return out;
}

DiffractionSpectrum to_spectrum(const ModeVector& modes, const BeamParameters& beam, double G) {
  std::vector<DiffractionOrder> orders;
  for (int n = -modes.truncation(); n <= modes.truncation(); ++n) {
    DiffractionOrder o;
    o.n = n;
    o.kinematics = order_momenta(beam, G, n);
    o.amplitude = o.kinematics->open ? modes.amplitude(n) : complex{0.0, 0.0};
    orders.push_back(o);
  }
  return DiffractionSpectrum(SpectrumMethod::ode_oracle, std::move(orders));
}

}  // namespace phasegrating
