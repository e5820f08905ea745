#include "phasegrating/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "phasegrating/bessel.hpp"

namespace phasegrating {

namespace {

constexpr double kEdgePopulation = 1e-14;
constexpr int kInitialHalfWidth = 15;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// exp(i (p_iz - p_z^(n)) z/hbar), with the momentum difference formed from
// p_iz^2 - p_z^(n)^2 = (px^(n))^2 - p_ix^2 so nothing cancels for small n hbar G.
complex plane_wave_shift(const BeamParameters& beam, const OrderMomentum& om, double G, double z) {
  if (z == 0.0) return {1.0, 0.0};
  const double dk = om.n * beam.hbar() * G;
  const double dp = dk * (2.0 * beam.px() + dk) / (beam.pz() + om.pz);
  return std::polar(1.0, dp * z / beam.hbar());
}

complex jacobi_anger_phase(int n) {
  // (-i)^n
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

void check_reciprocal(const ExitWavefunction& psi, double G) {
  if (!(G > 0.0) || std::abs(G * psi.period() - 2.0 * std::numbers::pi) > 1e-9 * 2.0 * std::numbers::pi) {
    throw std::invalid_argument("reciprocal vector does not match the sampled period");
  }
}

// Projection of the envelope (optionally weighted) onto exp(i n G x).
template <class Weight>
complex project(const ExitWavefunction& psi, int n, Weight&& weight) {
  const std::size_t N = psi.size();
  const auto& env = psi.envelope();
  complex acc{0.0, 0.0};
  for (std::size_t j = 0; j < N; ++j) {
    // exp(-i n G x_j) = exp(-2 pi i n j / N); reduce n j mod N to keep the angle small.
    const long long m = (static_cast<long long>(n) * static_cast<long long>(j)) % static_cast<long long>(N);
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(N);
    acc += env[j] * weight(j) * std::polar(1.0, angle);
  }
  return acc / static_cast<double>(N);
}

template <class OrderFn>
std::vector<DiffractionOrder> build_window(std::optional<OrderWindow> window, std::size_t samples,
                                           OrderFn&& order_at) {
  std::vector<DiffractionOrder> orders;
  if (window) {
    if (window->min > window->max) throw std::invalid_argument("order window min > max");
    for (int n = window->min; n <= window->max; ++n) orders.push_back(order_at(n));
    return orders;
  }
  const int limit = static_cast<int>(samples / 2) - 1;
  int half = std::min(kInitialHalfWidth, limit);
  for (int n = -half; n <= half; ++n) orders.push_back(order_at(n));
  while (half < limit && (std::norm(orders.front().amplitude) >= kEdgePopulation ||
                          std::norm(orders.back().amplitude) >= kEdgePopulation)) {
    ++half;
    orders.insert(orders.begin(), order_at(-half));
    orders.push_back(order_at(half));
  }
  return orders;
}

}  // namespace

OrderMomentum order_momenta(const BeamParameters& beam, double G, int n) {
  OrderMomentum om;
  om.n = n;
  om.px = beam.px() + n * beam.hbar() * G;
  const double p = beam.momentum();
  // p^2 - px^2 factored to stay accurate when px is close to p.
  const double pz2 = (p - om.px) * (p + om.px);
  om.open = pz2 >= 0.0;
  om.pz = om.open ? std::sqrt(pz2) : 0.0;
  return om;
}

std::string_view to_string(SpectrumMethod method) noexcept {
  switch (method) {
    case SpectrumMethod::closed_form: return "closed-form";
    case SpectrumMethod::fourier: return "fourier";
    case SpectrumMethod::kirchhoff: return "kirchhoff-wkb";
    case SpectrumMethod::ode_oracle: return "ode-oracle";
  }
  return "unknown";
}

DiffractionSpectrum::DiffractionSpectrum(SpectrumMethod method, std::vector<DiffractionOrder> orders)
    : method_(method), orders_(std::move(orders)) {
  if (orders_.empty()) throw std::invalid_argument("DiffractionSpectrum: no orders");
  for (std::size_t i = 1; i < orders_.size(); ++i) {
    if (orders_[i].n != orders_[i - 1].n + 1) {
      throw std::invalid_argument("DiffractionSpectrum: orders must be contiguous and ascending");
    }
  }
}

complex DiffractionSpectrum::amplitude(int n) const {
  if (n < min_order() || n > max_order()) return {0.0, 0.0};
  return orders_[static_cast<std::size_t>(n - min_order())].amplitude;
}

double DiffractionSpectrum::total_population() const {
  double sum = 0.0;
  for (const auto& o : orders_) {
    if (o.excluded) continue;
    if (o.kinematics && !o.kinematics->open) continue;
    sum += std::norm(o.amplitude);
  }
  return sum;
}

ExitWavefunction::ExitWavefunction(double period, double z_exit, std::vector<complex> envelope,
                                   std::optional<std::vector<double>> exit_pz)
    : period_(period), z_exit_(z_exit), envelope_(std::move(envelope)), exit_pz_(std::move(exit_pz)) {
  if (!(period > 0.0)) throw std::invalid_argument("ExitWavefunction: period must be > 0");
  if (envelope_.size() < 64 || !is_power_of_two(envelope_.size())) {
    throw std::invalid_argument("ExitWavefunction: sample count must be a power of two >= 64");
  }
  if (exit_pz_ && exit_pz_->size() != envelope_.size()) {
    throw std::invalid_argument("ExitWavefunction: exit momentum samples do not match envelope");
  }
}

DiffractionSpectrum amplitudes_fourier(const ExitWavefunction& psi, const BeamParameters& beam,
                                       double G, std::optional<OrderWindow> window) {
  check_reciprocal(psi, G);
  auto order_at = [&](int n) {
    DiffractionOrder o;
    o.n = n;
    o.kinematics = order_momenta(beam, G, n);
    if (o.kinematics->open) {
      o.amplitude = project(psi, n, [](std::size_t) { return 1.0; }) *
                    plane_wave_shift(beam, *o.kinematics, G, psi.z_exit());
    }
    return o;
  };
  return DiffractionSpectrum(SpectrumMethod::fourier, build_window(window, psi.size(), order_at));
}

DiffractionSpectrum amplitudes_kirchhoff(const ExitWavefunction& psi, const BeamParameters& beam,
                                         double G, std::optional<OrderWindow> window) {
  check_reciprocal(psi, G);
  if (!psi.exit_pz()) {
    throw std::invalid_argument("amplitudes_kirchhoff: exit wavefunction carries no p_fz samples");
  }
  const auto& pfz = *psi.exit_pz();
  auto order_at = [&](int n) {
    DiffractionOrder o;
    o.n = n;
    o.kinematics = order_momenta(beam, G, n);
    if (!o.kinematics->open) return o;
    const double pzn = o.kinematics->pz;
    if (pzn == 0.0) {
      o.excluded = true;
      return o;
    }
    o.amplitude = project(psi, n, [&](std::size_t j) { return 0.5 * (1.0 + pfz[j] / pzn); }) *
                  plane_wave_shift(beam, *o.kinematics, G, psi.z_exit());
    return o;
  };
  return DiffractionSpectrum(SpectrumMethod::kirchhoff, build_window(window, psi.size(), order_at));
}

DiffractionSpectrum closed_form_spectrum(double u, OrderWindow window, double global_phase) {
  if (!(u >= 0.0)) throw std::invalid_argument("closed_form_spectrum: u must be >= 0");
  if (window.min > window.max) throw std::invalid_argument("order window min > max");
  const int top = std::max(std::abs(window.min), std::abs(window.max));
  const std::vector<double> j = bessel_j_table(top, u);
  const complex global = std::polar(1.0, global_phase);
  std::vector<DiffractionOrder> orders;
  for (int n = window.min; n <= window.max; ++n) {
    const int m = std::abs(n);
    double jn = j[static_cast<std::size_t>(m)];
    if (n < 0 && (m % 2)) jn = -jn;
    DiffractionOrder o;
    o.n = n;
    o.amplitude = global * jacobi_anger_phase(n) * jn;
    orders.push_back(o);
  }
  return DiffractionSpectrum(SpectrumMethod::closed_form, std::move(orders));
}

DiffractionSpectrum closed_form_spectrum(double u, OrderWindow window, const BeamParameters& beam,
                                         double G, double global_phase) {
  DiffractionSpectrum bare = closed_form_spectrum(u, window, global_phase);
  std::vector<DiffractionOrder> orders = bare.orders();
  for (auto& o : orders) {
    o.kinematics = order_momenta(beam, G, o.n);
    if (!o.kinematics->open) o.amplitude = {0.0, 0.0};
  }
  return DiffractionSpectrum(SpectrumMethod::closed_form, std::move(orders));
}

OrderWindow default_order_window(double u) {
  int half = static_cast<int>(std::ceil(std::max(u, 0.0))) + 15;
  while (std::norm(bessel_j(half, u)) >= kEdgePopulation) ++half;
  return {-half, half};
}

}  // namespace phasegrating
