#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "phasegrating/model.hpp"

namespace phasegrating {

using complex = std::complex<double>;

// Far-field channel n: px = p_ix + n hbar G, pz = sqrt(p^2 - px^2), closed when px^2 > p^2.
struct OrderMomentum {
  int n = 0;
  double px = 0.0;
  double pz = 0.0;
  bool open = true;
};

OrderMomentum order_momenta(const BeamParameters& beam, double G, int n);

enum class SpectrumMethod { closed_form, fourier, kirchhoff, ode_oracle };

std::string_view to_string(SpectrumMethod method) noexcept;

struct OrderWindow {
  int min = 0;
  int max = 0;
};

struct DiffractionOrder {
  int n = 0;
  complex amplitude{0.0, 0.0};
  std::optional<OrderMomentum> kinematics;
  bool excluded = false;  // open but grazing (pz = 0): no Kirchhoff amplitude defined
};

class DiffractionSpectrum {
 public:
  DiffractionSpectrum(SpectrumMethod method, std::vector<DiffractionOrder> orders);

  SpectrumMethod method() const noexcept { return method_; }
  const std::vector<DiffractionOrder>& orders() const noexcept { return orders_; }
  int min_order() const { return orders_.front().n; }
  int max_order() const { return orders_.back().n; }

  // Zero for orders outside the computed window.
  complex amplitude(int n) const;
  double population(int n) const { return std::norm(amplitude(n)); }
  // Sum over open, non-excluded orders.
  double total_population() const;

 private:
  SpectrumMethod method_;
  std::vector<DiffractionOrder> orders_;  // ascending n, contiguous
};

// Wavefunction on the line z = z_exit over one period, stored as the envelope relative to
// the incident carrier exp(i(p_ix x + p_iz z_exit)/hbar). Sample j sits at x = j a / N.
class ExitWavefunction {
 public:
  ExitWavefunction(double period, double z_exit, std::vector<complex> envelope,
                   std::optional<std::vector<double>> exit_pz = std::nullopt);

  double period() const noexcept { return period_; }
  double z_exit() const noexcept { return z_exit_; }
  std::size_t size() const noexcept { return envelope_.size(); }
  double x(std::size_t j) const noexcept { return period_ * static_cast<double>(j) / static_cast<double>(envelope_.size()); }
  const std::vector<complex>& envelope() const noexcept { return envelope_; }
  const std::optional<std::vector<double>>& exit_pz() const noexcept { return exit_pz_; }

 private:
  double period_;
  double z_exit_;
  std::vector<complex> envelope_;
  std::optional<std::vector<double>> exit_pz_;
};

// a_n = (1/a) int psi exp(-i p^(n).r/hbar) dx with the trapezoid rule (exact for the
// band-limited periodic integrand). Without a window the range starts at |n| <= 15 and grows
// until both edge populations fall below 1e-14.
DiffractionSpectrum amplitudes_fourier(const ExitWavefunction& psi, const BeamParameters& beam,
                                       double G, std::optional<OrderWindow> window = std::nullopt);
// Same with the obliquity factor (1 + p_fz(x)/p_z^(n))/2 inside the integral.
DiffractionSpectrum amplitudes_kirchhoff(const ExitWavefunction& psi, const BeamParameters& beam,
                                         double G, std::optional<OrderWindow> window = std::nullopt);

// a_n = exp(i global_phase) (-i)^n J_n(u).
DiffractionSpectrum closed_form_spectrum(double u, OrderWindow window, double global_phase = 0.0);
DiffractionSpectrum closed_form_spectrum(double u, OrderWindow window, const BeamParameters& beam,
                                         double G, double global_phase = 0.0);
// |n| <= ceil(u) + 15.
OrderWindow default_order_window(double u);

}  // namespace phasegrating
