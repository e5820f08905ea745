#include "cli/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include "phasegrating/action.hpp"
#include "phasegrating/errors.hpp"
#include "phasegrating/rn_oracle.hpp"
#include "phasegrating/trajectories.hpp"

namespace phasegrating::cli {

namespace {

constexpr double kReliablePopulation = 1e-10;

double wrap(double phi) {
  phi = std::remainder(phi, 2.0 * std::numbers::pi);
  return phi <= -std::numbers::pi ? phi + 2.0 * std::numbers::pi : phi;
}

OrderWindow union_window(OrderWindow a, OrderWindow b) {
  return {std::min(a.min, b.min), std::max(a.max, b.max)};
}

DiffractionSpectrum fourier_route(const RunConfig& c, const GratingModel& model, const BeamParameters& beam,
                                  OrderWindow window) {
  // exp(i eps S1(x)/hbar) on the plane where x labels the unperturbed path at t = 0.
  const std::size_t n = static_cast<std::size_t>(c.sample_count());
  const double a = grating_period(model);
  const double eps = grating_epsilon(model);
  ActionTolerances tol;
  tol.quadrature_abs = c.tolerances.quadrature;
  tol.quadrature_rel = c.tolerances.quadrature;
  std::vector<complex> env(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = a * static_cast<double>(j) / static_cast<double>(n);
    env[j] = std::polar(1.0, eps * s1_quadrature(model, beam, x, tol) / beam.hbar());
  }
  const ExitWavefunction psi(a, reference_plane(model, beam), std::move(env));
  return amplitudes_fourier(psi, beam, grating_reciprocal(model), window);
}

DiffractionSpectrum kirchhoff_route(const RunConfig& c, const GratingModel& model, const BeamParameters& beam,
                                    OrderWindow window) {
  ShootingOptions opt;
  opt.tol = c.tolerances.shooting;
  const ShootingSolver solver(model, beam, reference_plane(model, beam), opt);
  const ExitWavefunction psi = solver.exit_wavefunction(static_cast<std::size_t>(c.sample_count()));
  return amplitudes_kirchhoff(psi, beam, grating_reciprocal(model), window);
}

DiffractionSpectrum oracle_route(const RunConfig& c, const GratingModel& model, const BeamParameters& beam,
                                 OrderWindow window, double u) {
  const auto& g = std::get<GaussianGrating>(model);
  const int reach = std::max(std::abs(window.min), std::abs(window.max));
  const int truncation = c.oracle.truncation > 0 ? c.oracle.truncation : std::max(default_truncation(u), reach + 5);
  ModeOptions opt;
  opt.tol = c.tolerances.ode;
  const ModeVector modes = evolve_modes(g, beam, c.oracle.include_kinetic, truncation, opt);
  return to_spectrum(modes, beam, g.reciprocal());
}

// Runs fn(i) for every scan index; the failure at the smallest angle wins.
template <typename Fn>
void for_each_angle(int count, int jobs, Fn fn) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(jobs, 1, std::max(1, count));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::string validity_flags(const ValidityReport& r) {
  std::string out;
  auto add = [&out](bool ok, const char* name) {
    if (ok) return;
    if (!out.empty()) out += ';';
    out += name;
  };
  add(r.perturbation_ok, "perturbation");
  add(r.displacement_ok, "displacement");
  add(r.wkb_ok, "wkb");
  add(r.rn_ok, "rn");
  return out.empty() ? "ok" : out;
}

DiffractionSpectrum compute_spectrum(const RunConfig& c, SpectrumMethod method, double theta) {
  const GratingModel model = c.grating();
  const BeamParameters beam = c.beam(theta);
  try {
    const DimensionlessGroups groups = dimensionless_groups(model, beam, 1);
    const OrderWindow window = union_window(default_order_window(groups.u), c.orders);
    switch (method) {
      case SpectrumMethod::closed_form: {
        // Same global phase as exp(i eps S1/hbar): the unmodulated part of S1.
        const double constant = s1_closed_form(model, beam, 0.25 * grating_period(model));
        return closed_form_spectrum(groups.u, window, beam, grating_reciprocal(model),
                                    grating_epsilon(model) * constant / beam.hbar());
      }
      case SpectrumMethod::fourier:
        return fourier_route(c, model, beam, window);
      case SpectrumMethod::kirchhoff:
        return kirchhoff_route(c, model, beam, window);
      case SpectrumMethod::ode_oracle:
        return oracle_route(c, model, beam, window, groups.u);
    }
  } catch (const NumericalError& e) {
    std::ostringstream msg;
    msg.precision(17);
    msg << to_string(method) << " failed at theta=" << theta << " rad: " << e.what();
    throw RunError(msg.str(), theta);
  }
  throw std::logic_error("compute_spectrum: unknown method");
}

std::vector<ResultRow> run_spectrum(const RunConfig& c, int jobs) {
  const int count = c.theta.count;
  std::vector<std::vector<ResultRow>> per_angle(static_cast<std::size_t>(count));
  const GratingModel model = c.grating();
  for_each_angle(count, jobs, [&](int i) {
    const double theta = c.theta.at(i);
    const ValidityReport report = validity_report(model, c.beam(theta), c.margin);
    const std::string flags = validity_flags(report);
    std::vector<DiffractionSpectrum> spectra;
    for (SpectrumMethod m : c.methods) spectra.push_back(compute_spectrum(c, m, theta));
    auto& rows = per_angle[static_cast<std::size_t>(i)];
    for (int n = c.orders.min; n <= c.orders.max; ++n) {
      for (const DiffractionSpectrum& s : spectra) {
        ResultRow row{theta, n, 0.0, 0.0, s.method(), report.eta, flags};
        const complex amp = s.amplitude(n);
        row.population = std::norm(amp);
        row.phase = row.population > 0.0 ? std::arg(amp) : 0.0;
        if (n >= s.min_order() && n <= s.max_order()) {
          const DiffractionOrder& o = s.orders()[static_cast<std::size_t>(n - s.min_order())];
          if (o.kinematics && !o.kinematics->open) row.flags += ";closed";
          if (o.excluded) row.flags += ";excluded";
        }
        rows.push_back(std::move(row));
      }
    }
  });
  std::vector<ResultRow> out;
  for (auto& rows : per_angle) std::move(rows.begin(), rows.end(), std::back_inserter(out));
  return out;
}

std::vector<ComparisonRow> run_compare(const RunConfig& c, int jobs) {
  if (c.methods.size() < 2) throw ConfigError("compare: needs at least two methods");
  const int count = c.theta.count;
  std::vector<std::vector<ComparisonRow>> per_angle(static_cast<std::size_t>(count));
  for_each_angle(count, jobs, [&](int i) {
    const double theta = c.theta.at(i);
    std::vector<DiffractionSpectrum> spectra;
    for (SpectrumMethod m : c.methods) spectra.push_back(compute_spectrum(c, m, theta));
    auto& rows = per_angle[static_cast<std::size_t>(i)];
    for (std::size_t ia = 0; ia < spectra.size(); ++ia) {
      for (std::size_t ib = ia + 1; ib < spectra.size(); ++ib) {
        const DiffractionSpectrum& a = spectra[ia];
        const DiffractionSpectrum& b = spectra[ib];
        double max_pop = 0.0, max_phase = 0.0;
        for (int n = c.orders.min; n <= c.orders.max; ++n) {
          const complex x = a.amplitude(n), y = b.amplitude(n);
          const bool reliable = std::norm(x) >= kReliablePopulation && std::norm(y) >= kReliablePopulation;
          const double dp = std::norm(x) - std::norm(y);
          const double dphi = reliable ? wrap(std::arg(x * std::conj(y))) : std::nan("");
          max_pop = std::max(max_pop, std::abs(dp));
          if (reliable) max_phase = std::max(max_phase, std::abs(dphi));
          rows.push_back({theta, std::to_string(n), a.method(), b.method(), dp, dphi});
        }
        rows.push_back({theta, "max", a.method(), b.method(), max_pop, max_phase});
        // Population-weighted global phase between the two, over every computed order.
        complex overlap{0.0, 0.0};
        const int lo = std::min(a.min_order(), b.min_order()), hi = std::max(a.max_order(), b.max_order());
        for (int n = lo; n <= hi; ++n) overlap += a.amplitude(n) * std::conj(b.amplitude(n));
        rows.push_back({theta, "offset", a.method(), b.method(), a.total_population() - b.total_population(),
                        std::arg(overlap)});
      }
    }
  });
  std::vector<ComparisonRow> out;
  for (auto& rows : per_angle) std::move(rows.begin(), rows.end(), std::back_inserter(out));
  return out;
}

std::vector<ValidationPoint> run_validate(const RunConfig& c) {
  const GratingModel model = c.grating();
  std::vector<ValidationPoint> out;
  for (int i = 0; i < c.theta.count; ++i) {
    const double theta = c.theta.at(i);
    const BeamParameters beam = c.beam(theta);
    ValidationPoint p{theta, validity_report(model, beam, c.margin), std::nullopt};
    if (c.feasibility) {
      p.feasibility = feasibility(beam, std::get<EvanescentGrating>(model), c.feasibility->gamma_over_delta,
                                  c.feasibility->n_target,
                                  FeasibilityOptions{c.margin, c.feasibility->target_emission});
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace phasegrating::cli
