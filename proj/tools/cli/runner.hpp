#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "phasegrating/spectrum.hpp"
#include "phasegrating/validity.hpp"

namespace phasegrating::cli {

// A numerical failure at one scan point.
class RunError : public std::runtime_error {
 public:
  RunError(const std::string& what, double theta) : std::runtime_error(what), theta_(theta) {}
  double theta() const noexcept { return theta_; }

 private:
  double theta_;
};

struct ResultRow {
  double theta = 0.0;
  int n = 0;
  double population = 0.0;
  double phase = 0.0;
  SpectrumMethod method = SpectrumMethod::closed_form;
  double eta = 0.0;
  std::string flags;
};

struct ComparisonRow {
  double theta = 0.0;
  std::string order;  // an order number, or "max" / "offset" for summary rows
  SpectrumMethod method_a = SpectrumMethod::closed_form;
  SpectrumMethod method_b = SpectrumMethod::closed_form;
  double population_delta = 0.0;
  double phase_delta = 0.0;  // NaN where either population is below 1e-10
};

struct ValidationPoint {
  double theta = 0.0;
  ValidityReport report;
  std::optional<FeasibilityReport> feasibility;
};

// Full spectrum of one method at one angle, over a window wide enough to hold the norm
// and to cover the requested orders.
DiffractionSpectrum compute_spectrum(const RunConfig& config, SpectrumMethod method, double theta);

// Semicolon-separated failing validity conditions ("ok" when none fail).
std::string validity_flags(const ValidityReport& report);

// Scan points run on up to `jobs` threads; rows come back ordered by theta, n, method.
std::vector<ResultRow> run_spectrum(const RunConfig& config, int jobs = 1);
std::vector<ComparisonRow> run_compare(const RunConfig& config, int jobs = 1);
std::vector<ValidationPoint> run_validate(const RunConfig& config);

}  // namespace phasegrating::cli
