#pragma once

// Run configuration. Units: hbar = M = 1 with k = 1 for the standing wave and kappa = 1
// for the mirror; every dimensional field names its unit in the key.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "phasegrating/model.hpp"
#include "phasegrating/spectrum.hpp"

namespace phasegrating::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { gaussian, evanescent };

struct ModelConfig {
  ModelKind kind = ModelKind::gaussian;
  double waist_in_lambda = 100.0;  // gaussian
  double q_over_kappa = 1.0;       // evanescent
  double epsilon = 0.0;
  double v1_in_recoil_energy = 0.0;
  bool operator==(const ModelConfig&) const = default;
};

struct ThetaScan {
  double start_rad = 0.0;
  double stop_rad = 0.0;
  int count = 1;
  double at(int i) const;
  bool operator==(const ThetaScan&) const = default;
};

struct Tolerances {
  double quadrature = 1e-12;
  double ode = 1e-12;
  double shooting = 1e-10;
  bool operator==(const Tolerances&) const = default;
};

struct OracleConfig {
  bool include_kinetic = true;
  int truncation = 0;  // 0: chosen from u and the order window
  bool operator==(const OracleConfig&) const = default;
};

struct FeasibilityConfig {
  double gamma_over_delta = 1e-4;
  int n_target = 5;
  double target_emission = 0.01;
  bool operator==(const FeasibilityConfig&) const = default;
};

struct OutputConfig {
  std::optional<std::string> csv;
  std::optional<std::string> plot_script;
  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  ModelConfig model;
  double normal_momentum = 0.0;  // hbar k or hbar kappa
  ThetaScan theta;
  std::vector<SpectrumMethod> methods;  // sorted by tag, unique
  OrderWindow orders{-3, 3};
  Tolerances tolerances;
  OracleConfig oracle;
  int samples = 0;  // exit-plane samples; 0 picks a power of two from u
  double margin = 0.1;
  std::optional<FeasibilityConfig> feasibility;
  OutputConfig output;

  bool operator==(const RunConfig& other) const;

  GratingModel grating() const;
  BeamParameters beam(double theta) const;
  int sample_count() const;

  nlohmann::json to_json() const;
};

// Throws ConfigError with the offending key on any malformed or out-of-range field.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

std::optional<SpectrumMethod> method_from_string(std::string_view tag);

}  // namespace phasegrating::cli
