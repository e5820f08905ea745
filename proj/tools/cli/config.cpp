#include "cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace phasegrating::cli {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

double number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + "." + key + ": missing");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + "." + key + ": not finite");
  return x;
}

std::optional<double> optional_number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) return std::nullopt;
  return number(obj, key, where);
}

int integer(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

void require_positive(double x, const std::string& what) {
  if (!(x > 0.0)) throw ConfigError(what + ": must be > 0");
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

ModelConfig parse_model(const json& m, double normal_momentum_hint, const json& beam) {
  if (!m.contains("kind") || !m.at("kind").is_string()) throw ConfigError("model.kind: missing");
  const std::string kind = m.at("kind").get<std::string>();
  ModelConfig out;
  const auto amplitude = optional_number(m, "phase_amplitude", "model");
  if (kind == "gaussian") {
    check_keys(m, {"kind", "waist_in_lambda", "epsilon", "v1_in_recoil_energy", "phase_amplitude"}, "model");
    out.kind = ModelKind::gaussian;
    out.waist_in_lambda = number(m, "waist_in_lambda", "model");
    require_positive(out.waist_in_lambda, "model.waist_in_lambda");
    out.epsilon = number(m, "epsilon", "model");
    if (out.epsilon < 0.0) throw ConfigError("model.epsilon: must be >= 0");
    const auto v1 = optional_number(m, "v1_in_recoil_energy", "model");
    if (v1.has_value() == amplitude.has_value()) {
      throw ConfigError("model: give exactly one of v1_in_recoil_energy, phase_amplitude");
    }
    if (v1) {
      out.v1_in_recoil_energy = *v1;
    } else {
      // u = eps V1 tau/(2 hbar), tau = w/p_iz, E_R = 1/2
      if (*amplitude < 0.0) throw ConfigError("model.phase_amplitude: must be >= 0");
      if (*amplitude > 0.0 && out.epsilon == 0.0) {
        throw ConfigError("model.phase_amplitude: needs epsilon > 0");
      }
      const double tau = out.waist_in_lambda * kTwoPi / normal_momentum_hint;
      out.v1_in_recoil_energy = *amplitude == 0.0 ? 0.0 : 2.0 * (2.0 * *amplitude / (out.epsilon * tau));
    }
    if (out.v1_in_recoil_energy < 0.0) throw ConfigError("model.v1_in_recoil_energy: must be >= 0");
    if (!beam.contains("normal_momentum_in_hbar_k")) {
      throw ConfigError("beam.normal_momentum_in_hbar_k: missing for the gaussian model");
    }
  } else if (kind == "evanescent") {
    check_keys(m, {"kind", "q_over_kappa", "epsilon", "v1_in_recoil_energy", "phase_amplitude"}, "model");
    out.kind = ModelKind::evanescent;
    out.q_over_kappa = number(m, "q_over_kappa", "model");
    require_positive(out.q_over_kappa, "model.q_over_kappa");
    out.v1_in_recoil_energy = number(m, "v1_in_recoil_energy", "model");
    require_positive(out.v1_in_recoil_energy, "model.v1_in_recoil_energy");
    const auto eps = optional_number(m, "epsilon", "model");
    if (eps.has_value() == amplitude.has_value()) {
      throw ConfigError("model: give exactly one of epsilon, phase_amplitude");
    }
    // u = eps p_iz/(hbar kappa)
    out.epsilon = eps ? *eps : *amplitude / normal_momentum_hint;
    if (out.epsilon < 0.0) throw ConfigError("model.epsilon: must be >= 0");
    if (!beam.contains("normal_momentum_in_hbar_kappa")) {
      throw ConfigError("beam.normal_momentum_in_hbar_kappa: missing for the evanescent model");
    }
  } else {
    throw ConfigError("model.kind: expected 'gaussian' or 'evanescent', got '" + kind + "'");
  }
  return out;
}

ThetaScan parse_scan(const json& s) {
  check_keys(s, {"start_rad", "stop_rad", "start_mrad", "stop_mrad", "start_deg", "stop_deg", "count"},
             "theta_scan");
  struct Unit {
    const char* suffix;
    double to_rad;
  };
  static constexpr Unit units[] = {{"rad", 1.0}, {"mrad", 1e-3}, {"deg", std::numbers::pi / 180.0}};
  std::optional<ThetaScan> out;
  for (const Unit& u : units) {
    const std::string start = std::string("start_") + u.suffix, stop = std::string("stop_") + u.suffix;
    if (!s.contains(start) && !s.contains(stop)) continue;
    if (out) throw ConfigError("theta_scan: mixed angle units");
    out = ThetaScan{number(s, start, "theta_scan") * u.to_rad, number(s, stop, "theta_scan") * u.to_rad, 1};
  }
  if (!out) throw ConfigError("theta_scan: missing start/stop");
  if (!s.contains("count")) throw ConfigError("theta_scan.count: missing");
  out->count = integer(s, "count", "theta_scan");
  if (out->count < 1) throw ConfigError("theta_scan.count: must be >= 1");
  if (out->stop_rad < out->start_rad) throw ConfigError("theta_scan: stop below start");
  if (std::max(std::abs(out->start_rad), std::abs(out->stop_rad)) >= 0.5 * std::numbers::pi) {
    throw ConfigError("theta_scan: angles must stay below 90 degrees");
  }
  return *out;
}

}  // namespace

double ThetaScan::at(int i) const {
  if (count == 1) return start_rad;
  if (i == count - 1) return stop_rad;
  return start_rad + (stop_rad - start_rad) * static_cast<double>(i) / static_cast<double>(count - 1);
}

std::optional<SpectrumMethod> method_from_string(std::string_view tag) {
  for (SpectrumMethod m : {SpectrumMethod::closed_form, SpectrumMethod::fourier, SpectrumMethod::kirchhoff,
                           SpectrumMethod::ode_oracle}) {
    if (to_string(m) == tag) return m;
  }
  return std::nullopt;
}

bool RunConfig::operator==(const RunConfig& o) const {
  return model == o.model && normal_momentum == o.normal_momentum && theta == o.theta &&
         methods == o.methods && orders.min == o.orders.min && orders.max == o.orders.max &&
         tolerances == o.tolerances && oracle == o.oracle && samples == o.samples && margin == o.margin &&
         feasibility == o.feasibility && output == o.output;
}

GratingModel RunConfig::grating() const {
  if (model.kind == ModelKind::gaussian) {
    // k = 1: E_R = 1/2, lambda = 2 pi
    return GaussianGrating(0.5 * model.v1_in_recoil_energy, model.waist_in_lambda * kTwoPi, 1.0, model.epsilon);
  }
  const double q = model.q_over_kappa;
  return EvanescentGrating(0.5 * q * q * model.v1_in_recoil_energy, 1.0, q, model.epsilon);
}

BeamParameters RunConfig::beam(double theta_rad) const {
  return BeamParameters::from_normal_momentum(1.0, normal_momentum, theta_rad);
}

int RunConfig::sample_count() const {
  if (samples > 0) return samples;
  const DimensionlessGroups g = dimensionless_groups(grating(), beam(theta.start_rad), 1);
  const int needed = 4 * (static_cast<int>(std::ceil(g.u)) + 16 + std::max(std::abs(orders.min), std::abs(orders.max)));
  int n = 64;
  while (n < needed) n *= 2;
  return n;
}

json RunConfig::to_json() const {
  json j;
  if (model.kind == ModelKind::gaussian) {
    j["model"] = {{"kind", "gaussian"},
                  {"waist_in_lambda", model.waist_in_lambda},
                  {"epsilon", model.epsilon},
                  {"v1_in_recoil_energy", model.v1_in_recoil_energy}};
    j["beam"] = {{"normal_momentum_in_hbar_k", normal_momentum}};
  } else {
    j["model"] = {{"kind", "evanescent"},
                  {"q_over_kappa", model.q_over_kappa},
                  {"epsilon", model.epsilon},
                  {"v1_in_recoil_energy", model.v1_in_recoil_energy}};
    j["beam"] = {{"normal_momentum_in_hbar_kappa", normal_momentum}};
  }
  j["theta_scan"] = {{"start_rad", theta.start_rad}, {"stop_rad", theta.stop_rad}, {"count", theta.count}};
  json methods_json = json::array();
  for (SpectrumMethod m : methods) methods_json.push_back(std::string(to_string(m)));
  j["methods"] = methods_json;
  j["orders"] = {{"min", orders.min}, {"max", orders.max}};
  j["tolerances"] = {{"quadrature", tolerances.quadrature}, {"ode", tolerances.ode}, {"shooting", tolerances.shooting}};
  j["oracle"] = {{"include_kinetic", oracle.include_kinetic}, {"truncation", oracle.truncation}};
  j["samples"] = samples;
  j["margin"] = margin;
  if (feasibility) {
    j["feasibility"] = {{"gamma_over_delta", feasibility->gamma_over_delta},
                        {"n_target", feasibility->n_target},
                        {"target_emission", feasibility->target_emission}};
  }
  json out = json::object();
  if (output.csv) out["csv"] = *output.csv;
  if (output.plot_script) out["plot_script"] = *output.plot_script;
  j["output"] = out;
  return j;
}

RunConfig parse_config(const json& j) {
  check_keys(j, {"model", "beam", "theta_scan", "methods", "orders", "tolerances", "oracle", "samples", "margin",
                 "feasibility", "output"},
             "config");
  for (const char* key : {"model", "beam", "theta_scan", "methods"}) {
    if (!j.contains(key)) throw ConfigError(std::string("config.") + key + ": missing");
  }
  RunConfig c;

  const json& beam = j.at("beam");
  check_keys(beam, {"normal_momentum_in_hbar_k", "normal_momentum_in_hbar_kappa"}, "beam");
  if (beam.size() != 1) throw ConfigError("beam: give exactly one normal momentum");
  c.normal_momentum = number(beam, beam.begin().key(), "beam");
  require_positive(c.normal_momentum, "beam." + beam.begin().key());
  c.model = parse_model(j.at("model"), c.normal_momentum, beam);
  c.theta = parse_scan(j.at("theta_scan"));

  const json& methods = j.at("methods");
  if (!methods.is_array() || methods.empty()) throw ConfigError("methods: expected a non-empty list");
  std::set<std::string> seen;
  for (const json& m : methods) {
    if (!m.is_string()) throw ConfigError("methods: expected strings");
    const std::string tag = m.get<std::string>();
    const auto method = method_from_string(tag);
    if (!method) throw ConfigError("methods: unknown method '" + tag + "'");
    if (!seen.insert(tag).second) throw ConfigError("methods: duplicate '" + tag + "'");
    if (*method == SpectrumMethod::ode_oracle && c.model.kind != ModelKind::gaussian) {
      throw ConfigError("methods: ode-oracle needs the gaussian model");
    }
    c.methods.push_back(*method);
  }
  std::sort(c.methods.begin(), c.methods.end(),
            [](SpectrumMethod a, SpectrumMethod b) { return to_string(a) < to_string(b); });

  if (j.contains("orders")) {
    const json& o = j.at("orders");
    check_keys(o, {"min", "max"}, "orders");
    if (!o.contains("min") || !o.contains("max")) throw ConfigError("orders: needs min and max");
    c.orders = {integer(o, "min", "orders"), integer(o, "max", "orders")};
    if (c.orders.min > c.orders.max) throw ConfigError("orders: min above max");
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    check_keys(t, {"quadrature", "ode", "shooting"}, "tolerances");
    if (auto v = optional_number(t, "quadrature", "tolerances")) c.tolerances.quadrature = *v;
    if (auto v = optional_number(t, "ode", "tolerances")) c.tolerances.ode = *v;
    if (auto v = optional_number(t, "shooting", "tolerances")) c.tolerances.shooting = *v;
  }
  require_positive(c.tolerances.quadrature, "tolerances.quadrature");
  require_positive(c.tolerances.ode, "tolerances.ode");
  require_positive(c.tolerances.shooting, "tolerances.shooting");
  if (j.contains("oracle")) {
    const json& o = j.at("oracle");
    check_keys(o, {"include_kinetic", "truncation"}, "oracle");
    if (o.contains("include_kinetic")) {
      if (!o.at("include_kinetic").is_boolean()) throw ConfigError("oracle.include_kinetic: expected a boolean");
      c.oracle.include_kinetic = o.at("include_kinetic").get<bool>();
    }
    if (o.contains("truncation")) c.oracle.truncation = integer(o, "truncation", "oracle");
    if (c.oracle.truncation < 0) throw ConfigError("oracle.truncation: must be >= 0");
  }
  if (j.contains("samples")) {
    c.samples = integer(j, "samples", "config");
    if (c.samples != 0 && (!is_power_of_two(c.samples) || c.samples < 64)) {
      throw ConfigError("config.samples: must be 0 or a power of two >= 64");
    }
  }
  if (j.contains("margin")) c.margin = number(j, "margin", "config");
  require_positive(c.margin, "config.margin");
  if (j.contains("feasibility")) {
    if (c.model.kind != ModelKind::evanescent) throw ConfigError("feasibility: only for the evanescent model");
    const json& f = j.at("feasibility");
    check_keys(f, {"gamma_over_delta", "n_target", "target_emission"}, "feasibility");
    FeasibilityConfig fc;
    if (auto v = optional_number(f, "gamma_over_delta", "feasibility")) fc.gamma_over_delta = *v;
    if (f.contains("n_target")) fc.n_target = integer(f, "n_target", "feasibility");
    if (auto v = optional_number(f, "target_emission", "feasibility")) fc.target_emission = *v;
    require_positive(fc.gamma_over_delta, "feasibility.gamma_over_delta");
    require_positive(fc.target_emission, "feasibility.target_emission");
    if (fc.n_target < 1) throw ConfigError("feasibility.n_target: must be >= 1");
    c.feasibility = fc;
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, {"csv", "plot_script"}, "output");
    for (const char* key : {"csv", "plot_script"}) {
      if (!o.contains(key)) continue;
      if (!o.at(key).is_string()) throw ConfigError(std::string("output.") + key + ": expected a string");
      (std::string(key) == "csv" ? c.output.csv : c.output.plot_script) = o.at(key).get<std::string>();
    }
  }

  // Catch unphysical combinations here rather than mid-run.
  try {
    const GratingModel g = c.grating();
    for (int i = 0; i < c.theta.count; ++i) {
      const BeamParameters b = c.beam(c.theta.at(i));
      if (const auto* ew = std::get_if<EvanescentGrating>(&g); ew && !ew->reflects(b)) {
        throw ConfigError("model.v1_in_recoil_energy: barrier too low to reflect the beam");
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "': " + e.what());
  }
  return parse_config(j);
}

}  // namespace phasegrating::cli
