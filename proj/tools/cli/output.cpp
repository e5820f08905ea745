#include "cli/output.hpp"

#include <cstdio>
#include <map>
#include <utility>

namespace phasegrating::cli {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_spectrum_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "theta_rad,n,population,phase_rad,method,eta,flags\n";
  for (const ResultRow& r : rows) {
    out << format_double(r.theta) << ',' << r.n << ',' << format_double(r.population) << ','
        << format_double(r.phase) << ',' << to_string(r.method) << ',' << format_double(r.eta) << ',' << r.flags
        << '\n';
  }
}

void write_compare_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "theta_rad,n,method_a,method_b,population_delta,phase_delta_rad\n";
  for (const ComparisonRow& r : rows) {
    out << format_double(r.theta) << ',' << r.order << ',' << to_string(r.method_a) << ','
        << to_string(r.method_b) << ',' << format_double(r.population_delta) << ','
        << format_double(r.phase_delta) << '\n';
  }
}

json validation_json(const std::vector<ValidationPoint>& points) {
  json arr = json::array();
  for (const ValidationPoint& p : points) {
    const ValidityReport& r = p.report;
    json v = {{"u", r.u},
              {"beta", r.beta},
              {"eta", r.eta},
              {"rn_param", r.rn_param},
              {"dp_max", r.dp_max},
              {"dr_max", r.dr_max},
              {"n_max", r.n_max},
              {"margin", r.margin},
              {"perturbation_ratio", r.perturbation_ratio},
              {"displacement_ratio", r.displacement_ratio},
              {"wkb_ratio", r.wkb_ratio},
              {"rn_ratio", r.rn_ratio},
              {"perturbation_ok", r.perturbation_ok},
              {"displacement_ok", r.displacement_ok},
              {"wkb_ok", r.wkb_ok},
              {"rn_ok", r.rn_ok},
              {"perturbative_trivial", r.perturbative_trivial},
              {"all_ok", r.all_ok()}};
    json point = {{"theta_rad", p.theta}, {"validity", v}};
    if (p.feasibility) {
      const FeasibilityReport& f = *p.feasibility;
      point["feasibility"] = {{"min_p_iz_raw", f.min_p_iz_raw},
                              {"min_p_iz", f.min_p_iz},
                              {"p_iz", f.p_iz},
                              {"p_sp", f.p_sp},
                              {"required_detuning_ratio", f.required_detuning_ratio},
                              {"required_barrier", f.required_barrier},
                              {"barrier", f.barrier},
                              {"momentum_ok", f.momentum_ok},
                              {"barrier_ok", f.barrier_ok}};
    }
    arr.push_back(std::move(point));
  }
  return arr;
}

void write_plot_script(std::ostream& out, const std::filesystem::path& csv, const std::vector<ResultRow>& rows) {
  std::map<std::pair<std::string, int>, bool> curves;
  for (const ResultRow& r : rows) curves[{std::string(to_string(r.method)), r.n}] = true;
  out << "set datafile separator ','\n"
      << "set xlabel 'theta (rad)'\n"
      << "set ylabel 'population'\n"
      << "set key outside\n"
      << "plot \\\n";
  std::size_t i = 0;
  for (const auto& [key, unused] : curves) {
    (void)unused;
    out << "  '" << csv.string() << "' using 1:(strcol(5) eq '" << key.first << "' && $2 == " << key.second
        << " ? $3 : 1/0) with lines title '" << key.first << " n=" << key.second << "'"
        << (++i < curves.size() ? ", \\\n" : "\n");
  }
}

}  // namespace phasegrating::cli
