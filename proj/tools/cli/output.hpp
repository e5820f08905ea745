#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/runner.hpp"

namespace phasegrating::cli {

// Floats with 17 significant digits, so CSV values round-trip exactly.
std::string format_double(double x);

void write_spectrum_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_compare_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);
nlohmann::json validation_json(const std::vector<ValidationPoint>& points);

// gnuplot script drawing population against theta, one curve per (method, n).
void write_plot_script(std::ostream& out, const std::filesystem::path& csv, const std::vector<ResultRow>& rows);

}  // namespace phasegrating::cli
