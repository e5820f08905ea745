#include "cli/commands.hpp"

#include <fstream>
#include <optional>

#include <CLI11.hpp>

#include "cli/config.hpp"
#include "cli/output.hpp"
#include "cli/runner.hpp"
#include "phasegrating/errors.hpp"

namespace phasegrating::cli {

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<double> margin;
  int jobs = 1;
};

void add_common(CLI::App& cmd, Options& o) {
  cmd.add_option("--config", o.config, "JSON run configuration")->required();
  cmd.add_option("--out", o.out, "output file (default: config output.csv, else stdout)");
  cmd.add_option("--margin", o.margin, "validity margin, overrides the config")->check(CLI::PositiveNumber);
  cmd.add_option("--jobs", o.jobs, "threads for the theta scan")->check(CLI::Range(1, 1024));
}

RunConfig prepare(const Options& o) {
  RunConfig c = load_config(o.config);
  if (o.margin) c.margin = *o.margin;
  if (!o.out.empty()) c.output.csv = o.out;
  return c;
}

template <typename Write>
void emit(const std::optional<std::string>& path, std::ostream& fallback, Write write) {
  if (!path) {
    write(fallback);
    return;
  }
  std::ofstream file(*path, std::ios::binary);
  if (!file) throw ConfigError("cannot write '" + *path + "'");
  write(file);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Atomic diffraction by thin phase gratings", "phasegrating"};
  app.require_subcommand(1);
  Options opts;
  CLI::App* spectrum = app.add_subcommand("spectrum", "populations and phases per order over a theta scan");
  CLI::App* compare = app.add_subcommand("compare", "population and phase deltas between methods");
  CLI::App* validate = app.add_subcommand("validate", "validity conditions and mirror feasibility as JSON");
  for (CLI::App* cmd : {spectrum, compare, validate}) add_common(*cmd, opts);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "phasegrating: " << e.what() << '\n';
    return exit_config;
  }

  try {
    const RunConfig c = prepare(opts);
    if (spectrum->parsed()) {
      const auto rows = run_spectrum(c, opts.jobs);
      emit(c.output.csv, out, [&](std::ostream& s) { write_spectrum_csv(s, rows); });
      if (c.output.plot_script) {
        emit(c.output.plot_script, out, [&](std::ostream& s) {
          write_plot_script(s, c.output.csv.value_or("spectrum.csv"), rows);
        });
      }
      return exit_ok;
    }
    if (compare->parsed()) {
      const auto rows = run_compare(c, opts.jobs);
      emit(c.output.csv, out, [&](std::ostream& s) { write_compare_csv(s, rows); });
      return exit_ok;
    }
    const auto points = run_validate(c);
    const std::optional<std::string> path = opts.out.empty() ? std::nullopt : std::optional(opts.out);
    emit(path, out, [&](std::ostream& s) { s << validation_json(points).dump(2) << '\n'; });
    for (const auto& p : points) {
      if (!p.report.all_ok()) return exit_validity;
    }
    return exit_ok;
  } catch (const ConfigError& e) {
    err << "phasegrating: config error: " << e.what() << '\n';
    return exit_config;
  } catch (const RunError& e) {
    err << "phasegrating: numerical failure: " << e.what() << '\n';
    return exit_numeric;
  } catch (const NumericalError& e) {
    err << "phasegrating: numerical failure: " << e.what() << '\n';
    return exit_numeric;
  }
}

}  // namespace phasegrating::cli
