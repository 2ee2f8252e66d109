// Command-line front end: efficiency, congestion, directional and sweep
// reports over a CSV dataset.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "dea/error.hpp"
#include "dea/io.hpp"

namespace {

constexpr int kInputError = 1;
constexpr int kNumericalError = 2;

struct Options {
  std::string data;
  std::string dmu = "all";
  std::string grid = "diag";
  std::string method = "both";
  std::string format = "csv";
  double t0 = 1e-6;
  double tol = 1e-6;
  bool with_fgl = false;
  bool with_ctt = false;
  bool full_precision = false;
};

dea::directional::Method parse_method(const std::string& name) {
  if (name == "fdm") return dea::directional::Method::Fdm;
  if (name == "ulbm") return dea::directional::Method::Ulbm;
  if (name == "both") return dea::directional::Method::Both;
  throw dea::InputError("unknown method '" + name + "' (fdm, ulbm, both)");
}

dea::io::RunConfig make_config(const Options& o) {
  if (!(o.tol > 0)) throw dea::InputError("--tol must be positive");
  dea::io::RunConfig c;
  c.tol.classification = o.tol;
  c.steps.t_initial = o.t0;
  c.steps.validate();
  c.method = parse_method(o.method);
  c.format = dea::io::parse_format(o.format);
  c.full_precision = o.full_precision;
  c.with_fgl = o.with_fgl;
  c.with_ctt = o.with_ctt;
  return c;
}

int run(const std::string& verb, const Options& o) {
  const auto config = make_config(o);
  const auto data = dea::io::load_dataset(o.data);
  const auto dmus = dea::io::select_dmus(data, o.dmu);
  if (verb == "efficiency") {
    dea::io::write_table(std::cout, dea::io::cmd_efficiency(data, dmus, config), config.format);
    return 0;
  }
  if (verb == "congestion") {
    dea::io::write_table(std::cout, dea::io::cmd_congestion(data, dmus, config), config.format);
    return 0;
  }
  const auto grid = dea::io::parse_direction_grid(o.grid, data.num_inputs(), data.num_outputs());
  const auto report = verb == "sweep" ? dea::io::cmd_sweep(data, dmus, grid, config)
                                      : dea::io::cmd_directional(data, dmus, grid, config);
  dea::io::write_table(std::cout, report.table, config.format);
  if (report.errors == 0) return 0;
  std::cerr << "dea: " << report.errors << " row(s) failed\n";
  return report.only_input_errors ? kInputError : kNumericalError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Congestion and directional congestion analysis on the convex production set"};
  app.require_subcommand(1, 1);
  Options o;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--data", o.data, "CSV dataset with in:/out: columns")->required();
    cmd->add_option("--dmu", o.dmu, "DMU label, 1-based index, or all")->capture_default_str();
    cmd->add_option("--format", o.format, "csv, tsv or md")->capture_default_str();
    cmd->add_option("--tol", o.tol, "classification tolerance")->capture_default_str();
    cmd->add_flag("--full-precision", o.full_precision, "print shortest round-trip numbers");
  };
  auto* efficiency = app.add_subcommand("efficiency", "theta, pi and phi per DMU");
  add_common(efficiency);
  auto* congestion = app.add_subcommand("congestion", "No/Weak/Strong congestion per DMU");
  add_common(congestion);
  congestion->add_flag("--with-fgl", o.with_fgl, "add weak-disposability columns");
  congestion->add_flag("--with-ctt", o.with_ctt, "add per-input slack congestion columns");
  for (const char* name : {"directional", "sweep"}) {
    auto* cmd = app.add_subcommand(name, std::string(name) == "sweep"
                                             ? "verdict counts per DMU over a direction grid"
                                             : "right/left directional congestion per direction");
    add_common(cmd);
    cmd->add_option("--grid", o.grid, "'diag' or 'omega=a,b|delta=c,d;...' or @file")
        ->capture_default_str();
    cmd->add_option("--method", o.method, "fdm, ulbm or both")->capture_default_str();
    cmd->add_option("--t0", o.t0, "initial finite-difference step")->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    return run(app.get_subcommands().front()->get_name(), o);
  } catch (const dea::InputError& e) {
    std::cerr << "dea: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "dea: " << e.what() << '\n';
    return kNumericalError;
  }
}
