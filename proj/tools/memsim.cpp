#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "memsim/commands.hpp"

int main(int argc, char** argv) {
  using namespace memsim::cli;

  CLI::App app{"Memory-element simulator and pinched-hysteresis classifier", "memsim"};
  app.require_subcommand(1);
  app.fallthrough();

  OutputOptions out_opts;
  std::string out_dir = ".";
  app.add_option("--out-dir", out_dir, "Directory for output files")->capture_default_str();
  app.add_flag("--svg", out_opts.svg, "Also write loop.svg");

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "Run a configuration and classify its steady loop");
  simulate->add_option("config", config_path, "key = value run configuration")->required();

  std::string csv_path;
  ClassifyOptions cls;
  double period = 0.0;
  auto* classify = app.add_subcommand("classify", "Classify a loop read from CSV");
  classify->add_option("csv", csv_path, "CSV file with a header row")->required();
  classify->add_option("--u-col", cls.u_col, "Input column")->capture_default_str();
  classify->add_option("--y-col", cls.y_col, "Response column")->capture_default_str();
  classify->add_option("--t-col", cls.t_col, "Time column (with --period)")->capture_default_str();
  auto* period_opt = classify->add_option(
      "--period", period, "Drive period; classify the steady last period of a time series");
  classify->add_option("--steady-tol", cls.steady_tol, "Period-to-period tolerance")
      ->capture_default_str();
  classify->add_option("--gap-tol", cls.tolerances.gap_tol)->capture_default_str();
  classify->add_option("--slope-tol", cls.tolerances.slope_tol)->capture_default_str();
  classify->add_option("--area-tol", cls.tolerances.area_tol)->capture_default_str();

  std::string sweep_config, param, values;
  auto* sweep = app.add_subcommand("sweep", "Repeat a run over values of one parameter");
  sweep->add_option("config", sweep_config, "key = value run configuration")->required();
  sweep->add_option("--param", param, "Config key to vary, e.g. drive.amplitude")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }
  out_opts.dir = out_dir;

  if (*simulate)
    return cmd_simulate(config_path, out_opts, std::cout, std::cerr);
  if (*classify) {
    if (*period_opt)
      cls.period = period;
    return cmd_classify(csv_path, cls, std::cout, std::cerr);
  }
  return guarded(std::cerr, [&] {
    return cmd_sweep(sweep_config, param, split_values(values), out_opts, std::cout, std::cerr);
  });
}
