// Command line front end: steady-state entanglement of the two magnon modes
// of a driven cavity with a parametric amplifier and a mechanical element.
//
// Exit codes: 0 success, 1 internal failure, 2 unstable operating point
// (point mode), 3 configuration problem.

#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "magnomech/config.hpp"
#include "magnomech/run.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string output_path;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* config = cmd->add_option("-c,--config", args.config_path,
                                 "JSON configuration file");
  if (config_required) config->required();
  cmd->add_option("-o,--out", args.output_path, "output CSV path (default from config)");
  cmd->add_option("-j,--threads", args.threads, "worker threads, 0 = all hardware threads")
      ->check(CLI::NonNegativeNumber);
}

int run_mode(magnomech::io::Mode mode, const CommonArgs& args) {
  magnomech::io::RunConfig config;
  if (args.config_path.empty()) {
    config = magnomech::io::default_config(mode);
  } else {
    config = magnomech::io::parse_config(args.config_path, mode);
  }
  if (!args.output_path.empty()) config.output_path = args.output_path;

  magnomech::io::RunOptions options;
  options.threads = args.threads;
  return magnomech::io::run(config, options);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steady-state magnon-magnon entanglement in a driven"
               " magnomechanical cavity"};
  app.require_subcommand(1);

  CommonArgs point_args, sweep_args, optimize_args, stability_args;
  CLI::App* point = app.add_subcommand("point", "single operating point");
  add_common(point, point_args, /*config_required=*/false);
  CLI::App* sweep = app.add_subcommand("sweep", "scan one or two parameters on a grid");
  add_common(sweep, sweep_args, /*config_required=*/true);
  CLI::App* optimize = app.add_subcommand("optimize", "maximize E_N over 1-3 parameters");
  add_common(optimize, optimize_args, /*config_required=*/true);
  CLI::App* stability =
      app.add_subcommand("stability", "map the dynamically stable region of a grid");
  add_common(stability, stability_args, /*config_required=*/true);

  std::string plot_csv;
  std::string plot_kind;
  std::string plot_out;
  CLI::App* plot = app.add_subcommand("plot", "write a python script rendering a results CSV");
  plot->add_option("csv", plot_csv, "results CSV produced by sweep")->required();
  plot->add_option("-k,--kind", plot_kind, "heatmap (2D sweeps) or curve (1D sweeps)")
      ->required()
      ->check(CLI::IsMember({"heatmap", "curve"}));
  plot->add_option("-o,--out", plot_out, "script path (default: CSV path with .py)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (point->parsed()) return run_mode(magnomech::io::Mode::point, point_args);
    if (sweep->parsed()) return run_mode(magnomech::io::Mode::sweep, sweep_args);
    if (optimize->parsed()) return run_mode(magnomech::io::Mode::optimize, optimize_args);
    if (stability->parsed()) return run_mode(magnomech::io::Mode::stability, stability_args);
    if (plot->parsed()) {
      std::filesystem::path script = plot_out.empty()
                                         ? std::filesystem::path(plot_csv).replace_extension(".py")
                                         : std::filesystem::path(plot_out);
      magnomech::io::emit_plot_script(plot_csv, plot_kind, script);
      return 0;
    }
  } catch (const magnomech::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const magnomech::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
