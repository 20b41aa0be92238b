#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "magnomech/config.hpp"

// Execution of a parsed RunConfig and the file formats of the results.
//
// CSV format: "\n" line endings, floats in 9-significant-digit scientific
// notation ("%.8e"), headers fixed per mode:
//   point      "stable,nu_minus,E_N" (single data row)
//   sweep      "<axis cols>,stable,nu_minus,E_N", row-major (first axis outer)
//   stability  "<axis cols>,stable"
//   optimize   "eval,<free-parameter cols>,E_N" (one row per evaluation)
// Unstable cells serialize as stable=0, nu_minus=0, E_N=0.

namespace magnomech::io {

struct RunOptions {
  int threads = 0;            // 0 = one worker per hardware thread
  std::ostream* out = nullptr;  // stdout target; nullptr = std::cout
};

// Executes the configured mode and writes the CSV to config.output_path.
// `point` additionally prints "stable=<0|1> nu_minus=<v> E_N=<v>";
// `optimize` prints a "best ..." summary line. Returns the process exit
// code: 0 on success, 2 for an unstable point run. Configuration problems
// throw ConfigError (exit 3 in the CLI); internal solver failures propagate
// as other exceptions (exit 1).
int run(const RunConfig& config, const RunOptions& options = {});

// Writes a self-contained python/matplotlib script that renders a results
// CSV produced by `run`: kind "heatmap" for 2D sweeps, "curve" for 1D
// sweeps. The script references the CSV by a path relative to its own
// location and its bytes are deterministic for fixed inputs. Throws
// ConfigError when the CSV header does not match the declared kind.
void emit_plot_script(const std::filesystem::path& sweep_csv, std::string_view kind,
                      const std::filesystem::path& script_path);

// "%.8e" formatting used for every float in CSV and stdout lines.
std::string format_float(double value);

}  // namespace magnomech::io
