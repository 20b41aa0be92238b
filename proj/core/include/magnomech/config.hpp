#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "magnomech/sweep.hpp"

// Configuration parsing for the CLI. Configuration files are UTF-8 JSON with
// a strict schema: unknown keys are rejected, values are strictly typed, and
// all frequencies are ordinary frequencies nu = omega/2pi in Hz (converted to
// angular units at this boundary). Missing parameters default to the baseline
// working point documented on PhysicalParams::baseline().

namespace magnomech::io {

enum class Mode { point, sweep, optimize, stability };

std::string_view to_string(Mode m);
// Throws ConfigError for an unknown name.
Mode mode_from_string(std::string_view name);

struct RunConfig {
  Mode mode = Mode::point;
  PhysicalParams params = PhysicalParams::baseline();
  // sweep / stability modes only (1 or 2 axes).
  std::vector<AxisSpec> axes;
  // optimize mode only (1-3 parameters with matching bounds).
  std::vector<SweepParameter> free_parameters;
  std::vector<std::array<double, 2>> bounds;
  std::string output_path;  // defaulted to "<mode>.csv" when absent
};

// A fully defaulted config for the given mode (sweep/optimize/stability
// configs still need their mode block filled in to be runnable).
RunConfig default_config(Mode mode);

// Parses and fully validates a configuration file. The JSON may carry a
// "mode" key; if cli_mode is also given the two must agree. Exactly one
// source of the mode is required. Errors carry the offending key path and,
// where recoverable, the line in the file. Throws ConfigError.
RunConfig parse_config(const std::filesystem::path& file,
                       std::optional<Mode> cli_mode = std::nullopt);

// Canonical JSON serialization (full parameter block, Hz at the boundary).
// parse_config(write_config(c)) reproduces c up to floating-point round-trip
// of the Hz <-> rad/s conversion (a few ulp).
std::string write_config(const RunConfig& config);

}  // namespace magnomech::io
