#include "magnomech/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace magnomech::io {

using nlohmann::json;
using nlohmann::ordered_json;
using constants::two_pi;

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::point: return "point";
    case Mode::sweep: return "sweep";
    case Mode::optimize: return "optimize";
    case Mode::stability: return "stability";
  }
  return "?";
}

Mode mode_from_string(std::string_view name) {
  for (Mode m : {Mode::point, Mode::sweep, Mode::optimize, Mode::stability}) {
    if (name == to_string(m)) return m;
  }
  throw ConfigError("unknown mode \"" + std::string(name) +
                    "\" (expected point, sweep, optimize or stability)");
}

RunConfig default_config(Mode mode) {
  RunConfig config;
  config.mode = mode;
  config.params = PhysicalParams::baseline();
  config.output_path = std::string(to_string(mode)) + ".csv";
  return config;
}

namespace {

// Parameter block: configuration quotes ordinary frequencies nu = omega/2pi
// in Hz; members are angular rad/s.
struct ParamKey {
  const char* key;
  double PhysicalParams::* member;
  bool hz;
};

constexpr ParamKey kParamKeys[] = {
    {"omega_b_hz", &PhysicalParams::omega_b, true},
    {"delta_c_hz", &PhysicalParams::delta_c, true},
    {"delta_1_hz", &PhysicalParams::delta_1, true},
    {"delta_2_hz", &PhysicalParams::delta_2, true},
    {"kappa_c_hz", &PhysicalParams::kappa_c, true},
    {"kappa_1_hz", &PhysicalParams::kappa_1, true},
    {"kappa_2_hz", &PhysicalParams::kappa_2, true},
    {"gamma_b_hz", &PhysicalParams::gamma_b, true},
    {"g_1_hz", &PhysicalParams::g_1, true},
    {"g_2_hz", &PhysicalParams::g_2, true},
    {"G_mb_hz", &PhysicalParams::G_mb, true},
    {"G_pa_hz", &PhysicalParams::G_pa, true},
    {"theta", &PhysicalParams::theta, false},
    {"kerr_k_hz", &PhysicalParams::kerr_shift_k, true},
    {"temperature_K", &PhysicalParams::temperature, false},
    {"omega_c_hz", &PhysicalParams::omega_c, true},
    {"omega_m1_hz", &PhysicalParams::omega_m1, true},
    {"omega_m2_hz", &PhysicalParams::omega_m2, true},
};

// Error reporting with best-effort line addressing: JSON syntax errors carry a
// byte offset; semantic errors are located by searching for the quoted key.
struct ParseContext {
  std::string filename;
  std::string text;

  int line_of_byte(std::size_t byte) const {
    const std::size_t end = std::min(byte, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + end, '\n'));
  }

  int line_of_key(const std::string& key) const {
    const std::size_t pos = text.find('"' + key + '"');
    if (pos == std::string::npos) return 0;
    return line_of_byte(pos);
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    std::ostringstream msg;
    msg << filename << ":";
    if (const int line = line_of_key(key); line > 0) msg << line << ":";
    msg << " " << message;
    if (!key.empty()) msg << " (key \"" << key << "\")";
    throw ConfigError(msg.str());
  }
};

double require_number(const ParseContext& ctx, const json& v, const std::string& key) {
  if (!v.is_number()) ctx.fail(key, "must be a number (got " + std::string(v.type_name()) + ")");
  const double d = v.get<double>();
  if (!std::isfinite(d)) ctx.fail(key, "must be finite");
  return d;
}

int require_integer(const ParseContext& ctx, const json& v, const std::string& key) {
  if (!v.is_number_integer()) {
    ctx.fail(key, "must be an integer (got " + std::string(v.type_name()) + ")");
  }
  const auto n = v.get<std::int64_t>();
  if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max()) {
    ctx.fail(key, "out of range");
  }
  return static_cast<int>(n);
}

std::string require_string(const ParseContext& ctx, const json& v, const std::string& key) {
  if (!v.is_string()) ctx.fail(key, "must be a string (got " + std::string(v.type_name()) + ")");
  return v.get<std::string>();
}

void reject_unknown_keys(const ParseContext& ctx, const json& object,
                         std::initializer_list<std::string_view> known,
                         const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      ctx.fail(key, "unknown key in " + where);
    }
  }
}

void parse_params(const ParseContext& ctx, const json& block, PhysicalParams& params) {
  if (!block.is_object()) ctx.fail("params", "must be an object");
  for (const auto& [key, value] : block.items()) {
    const ParamKey* match = nullptr;
    for (const ParamKey& pk : kParamKeys) {
      if (key == pk.key) {
        match = &pk;
        break;
      }
    }
    if (match == nullptr) ctx.fail(key, "unknown parameter");
    const double v = require_number(ctx, value, key);
    params.*(match->member) = match->hz ? v * two_pi : v;
  }
  try {
    validate(params);
  } catch (const InvalidInput& e) {
    ctx.fail("params", e.what());
  }
}

std::vector<AxisSpec> parse_axes(const ParseContext& ctx, const json& block) {
  if (!block.is_array()) ctx.fail("axes", "must be an array of axis objects");
  std::vector<AxisSpec> axes;
  for (const json& entry : block) {
    if (!entry.is_object()) ctx.fail("axes", "each axis must be an object");
    reject_unknown_keys(ctx, entry, {"parameter", "start", "stop", "points"}, "axis");
    for (const char* required : {"parameter", "start", "stop", "points"}) {
      if (!entry.contains(required)) {
        ctx.fail("axes", std::string("axis is missing \"") + required + "\"");
      }
    }
    AxisSpec axis;
    axis.parameter =
        sweep_parameter_from_string(require_string(ctx, entry.at("parameter"), "parameter"));
    axis.start = require_number(ctx, entry.at("start"), "start");
    axis.stop = require_number(ctx, entry.at("stop"), "stop");
    axis.points = require_integer(ctx, entry.at("points"), "points");
    axes.push_back(axis);
  }
  try {
    validate_axes(axes);
  } catch (const ConfigError& e) {
    ctx.fail("axes", e.what());
  }
  return axes;
}

void parse_optimize_block(const ParseContext& ctx, const json& free_block,
                          const json& bounds_block, RunConfig& config) {
  if (!free_block.is_array()) ctx.fail("free", "must be an array of parameter names");
  for (const json& entry : free_block) {
    config.free_parameters.push_back(
        sweep_parameter_from_string(require_string(ctx, entry, "free")));
  }
  if (!bounds_block.is_array()) ctx.fail("bounds", "must be an array of [lo, hi] pairs");
  for (const json& entry : bounds_block) {
    if (!entry.is_array() || entry.size() != 2) {
      ctx.fail("bounds", "each bound must be a [lo, hi] pair");
    }
    config.bounds.push_back({require_number(ctx, entry.at(0), "bounds"),
                             require_number(ctx, entry.at(1), "bounds")});
  }
  try {
    validate_optimize(config.free_parameters, config.bounds);
  } catch (const ConfigError& e) {
    ctx.fail("bounds", e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::filesystem::path& file, std::optional<Mode> cli_mode) {
  ParseContext ctx;
  ctx.filename = file.string();
  {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot open configuration file " + ctx.filename);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    ctx.text = buffer.str();
  }

  json root;
  try {
    root = json::parse(ctx.text);
  } catch (const json::parse_error& e) {
    std::ostringstream msg;
    msg << ctx.filename << ":" << ctx.line_of_byte(e.byte) << ": malformed JSON: " << e.what();
    throw ConfigError(msg.str());
  }
  if (!root.is_object()) {
    throw ConfigError(ctx.filename + ": configuration root must be a JSON object");
  }
  reject_unknown_keys(ctx, root, {"mode", "params", "axes", "free", "bounds", "output_path"},
                      "configuration");

  // Mode: from the file, the caller, or both in agreement.
  std::optional<Mode> file_mode;
  if (root.contains("mode")) {
    file_mode = mode_from_string(require_string(ctx, root.at("mode"), "mode"));
  }
  if (file_mode && cli_mode && *file_mode != *cli_mode) {
    ctx.fail("mode", std::string("file says \"") + std::string(to_string(*file_mode)) +
                         "\" but the requested mode is \"" + std::string(to_string(*cli_mode)) +
                         "\"");
  }
  if (!file_mode && !cli_mode) {
    throw ConfigError(ctx.filename + ": no mode given (neither in the file nor by the caller)");
  }

  RunConfig config = default_config(file_mode ? *file_mode : *cli_mode);

  if (root.contains("params")) parse_params(ctx, root.at("params"), config.params);

  const bool needs_axes = config.mode == Mode::sweep || config.mode == Mode::stability;
  if (root.contains("axes") && !needs_axes) {
    ctx.fail("axes", std::string("not allowed in ") + std::string(to_string(config.mode)) +
                         " mode");
  }
  if (needs_axes) {
    if (!root.contains("axes")) {
      throw ConfigError(ctx.filename + ": " + std::string(to_string(config.mode)) +
                        " mode requires an \"axes\" block");
    }
    config.axes = parse_axes(ctx, root.at("axes"));
  }

  const bool needs_free = config.mode == Mode::optimize;
  for (const char* key : {"free", "bounds"}) {
    if (root.contains(key) && !needs_free) {
      ctx.fail(key, std::string("not allowed in ") + std::string(to_string(config.mode)) +
                        " mode");
    }
  }
  if (needs_free) {
    if (!root.contains("free") || !root.contains("bounds")) {
      throw ConfigError(ctx.filename + ": optimize mode requires \"free\" and \"bounds\" blocks");
    }
    parse_optimize_block(ctx, root.at("free"), root.at("bounds"), config);
  }

  if (root.contains("output_path")) {
    config.output_path = require_string(ctx, root.at("output_path"), "output_path");
    if (config.output_path.empty()) ctx.fail("output_path", "must be a nonempty path");
  }

  return config;
}

std::string write_config(const RunConfig& config) {
  ordered_json root;
  root["mode"] = std::string(to_string(config.mode));

  ordered_json params;
  for (const ParamKey& pk : kParamKeys) {
    const double v = config.params.*(pk.member);
    params[pk.key] = pk.hz ? v / two_pi : v;
  }
  root["params"] = std::move(params);

  if (config.mode == Mode::sweep || config.mode == Mode::stability) {
    ordered_json axes = ordered_json::array();
    for (const AxisSpec& axis : config.axes) {
      axes.push_back({{"parameter", std::string(to_string(axis.parameter))},
                      {"start", axis.start},
                      {"stop", axis.stop},
                      {"points", axis.points}});
    }
    root["axes"] = std::move(axes);
  }
  if (config.mode == Mode::optimize) {
    ordered_json free_block = ordered_json::array();
    for (SweepParameter p : config.free_parameters) {
      free_block.push_back(std::string(to_string(p)));
    }
    root["free"] = std::move(free_block);
    ordered_json bounds_block = ordered_json::array();
    for (const auto& [lo, hi] : config.bounds) bounds_block.push_back({lo, hi});
    root["bounds"] = std::move(bounds_block);
  }
  root["output_path"] = config.output_path;

  return root.dump(2) + "\n";
}

}  // namespace magnomech::io
