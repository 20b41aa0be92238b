#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "magnomech/config.hpp"

using namespace magnomech;
using namespace magnomech::io;
using constants::two_pi;

namespace {

std::filesystem::path write_temp(const std::string& text) {
  static int counter = 0;
  const auto path = std::filesystem::temp_directory_path() /
                    ("magnomech_cfg_" + std::to_string(++counter) + ".json");
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path;
}

std::string error_text(const std::filesystem::path& file, std::optional<Mode> mode = {}) {
  try {
    (void)parse_config(file, mode);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("defaults") {
  const RunConfig c = default_config(Mode::sweep);
  CHECK(c.mode == Mode::sweep);
  CHECK(c.output_path == "sweep.csv");
  CHECK(c.params.omega_b == PhysicalParams::baseline().omega_b);
  CHECK(c.axes.empty());
  CHECK(default_config(Mode::point).output_path == "point.csv");
}

TEST_CASE("mode names round-trip") {
  for (Mode m : {Mode::point, Mode::sweep, Mode::optimize, Mode::stability}) {
    CHECK(mode_from_string(to_string(m)) == m);
  }
  CHECK_THROWS_AS((void)mode_from_string("scan"), ConfigError);
}

TEST_CASE("minimal configuration inherits the baseline") {
  const auto file = write_temp(R"({"mode": "point"})");
  const RunConfig c = parse_config(file);
  CHECK(c.mode == Mode::point);
  CHECK(c.params.g_1 == two_pi * 3.2e6);
  CHECK(c.output_path == "point.csv");
}

TEST_CASE("frequencies are quoted in hertz, angles and kelvin as-is") {
  const auto file = write_temp(R"({
    "mode": "point",
    "params": {"delta_c_hz": -4.5e6, "theta": 1.25, "temperature_K": 0.2,
               "G_pa_hz": 0.0, "kerr_k_hz": 2.0e6}
  })");
  const RunConfig c = parse_config(file);
  CHECK(c.params.delta_c == -two_pi * 4.5e6);
  CHECK(c.params.theta == 1.25);
  CHECK(c.params.temperature == 0.2);
  CHECK(c.params.G_pa == 0.0);
  CHECK(c.params.kerr_shift_k == two_pi * 2.0e6);
  // Untouched keys keep their baseline values.
  CHECK(c.params.g_2 == two_pi * 2.6e6);
}

TEST_CASE("unknown keys are rejected with a line-addressed message") {
  const auto file = write_temp("{\n  \"mode\": \"point\",\n  \"bogus\": 1\n}");
  const std::string msg = error_text(file);
  CHECK(msg.find("bogus") != std::string::npos);
  CHECK(msg.find(":3:") != std::string::npos);

  const auto file2 = write_temp(R"({"mode": "point", "params": {"delta_Q_hz": 1.0}})");
  CHECK(error_text(file2).find("delta_Q_hz") != std::string::npos);
}

TEST_CASE("malformed JSON reports the line") {
  const auto file = write_temp("{\n  \"mode\": \"point\"\n  \"params\": {}\n}");
  const std::string msg = error_text(file);
  CHECK(msg.find("malformed JSON") != std::string::npos);
  CHECK(msg.find(":3:") != std::string::npos);
  CHECK_THROWS_AS((void)parse_config("/nonexistent/path.json", Mode::point), ConfigError);
}

TEST_CASE("strict typing") {
  CHECK(!error_text(write_temp(R"({"mode": "point", "params": {"theta": true}})")).empty());
  CHECK(!error_text(write_temp(R"({"mode": "point", "params": {"theta": "0.5"}})")).empty());
  CHECK(!error_text(write_temp(R"({"mode": 3})")).empty());
  // Axis point counts must be genuine integers.
  const auto file = write_temp(R"({
    "mode": "sweep",
    "axes": [{"parameter": "delta_c", "start": -1.0, "stop": 1.0, "points": 11.0}]
  })");
  CHECK(error_text(file).find("points") != std::string::npos);
  CHECK(!error_text(write_temp(R"([1, 2, 3])")).empty());
}

TEST_CASE("mode reconciliation between file and caller") {
  const auto file = write_temp(R"({"mode": "sweep",
    "axes": [{"parameter": "delta_c", "start": -1.0, "stop": 1.0, "points": 3}]})");
  CHECK(parse_config(file).mode == Mode::sweep);
  CHECK(parse_config(file, Mode::sweep).mode == Mode::sweep);
  CHECK_THROWS_AS((void)parse_config(file, Mode::point), ConfigError);

  const auto bare = write_temp(R"({"params": {"theta": 0.5}})");
  CHECK_THROWS_AS((void)parse_config(bare), ConfigError);  // no mode anywhere
  CHECK(parse_config(bare, Mode::point).mode == Mode::point);
}

TEST_CASE("each mode demands exactly its own blocks") {
  // point must not carry grid or optimizer blocks.
  CHECK(!error_text(write_temp(R"({"mode": "point",
    "axes": [{"parameter": "delta_c", "start": -1.0, "stop": 1.0, "points": 3}]})"))
             .empty());
  CHECK(!error_text(write_temp(R"({"mode": "point", "free": ["theta"]})")).empty());
  // sweep and stability need axes.
  CHECK(!error_text(write_temp(R"({"mode": "sweep"})")).empty());
  CHECK(!error_text(write_temp(R"({"mode": "stability"})")).empty());
  // optimize needs both free and bounds.
  CHECK(!error_text(write_temp(R"({"mode": "optimize", "free": ["theta"]})")).empty());
  CHECK(!error_text(write_temp(R"({"mode": "optimize", "bounds": [[0.0, 1.0]]})")).empty());
}

TEST_CASE("axes block round-trips into validated specs") {
  const auto file = write_temp(R"({
    "mode": "stability",
    "axes": [
      {"parameter": "G_pa", "start": 0.0, "stop": 2.0e6, "points": 21},
      {"parameter": "theta", "start": 0.0, "stop": 6.283185307179586, "points": 9}
    ]
  })");
  const RunConfig c = parse_config(file);
  REQUIRE(c.axes.size() == 2);
  CHECK(c.axes[0].parameter == SweepParameter::G_pa);
  CHECK(c.axes[0].stop == 2.0e6);
  CHECK(c.axes[1].points == 9);

  // Axis-level mistakes: missing key, stray key, unknown parameter, bad grid.
  CHECK(!error_text(write_temp(R"({"mode": "sweep",
    "axes": [{"parameter": "delta_c", "start": -1.0, "points": 3}]})"))
             .empty());
  CHECK(!error_text(write_temp(R"({"mode": "sweep",
    "axes": [{"parameter": "delta_c", "start": -1.0, "stop": 1.0, "points": 3, "step": 0.1}]})"))
             .empty());
  CHECK(!error_text(write_temp(R"({"mode": "sweep",
    "axes": [{"parameter": "delta_x", "start": -1.0, "stop": 1.0, "points": 3}]})"))
             .empty());
  CHECK(!error_text(write_temp(R"({"mode": "sweep",
    "axes": [{"parameter": "delta_c", "start": -1.0, "stop": 1.0, "points": 1}]})"))
             .empty());
  CHECK(!error_text(write_temp(R"({"mode": "sweep", "axes": []})")).empty());
  CHECK(!error_text(write_temp(R"({"mode": "sweep", "axes": [
      {"parameter": "delta_c", "start": -1.0, "stop": 1.0, "points": 3},
      {"parameter": "delta_c", "start": -1.0, "stop": 1.0, "points": 3}]})"))
             .empty());
}

TEST_CASE("optimize block round-trips into validated requests") {
  const auto file = write_temp(R"({
    "mode": "optimize",
    "free": ["theta", "G_pa"],
    "bounds": [[0.0, 6.283185307179586], [0.0, 2.0e6]]
  })");
  const RunConfig c = parse_config(file);
  REQUIRE(c.free_parameters.size() == 2);
  CHECK(c.free_parameters[0] == SweepParameter::theta);
  CHECK(c.free_parameters[1] == SweepParameter::G_pa);
  REQUIRE(c.bounds.size() == 2);
  CHECK(c.bounds[1][1] == 2.0e6);

  CHECK(!error_text(write_temp(
                        R"({"mode": "optimize", "free": ["theta"], "bounds": [[0.0]]})"))
             .empty());
  CHECK(!error_text(write_temp(
                        R"({"mode": "optimize", "free": ["theta"], "bounds": [[1.0, 0.0]]})"))
             .empty());
  CHECK(!error_text(write_temp(
                        R"({"mode": "optimize", "free": ["theta", "theta"],
                            "bounds": [[0.0, 1.0], [0.0, 1.0]]})"))
             .empty());
  CHECK(!error_text(write_temp(
                        R"({"mode": "optimize", "free": ["theta"],
                            "bounds": [[0.0, 1.0], [0.0, 1.0]]})"))
             .empty());
}

TEST_CASE("physically invalid parameters surface as configuration errors") {
  const auto file = write_temp(R"({"mode": "point", "params": {"kappa_c_hz": -1.0e6}})");
  CHECK_THROWS_AS((void)parse_config(file), ConfigError);
  const auto file2 = write_temp(R"({"mode": "point", "params": {"theta": 7.0}})");
  CHECK_THROWS_AS((void)parse_config(file2), ConfigError);  // theta must lie in [0, 2pi)
}

TEST_CASE("output path") {
  const auto file = write_temp(R"({"mode": "point", "output_path": "runs/a.csv"})");
  CHECK(parse_config(file).output_path == "runs/a.csv");
  CHECK(!error_text(write_temp(R"({"mode": "point", "output_path": ""})")).empty());
}

TEST_CASE("write_config and parse_config are inverse") {
  RunConfig c = default_config(Mode::sweep);
  c.params.delta_c = -0.9 * c.params.omega_b;
  c.params.theta = 2.5;
  c.params.temperature = 0.123;
  c.axes = {{SweepParameter::delta_c, -2.0, 2.0, 11},
            {SweepParameter::delta_2, -1.0, 1.0, 7}};
  c.output_path = "map.csv";

  const auto file = write_temp(write_config(c));
  const RunConfig back = parse_config(file);
  CHECK(back.mode == c.mode);
  CHECK(back.output_path == c.output_path);
  REQUIRE(back.axes.size() == 2);
  CHECK(back.axes[1].points == 7);
  CHECK(back.axes[0].start == -2.0);
  // Hz -> rad/s -> Hz round trip may cost a few ulp, nothing more.
  CHECK(back.params.delta_c == doctest::Approx(c.params.delta_c).epsilon(1e-14));
  CHECK(back.params.theta == c.params.theta);
  CHECK(back.params.temperature == c.params.temperature);
  CHECK(back.params.g_1 == doctest::Approx(c.params.g_1).epsilon(1e-14));

  RunConfig opt = default_config(Mode::optimize);
  opt.free_parameters = {SweepParameter::theta};
  opt.bounds = {{0.0, 6.0}};
  const auto file2 = write_temp(write_config(opt));
  const RunConfig back2 = parse_config(file2);
  REQUIRE(back2.free_parameters.size() == 1);
  CHECK(back2.bounds[0][1] == 6.0);
}

TEST_CASE("ConfigError is part of the library error hierarchy") {
  const auto file = write_temp(R"({"mode": "nope"})");
  CHECK_THROWS_AS((void)parse_config(file), Error);
}
