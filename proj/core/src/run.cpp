#include "magnomech/run.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "magnomech/model.hpp"
#include "magnomech/sweep.hpp"

namespace magnomech::io {

std::string format_float(double value) {
  std::array<char, 32> buffer{};
  const int n = std::snprintf(buffer.data(), buffer.size(), "%.8e", value);
  return std::string(buffer.data(), static_cast<std::size_t>(n));
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file " + path.string());
  return out;
}

int run_point(const RunConfig& config, std::ostream& out) {
  const EntanglementResult result = compute_entanglement(config.params);
  const int stable = result.stable ? 1 : 0;
  const double nu = result.nu_minus.value_or(0.0);
  const double e_n = result.log_neg.value_or(0.0);

  std::ofstream csv = open_output(config.output_path);
  csv << "stable,nu_minus,E_N\n"
      << stable << ',' << format_float(nu) << ',' << format_float(e_n) << '\n';

  out << "stable=" << stable << " nu_minus=" << format_float(nu)
      << " E_N=" << format_float(e_n) << '\n';
  return result.stable ? 0 : 2;
}

void write_grid_csv(const SweepResult& result, const std::filesystem::path& path,
                    bool with_values) {
  std::ofstream csv = open_output(path);
  for (const AxisSpec& axis : result.axes) csv << csv_column_name(axis.parameter) << ',';
  csv << (with_values ? "stable,nu_minus,E_N" : "stable") << '\n';

  const std::vector<double> outer = result.axes.front().grid();
  const std::vector<double> inner =
      result.axes.size() == 2 ? result.axes.back().grid() : std::vector<double>{0.0};
  std::size_t cell = 0;
  for (double x : outer) {
    for (double y : inner) {
      csv << format_float(x) << ',';
      if (result.axes.size() == 2) csv << format_float(y) << ',';
      csv << int(result.stable[cell]);
      if (with_values) {
        csv << ',' << format_float(result.nu[cell]) << ',' << format_float(result.values[cell]);
      }
      csv << '\n';
      ++cell;
    }
  }
}

int run_sweep(const RunConfig& config, int threads) {
  const SweepResult result = sweep(config.params, config.axes, threads);
  write_grid_csv(result, config.output_path, /*with_values=*/true);
  return 0;
}

int run_stability(const RunConfig& config, int threads) {
  const SweepResult result = stability_region(config.params, config.axes, threads);
  write_grid_csv(result, config.output_path, /*with_values=*/false);
  return 0;
}

int run_optimize(const RunConfig& config, int threads, std::ostream& out) {
  const OptimizeResult result =
      optimize(config.params, config.free_parameters, config.bounds, threads);

  std::ofstream csv = open_output(config.output_path);
  csv << "eval,";
  for (SweepParameter p : config.free_parameters) csv << csv_column_name(p) << ',';
  csv << "E_N\n";
  std::size_t eval = 0;
  for (const auto& [coords, value] : result.trace) {
    csv << eval++;
    for (double c : coords) csv << ',' << format_float(c);
    csv << ',' << format_float(value) << '\n';
  }

  // First evaluation attaining best_value = the coordinates the optimizer kept.
  const std::vector<double>* best_coords = nullptr;
  double best = -1.0;
  for (const auto& [coords, value] : result.trace) {
    if (value > best) {
      best = value;
      best_coords = &coords;
    }
  }
  out << "best";
  if (best_coords != nullptr) {
    for (std::size_t i = 0; i < config.free_parameters.size(); ++i) {
      out << ' ' << csv_column_name(config.free_parameters[i]) << '='
          << format_float((*best_coords)[i]);
    }
  }
  out << " E_N=" << format_float(result.best_value) << '\n';
  return 0;
}

}  // namespace

int run(const RunConfig& config, const RunOptions& options) {
  std::ostream& out = options.out != nullptr ? *options.out : std::cout;
  switch (config.mode) {
    case Mode::point: return run_point(config, out);
    case Mode::sweep: return run_sweep(config, options.threads);
    case Mode::stability: return run_stability(config, options.threads);
    case Mode::optimize: return run_optimize(config, options.threads, out);
  }
  throw InvalidInput("unhandled run mode");
}

namespace {

struct PlotColumn {
  std::string_view column;
  std::string_view label;
};

constexpr PlotColumn kPlotColumns[] = {
    {"delta_c_over_wb", "$\\Delta_c/\\omega_b$"},
    {"delta_1_over_wb", "$\\Delta_1/\\omega_b$"},
    {"delta_2_over_wb", "$\\Delta_2/\\omega_b$"},
    {"theta_rad", "$\\theta$ (rad)"},
    {"G_pa_hz", "$G/2\\pi$ (Hz)"},
    {"kerr_k_over_wb", "$k/\\omega_b$"},
    {"temperature_K", "$T$ (K)"},
};

const PlotColumn* find_plot_column(const std::string& name) {
  for (const PlotColumn& c : kPlotColumns) {
    if (name == c.column) return &c;
  }
  return nullptr;
}

std::vector<std::string> split_header(const std::string& line) {
  std::vector<std::string> tokens;
  std::string token;
  std::istringstream stream(line);
  while (std::getline(stream, token, ',')) tokens.push_back(token);
  return tokens;
}

std::string relative_csv_path(const std::filesystem::path& csv,
                              const std::filesystem::path& script) {
  std::error_code ec;
  const std::filesystem::path base =
      script.has_parent_path() ? script.parent_path() : std::filesystem::path(".");
  std::filesystem::path rel = std::filesystem::relative(csv, base, ec);
  if (ec || rel.empty()) rel = csv;
  return rel.generic_string();
}

}  // namespace

void emit_plot_script(const std::filesystem::path& sweep_csv, std::string_view kind,
                      const std::filesystem::path& script_path) {
  if (kind != "heatmap" && kind != "curve") {
    throw ConfigError("unknown plot kind \"" + std::string(kind) +
                      "\" (expected heatmap or curve)");
  }

  std::string header;
  {
    std::ifstream in(sweep_csv, std::ios::binary);
    if (!in) throw ConfigError("cannot open results file " + sweep_csv.string());
    std::getline(in, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
  }

  const std::vector<std::string> columns = split_header(header);
  const std::size_t n_coords = kind == "heatmap" ? 2 : 1;
  const std::array<std::string_view, 3> tail = {"stable", "nu_minus", "E_N"};
  bool ok = columns.size() == n_coords + tail.size();
  std::vector<const PlotColumn*> coords;
  if (ok) {
    for (std::size_t i = 0; i < n_coords; ++i) {
      const PlotColumn* c = find_plot_column(columns[i]);
      if (c == nullptr) ok = false;
      coords.push_back(c);
    }
    if (n_coords == 2 && ok && coords[0] == coords[1]) ok = false;
    for (std::size_t i = 0; i < tail.size(); ++i) {
      if (!ok || columns[n_coords + i] != tail[i]) ok = false;
    }
  }
  if (!ok) {
    throw ConfigError("results header \"" + header + "\" in " + sweep_csv.string() +
                      " does not match a " + std::string(kind) + " layout");
  }

  const std::string rel = relative_csv_path(sweep_csv, script_path);

  std::ostringstream py;
  py << "#!/usr/bin/env python3\n"
     << "\"\"\"Renders " << sweep_csv.filename().generic_string()
     << " next to this script as a PNG.\"\"\"\n\n"
     << "import csv\n"
     << "import os\n\n"
     << "import matplotlib\n\n"
     << "matplotlib.use(\"Agg\")\n"
     << "import matplotlib.pyplot as plt\n\n"
     << "HERE = os.path.dirname(os.path.abspath(__file__))\n"
     << "CSV_PATH = os.path.join(HERE, \"" << rel << "\")\n\n\n"
     << "def main():\n"
     << "    with open(CSV_PATH, newline=\"\") as fh:\n"
     << "        rows = list(csv.DictReader(fh))\n";

  if (kind == "heatmap") {
    const std::string x = std::string(coords[0]->column);
    const std::string y = std::string(coords[1]->column);
    py << "    xs = sorted({float(r[\"" << x << "\"]) for r in rows})\n"
       << "    ys = sorted({float(r[\"" << y << "\"]) for r in rows})\n"
       << "    value = {(float(r[\"" << x << "\"]), float(r[\"" << y
       << "\"])): float(r[\"E_N\"]) for r in rows}\n"
       << "    fig, ax = plt.subplots(figsize=(6.0, 4.8))\n"
       << "    if rows:\n"
       << "        grid = [[value[(x, y)] for x in xs] for y in ys]\n"
       << "        mesh = ax.pcolormesh(xs, ys, grid, shading=\"nearest\", cmap=\"viridis\")\n"
       << "        fig.colorbar(mesh, ax=ax, label=r\"$E_N$\")\n"
       << "    ax.set_xlabel(r\"" << coords[0]->label << "\")\n"
       << "    ax.set_ylabel(r\"" << coords[1]->label << "\")\n";
  } else {
    const std::string x = std::string(coords[0]->column);
    py << "    xs = [float(r[\"" << x << "\"]) for r in rows]\n"
       << "    es = [float(r[\"E_N\"]) for r in rows]\n"
       << "    fig, ax = plt.subplots(figsize=(6.0, 4.2))\n"
       << "    ax.plot(xs, es, lw=1.5)\n"
       << "    ax.grid(True, alpha=0.3)\n"
       << "    ax.set_xlabel(r\"" << coords[0]->label << "\")\n"
       << "    ax.set_ylabel(r\"$E_N$\")\n";
  }

  py << "    out = os.path.splitext(os.path.abspath(__file__))[0] + \".png\"\n"
     << "    fig.savefig(out, dpi=200, bbox_inches=\"tight\")\n"
     << "    print(\"wrote\", out)\n\n\n"
     << "if __name__ == \"__main__\":\n"
     << "    main()\n";

  std::ofstream out = open_output(script_path);
  out << py.str();
}

}  // namespace magnomech::io
