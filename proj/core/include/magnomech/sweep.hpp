#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "magnomech/model.hpp"

// Grid sweeps and bounded optimization of the entanglement over model
// parameters. Grid cells are evaluated independently (optionally in
// parallel) and written by index, so results are bitwise identical for any
// thread count or evaluation order.
//
// Axis values use the external units of the configuration boundary:
// detunings and the Kerr shift as multiples of omega_b, theta in radians,
// G_pa as an ordinary frequency in Hz, temperature in kelvin.

namespace magnomech {

enum class SweepParameter {
  delta_c,
  delta_1,
  delta_2,
  theta,
  G_pa,
  kerr_shift_k,
  temperature,
};

std::string_view to_string(SweepParameter p);
// Throws ConfigError for an unknown identifier.
SweepParameter sweep_parameter_from_string(std::string_view name);
// Column name used in CSV output (e.g. delta_c -> "delta_c_over_wb").
std::string_view csv_column_name(SweepParameter p);
// Writes one axis value (external units) into the parameter set.
void apply_parameter(PhysicalParams& p, SweepParameter parameter, double value);

struct AxisSpec {
  SweepParameter parameter = SweepParameter::delta_c;
  double start = 0.0;
  double stop = 0.0;
  int points = 0;

  // The inclusive, uniformly spaced grid [start, stop] with `points` entries.
  std::vector<double> grid() const;
};

// start != stop, points >= 2, finite endpoints, plus per-parameter range
// checks (temperature >= 0, G_pa >= 0). Throws ConfigError.
void validate(const AxisSpec& axis);

// Checks a full axes block (1 or 2 distinct axes, bounded total grid size).
void validate_axes(const std::vector<AxisSpec>& axes);

struct SweepResult {
  std::vector<AxisSpec> axes;         // one or two
  std::vector<double> values;         // E_N, row-major (axis 0 outer); 0 where unstable
  std::vector<double> nu;             // nu_minus; 0 where unstable
  std::vector<std::uint8_t> stable;   // 1 stable / 0 unstable
  double max_value = 0.0;             // max of values over stable cells
  std::array<double, 2> argmax{0.0, 0.0};  // coordinates of that cell ([1] unused in 1D)

  std::size_t size() const;
  // Row-major cell index; j is ignored for 1D results.
  std::size_t index(int i, int j = 0) const;
};

// Evaluates compute_entanglement on the full grid. Unstable cells are
// recorded (stable = 0, E_N = 0), never fatal. threads <= 0 means one worker
// per hardware thread. Throws ConfigError for invalid axes.
SweepResult sweep(const PhysicalParams& base, const std::vector<AxisSpec>& axes,
                  int threads = 0);

// Same grid walk but only the Hurwitz check per cell (values/nu stay zero);
// much cheaper than a full sweep.
SweepResult stability_region(const PhysicalParams& base, const std::vector<AxisSpec>& axes,
                             int threads = 0);

struct OptimizeResult {
  PhysicalParams best_params;
  double best_value = 0.0;
  std::int64_t evaluations = 0;
  // Every objective evaluation: free-parameter coordinates and E_N.
  std::vector<std::pair<std::vector<double>, double>> trace;
};

// Checks an optimize request (1-3 distinct free parameters, finite ordered
// bounds, per-parameter range rules). Throws ConfigError.
void validate_optimize(const std::vector<SweepParameter>& free_parameters,
                       const std::vector<std::array<double, 2>>& bounds);

// Maximizes E_N over 1-3 free parameters inside finite bounds: a coarse grid
// scan (17 points per axis, evaluated like sweep) followed by deterministic
// Nelder-Mead refinement started from the best grid cell with the grid cell
// size as initial simplex step. Unstable points score 0; an all-unstable
// region is reported with best_value = 0. best_value is the maximum over
// every evaluation, so it is never below the coarse-grid value.
OptimizeResult optimize(const PhysicalParams& base,
                        const std::vector<SweepParameter>& free_parameters,
                        const std::vector<std::array<double, 2>>& bounds,
                        int threads = 0);

}  // namespace magnomech
