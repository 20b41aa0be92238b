#include "magnomech/sweep.hpp"

#include "magnomech/gaussian.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <sstream>
#include <thread>

namespace magnomech {

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::delta_c: return "delta_c";
    case SweepParameter::delta_1: return "delta_1";
    case SweepParameter::delta_2: return "delta_2";
    case SweepParameter::theta: return "theta";
    case SweepParameter::G_pa: return "G_pa";
    case SweepParameter::kerr_shift_k: return "kerr_shift_k";
    case SweepParameter::temperature: return "temperature";
  }
  return "?";
}

SweepParameter sweep_parameter_from_string(std::string_view name) {
  for (SweepParameter p : {SweepParameter::delta_c, SweepParameter::delta_1,
                           SweepParameter::delta_2, SweepParameter::theta, SweepParameter::G_pa,
                           SweepParameter::kerr_shift_k, SweepParameter::temperature}) {
    if (name == to_string(p)) return p;
  }
  throw ConfigError("unknown sweep parameter \"" + std::string(name) +
                    "\" (expected one of delta_c, delta_1, delta_2, theta, G_pa, "
                    "kerr_shift_k, temperature)");
}

std::string_view csv_column_name(SweepParameter p) {
  switch (p) {
    case SweepParameter::delta_c: return "delta_c_over_wb";
    case SweepParameter::delta_1: return "delta_1_over_wb";
    case SweepParameter::delta_2: return "delta_2_over_wb";
    case SweepParameter::theta: return "theta_rad";
    case SweepParameter::G_pa: return "G_pa_hz";
    case SweepParameter::kerr_shift_k: return "kerr_k_over_wb";
    case SweepParameter::temperature: return "temperature_K";
  }
  return "?";
}

void apply_parameter(PhysicalParams& p, SweepParameter parameter, double value) {
  switch (parameter) {
    case SweepParameter::delta_c: p.delta_c = value * p.omega_b; return;
    case SweepParameter::delta_1: p.delta_1 = value * p.omega_b; return;
    case SweepParameter::delta_2: p.delta_2 = value * p.omega_b; return;
    case SweepParameter::theta: p.theta = value; return;
    case SweepParameter::G_pa: p.G_pa = constants::two_pi * value; return;
    case SweepParameter::kerr_shift_k: p.kerr_shift_k = value * p.omega_b; return;
    case SweepParameter::temperature: p.temperature = value; return;
  }
}

std::vector<double> AxisSpec::grid() const {
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    g[static_cast<std::size_t>(i)] =
        start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return g;
}

void validate(const AxisSpec& axis) {
  std::ostringstream msg;
  msg << "axis " << to_string(axis.parameter) << ": ";
  if (!(std::isfinite(axis.start) && std::isfinite(axis.stop))) {
    msg << "endpoints must be finite";
    throw ConfigError(msg.str());
  }
  if (axis.start == axis.stop) {
    msg << "start and stop must differ";
    throw ConfigError(msg.str());
  }
  if (axis.points < 2) {
    msg << "needs at least 2 points, got " << axis.points;
    throw ConfigError(msg.str());
  }
  const double lo = std::min(axis.start, axis.stop);
  if (axis.parameter == SweepParameter::temperature && lo < 0.0) {
    msg << "temperature must be nonnegative";
    throw ConfigError(msg.str());
  }
  if (axis.parameter == SweepParameter::G_pa && lo < 0.0) {
    msg << "gain must be nonnegative";
    throw ConfigError(msg.str());
  }
}

std::size_t SweepResult::size() const {
  std::size_t n = 1;
  for (const AxisSpec& axis : axes) n *= static_cast<std::size_t>(axis.points);
  return n;
}

std::size_t SweepResult::index(int i, int j) const {
  if (axes.size() == 1) return static_cast<std::size_t>(i);
  return static_cast<std::size_t>(i) * static_cast<std::size_t>(axes[1].points) +
         static_cast<std::size_t>(j);
}

namespace {
constexpr std::size_t kMaxCells = 4'000'000;
}  // namespace

void validate_axes(const std::vector<AxisSpec>& axes) {
  if (axes.empty() || axes.size() > 2) {
    throw ConfigError("sweeps take one or two axes, got " + std::to_string(axes.size()));
  }
  for (const AxisSpec& axis : axes) validate(axis);
  if (axes.size() == 2 && axes[0].parameter == axes[1].parameter) {
    throw ConfigError("sweep axes must name distinct parameters");
  }
  std::size_t cells = 1;
  for (const AxisSpec& axis : axes) cells *= static_cast<std::size_t>(axis.points);
  if (cells > kMaxCells) {
    throw ConfigError("sweep grid has " + std::to_string(cells) + " cells (limit " +
                      std::to_string(kMaxCells) + ")");
  }
}

namespace {

// Runs fn(cell) for every cell index on the requested number of workers.
// Cells are strided, each written once by index, so the assembled result is
// identical for any worker count.
void parallel_cells(std::size_t cells, int threads, const std::function<void(std::size_t)>& fn) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), cells));

  if (workers == 1) {
    for (std::size_t c = 0; c < cells; ++c) fn(c);
    return;
  }

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t c = static_cast<std::size_t>(w); c < cells;
             c += static_cast<std::size_t>(workers)) {
          fn(c);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct CellGrid {
  std::vector<std::vector<double>> grids;
  std::size_t cols = 1;

  explicit CellGrid(const std::vector<AxisSpec>& axes) {
    for (const AxisSpec& axis : axes) grids.push_back(axis.grid());
    cols = axes.size() == 2 ? static_cast<std::size_t>(axes[1].points) : 1;
  }

  // External coordinates of a row-major cell (second entry 0.0 in 1D).
  std::array<double, 2> coords(std::size_t cell) const {
    if (grids.size() == 1) return {grids[0][cell], 0.0};
    return {grids[0][cell / cols], grids[1][cell % cols]};
  }

  PhysicalParams params_at(const PhysicalParams& base, const std::vector<AxisSpec>& axes,
                           std::size_t cell) const {
    PhysicalParams p = base;
    const std::array<double, 2> x = coords(cell);
    apply_parameter(p, axes[0].parameter, x[0]);
    if (axes.size() == 2) apply_parameter(p, axes[1].parameter, x[1]);
    return p;
  }
};

void finalize_extrema(SweepResult& result, const CellGrid& grid) {
  result.max_value = 0.0;
  result.argmax = grid.coords(0);
  bool found = false;
  for (std::size_t c = 0; c < result.values.size(); ++c) {
    if (!result.stable[c]) continue;
    if (!found || result.values[c] > result.max_value) {
      result.max_value = result.values[c];
      result.argmax = grid.coords(c);
      found = true;
    }
  }
}

}  // namespace

SweepResult sweep(const PhysicalParams& base, const std::vector<AxisSpec>& axes, int threads) {
  validate_axes(axes);
  const CellGrid grid(axes);

  SweepResult result;
  result.axes = axes;
  const std::size_t cells = [&] {
    std::size_t n = 1;
    for (const AxisSpec& axis : axes) n *= static_cast<std::size_t>(axis.points);
    return n;
  }();
  result.values.assign(cells, 0.0);
  result.nu.assign(cells, 0.0);
  result.stable.assign(cells, 0);

  parallel_cells(cells, threads, [&](std::size_t c) {
    const EntanglementResult r = compute_entanglement(grid.params_at(base, axes, c));
    if (r.stable) {
      result.values[c] = *r.log_neg;
      result.nu[c] = *r.nu_minus;
      result.stable[c] = 1;
    }
  });

  finalize_extrema(result, grid);
  return result;
}

SweepResult stability_region(const PhysicalParams& base, const std::vector<AxisSpec>& axes,
                             int threads) {
  validate_axes(axes);
  const CellGrid grid(axes);

  SweepResult result;
  result.axes = axes;
  std::size_t cells = 1;
  for (const AxisSpec& axis : axes) cells *= static_cast<std::size_t>(axis.points);
  result.values.assign(cells, 0.0);
  result.nu.assign(cells, 0.0);
  result.stable.assign(cells, 0);

  parallel_cells(cells, threads, [&](std::size_t c) {
    const auto report = gaussian::is_hurwitz(build_drift(grid.params_at(base, axes, c)));
    result.stable[c] = report.is_hurwitz ? 1 : 0;
  });

  finalize_extrema(result, grid);
  return result;
}

namespace {

constexpr int kCoarsePointsPerAxis = 17;

struct Objective {
  const PhysicalParams& base;
  const std::vector<SweepParameter>& free_parameters;

  double operator()(const std::vector<double>& x) const {
    PhysicalParams p = base;
    for (std::size_t k = 0; k < free_parameters.size(); ++k) {
      apply_parameter(p, free_parameters[k], x[k]);
    }
    const EntanglementResult r = compute_entanglement(p);
    return r.stable ? *r.log_neg : 0.0;
  }
};

}  // namespace

void validate_optimize(const std::vector<SweepParameter>& free_parameters,
                       const std::vector<std::array<double, 2>>& bounds) {
  if (free_parameters.empty() || free_parameters.size() > 3) {
    throw ConfigError("optimize takes 1-3 free parameters, got " +
                      std::to_string(free_parameters.size()));
  }
  if (bounds.size() != free_parameters.size()) {
    throw ConfigError("optimize needs one bounds pair per free parameter");
  }
  for (std::size_t k = 0; k < free_parameters.size(); ++k) {
    const auto [lo, hi] = bounds[k];
    std::ostringstream msg;
    msg << "bounds for " << to_string(free_parameters[k]) << ": ";
    if (!(std::isfinite(lo) && std::isfinite(hi))) {
      msg << "must be finite";
      throw ConfigError(msg.str());
    }
    if (!(lo < hi)) {
      msg << "lower bound must be below upper bound";
      throw ConfigError(msg.str());
    }
    if ((free_parameters[k] == SweepParameter::temperature ||
         free_parameters[k] == SweepParameter::G_pa) &&
        lo < 0.0) {
      msg << "must be nonnegative";
      throw ConfigError(msg.str());
    }
  }
  for (std::size_t a = 0; a < free_parameters.size(); ++a) {
    for (std::size_t b = a + 1; b < free_parameters.size(); ++b) {
      if (free_parameters[a] == free_parameters[b]) {
        throw ConfigError("optimize free parameters must be distinct");
      }
    }
  }
}

OptimizeResult optimize(const PhysicalParams& base,
                        const std::vector<SweepParameter>& free_parameters,
                        const std::vector<std::array<double, 2>>& bounds, int threads) {
  validate_optimize(free_parameters, bounds);
  const std::size_t dim = free_parameters.size();
  const Objective objective{base, free_parameters};

  OptimizeResult result;
  result.best_params = base;

  // Coarse grid pass, evaluated in parallel and written by index.
  std::size_t cells = 1;
  for (std::size_t k = 0; k < dim; ++k) cells *= kCoarsePointsPerAxis;
  result.trace.resize(cells);

  const auto coarse_coords = [&](std::size_t cell) {
    std::vector<double> x(dim);
    std::size_t rest = cell;
    for (std::size_t k = dim; k-- > 0;) {
      const std::size_t idx = rest % kCoarsePointsPerAxis;
      rest /= kCoarsePointsPerAxis;
      x[k] = bounds[k][0] + (bounds[k][1] - bounds[k][0]) * static_cast<double>(idx) /
                                (kCoarsePointsPerAxis - 1);
    }
    return x;
  };

  parallel_cells(cells, threads, [&](std::size_t c) {
    std::vector<double> x = coarse_coords(c);
    const double value = objective(x);
    result.trace[c] = {std::move(x), value};
  });

  std::size_t best_cell = 0;
  for (std::size_t c = 1; c < cells; ++c) {
    if (result.trace[c].second > result.trace[best_cell].second) best_cell = c;
  }
  std::vector<double> best_x = result.trace[best_cell].first;
  double best_value = result.trace[best_cell].second;

  // Deterministic Nelder-Mead refinement inside the box, starting from the
  // best grid cell with one grid-cell step per direction.
  const auto clamp = [&](std::vector<double>& x) {
    for (std::size_t k = 0; k < dim; ++k) x[k] = std::clamp(x[k], bounds[k][0], bounds[k][1]);
  };
  const auto record = [&](const std::vector<double>& x) {
    const double value = objective(x);
    result.trace.emplace_back(x, value);
    if (value > best_value) {
      best_value = value;
      best_x = x;
    }
    return -value;  // simplex minimizes
  };

  std::vector<std::vector<double>> simplex(dim + 1, best_x);
  for (std::size_t k = 0; k < dim; ++k) {
    const double step = (bounds[k][1] - bounds[k][0]) / (kCoarsePointsPerAxis - 1);
    double& coord = simplex[k + 1][k];
    coord = (coord + step <= bounds[k][1]) ? coord + step : coord - step;
  }
  std::vector<double> f(dim + 1);
  for (std::size_t v = 0; v <= dim; ++v) f[v] = record(simplex[v]);

  constexpr int kMaxIterations = 400;
  constexpr double kAlpha = 1.0, kGamma = 2.0, kRho = 0.5, kSigma = 0.5;
  std::vector<std::size_t> order(dim + 1);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    for (std::size_t v = 0; v <= dim; ++v) order[v] = v;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    const std::size_t lo = order[0], hi = order[dim], second_hi = order[dim - 1];

    double diameter = 0.0;
    for (std::size_t v = 1; v <= dim; ++v) {
      double dist = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        dist = std::max(dist, std::abs(simplex[order[v]][k] - simplex[lo][k]));
      }
      diameter = std::max(diameter, dist);
    }
    double scale = 0.0;
    for (std::size_t k = 0; k < dim; ++k) scale = std::max(scale, bounds[k][1] - bounds[k][0]);
    if (diameter < 1e-10 * scale && std::abs(f[hi] - f[lo]) < 1e-13) break;

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t v = 0; v <= dim; ++v) {
      if (v == hi) continue;
      for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[v][k] / static_cast<double>(dim);
    }

    std::vector<double> reflected(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      reflected[k] = centroid[k] + kAlpha * (centroid[k] - simplex[hi][k]);
    }
    clamp(reflected);
    const double f_reflected = record(reflected);

    if (f_reflected < f[lo]) {
      std::vector<double> expanded(dim);
      for (std::size_t k = 0; k < dim; ++k) {
        expanded[k] = centroid[k] + kGamma * (reflected[k] - centroid[k]);
      }
      clamp(expanded);
      const double f_expanded = record(expanded);
      if (f_expanded < f_reflected) {
        simplex[hi] = std::move(expanded);
        f[hi] = f_expanded;
      } else {
        simplex[hi] = std::move(reflected);
        f[hi] = f_reflected;
      }
    } else if (f_reflected < f[second_hi]) {
      simplex[hi] = std::move(reflected);
      f[hi] = f_reflected;
    } else {
      std::vector<double> contracted(dim);
      for (std::size_t k = 0; k < dim; ++k) {
        contracted[k] = centroid[k] + kRho * (simplex[hi][k] - centroid[k]);
      }
      clamp(contracted);
      const double f_contracted = record(contracted);
      if (f_contracted < f[hi]) {
        simplex[hi] = std::move(contracted);
        f[hi] = f_contracted;
      } else {
        for (std::size_t v = 0; v <= dim; ++v) {
          if (v == lo) continue;
          for (std::size_t k = 0; k < dim; ++k) {
            simplex[v][k] = simplex[lo][k] + kSigma * (simplex[v][k] - simplex[lo][k]);
          }
          f[v] = record(simplex[v]);
        }
      }
    }
  }

  result.best_value = best_value;
  result.evaluations = static_cast<std::int64_t>(result.trace.size());
  for (std::size_t k = 0; k < dim; ++k) {
    apply_parameter(result.best_params, free_parameters[k], best_x[k]);
  }
  return result;
}

}  // namespace magnomech
