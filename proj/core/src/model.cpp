#include "magnomech/model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "magnomech/gaussian.hpp"

namespace magnomech {

using constants::two_pi;

PhysicalParams PhysicalParams::baseline() {
  PhysicalParams p;
  p.omega_b = two_pi * 10e6;
  p.delta_c = -0.45 * p.omega_b;
  p.delta_1 = 0.80 * p.omega_b;
  p.delta_2 = -0.55 * p.omega_b;
  p.kappa_c = two_pi * 1e6;
  p.kappa_1 = two_pi * 1e6;
  p.kappa_2 = two_pi * 1e6;
  p.gamma_b = two_pi * 100.0;
  p.g_1 = two_pi * 3.2e6;
  p.g_2 = two_pi * 2.6e6;
  p.G_mb = two_pi * 4.8e6;
  p.G_pa = two_pi * 1e6;
  p.theta = 0.0;
  p.kerr_shift_k = 0.0;
  p.temperature = 0.010;
  p.omega_c = two_pi * 12e9;
  p.omega_m1 = two_pi * 12e9;
  p.omega_m2 = two_pi * 12e9;
  return p;
}

void validate(const PhysicalParams& p) {
  const auto fail = [](const std::string& msg) { throw InvalidInput("invalid parameters: " + msg); };

  const double all[] = {p.omega_b, p.delta_c, p.delta_1, p.delta_2, p.kappa_c, p.kappa_1,
                        p.kappa_2, p.gamma_b, p.g_1, p.g_2, p.G_mb, p.G_pa, p.theta,
                        p.kerr_shift_k, p.temperature, p.omega_c, p.omega_m1, p.omega_m2};
  for (double v : all) {
    if (!std::isfinite(v)) fail("non-finite entry");
  }
  if (!(p.kappa_c > 0.0)) fail("kappa_c must be positive");
  if (!(p.kappa_1 > 0.0)) fail("kappa_1 must be positive");
  if (!(p.kappa_2 > 0.0)) fail("kappa_2 must be positive");
  if (!(p.gamma_b > 0.0)) fail("gamma_b must be positive");
  if (!(p.omega_b > 0.0)) fail("omega_b must be positive");
  if (!(p.omega_c > 0.0)) fail("omega_c must be positive");
  if (!(p.omega_m1 > 0.0)) fail("omega_m1 must be positive");
  if (!(p.omega_m2 > 0.0)) fail("omega_m2 must be positive");
  if (p.temperature < 0.0) fail("temperature must be nonnegative");
  if (p.g_1 < 0.0) fail("g_1 must be nonnegative");
  if (p.g_2 < 0.0) fail("g_2 must be nonnegative");
  if (p.G_mb < 0.0) fail("G_mb must be nonnegative");
  if (p.G_pa < 0.0) fail("G_pa must be nonnegative");
  if (!(p.theta >= 0.0 && p.theta < two_pi)) fail("theta must lie in [0, 2pi)");
}

double thermal_occupation(double omega, double temperature) {
  if (!(omega > 0.0)) throw InvalidInput("thermal_occupation requires omega > 0");
  if (temperature < 0.0) throw InvalidInput("thermal_occupation requires T >= 0");
  if (temperature == 0.0) return 0.0;
  const double x = constants::hbar * omega / (constants::k_boltzmann * temperature);
  if (x > 700.0) return 0.0;  // exp would overflow; occupation is zero to machine precision
  return 1.0 / std::expm1(x);
}

double spin_count(double diameter) {
  if (!(diameter > 0.0)) throw InvalidInput("sphere diameter must be positive");
  const double radius = diameter / 2.0;
  const double volume = (4.0 / 3.0) * constants::pi * radius * radius * radius;
  return constants::spin_density * volume;
}

double rabi_frequency(double field_b0, double diameter) {
  if (field_b0 < 0.0) throw InvalidInput("drive field amplitude must be nonnegative");
  const double n = spin_count(diameter);
  return (std::sqrt(5.0) / 4.0) * constants::gyromagnetic_gamma * std::sqrt(n) * field_b0;
}

namespace {

struct MeanFieldAmplitudes {
  std::complex<double> c;
  std::complex<double> m1;
  std::complex<double> m2;
};

// Stationary amplitudes at a frozen magnon-1 shift delta1_eff: the classical
// equations are linear in (c, m1, m2) once the shift is fixed, but the
// parametric term couples c to its conjugate, so solve the 6x6 real system
// over (Re c, Im c, Re m1, Im m1, Re m2, Im m2).
MeanFieldAmplitudes mean_field_amplitudes(const PhysicalParams& p, double delta1_eff,
                                          double rabi) {
  Eigen::Matrix<double, 6, 6> m;
  const double cth = std::cos(p.theta);
  const double sth = std::sin(p.theta);
  m.row(0) << -p.kappa_c + 2.0 * p.G_pa * cth, p.delta_c + 2.0 * p.G_pa * sth, 0.0, p.g_1,
      0.0, p.g_2;
  m.row(1) << -p.delta_c + 2.0 * p.G_pa * sth, -p.kappa_c - 2.0 * p.G_pa * cth, -p.g_1, 0.0,
      -p.g_2, 0.0;
  m.row(2) << 0.0, p.g_1, -p.kappa_1, delta1_eff, 0.0, 0.0;
  m.row(3) << -p.g_1, 0.0, -delta1_eff, -p.kappa_1, 0.0, 0.0;
  m.row(4) << 0.0, p.g_2, 0.0, 0.0, -p.kappa_2, p.delta_2;
  m.row(5) << -p.g_2, 0.0, 0.0, 0.0, -p.delta_2, -p.kappa_2;

  Eigen::Matrix<double, 6, 1> b = Eigen::Matrix<double, 6, 1>::Zero();
  b(2) = -rabi;

  const Eigen::Matrix<double, 6, 1> u = m.partialPivLu().solve(b);
  return {{u(0), u(1)}, {u(2), u(3)}, {u(4), u(5)}};
}

// Max modulus of the five stationarity residuals, relative to |Omega|.
double mean_field_residual(const PhysicalParams& p, const DriveParams& drive,
                           const MeanFieldAmplitudes& amps, double q) {
  const std::complex<double> i(0.0, 1.0);
  const double s = std::norm(amps.m1);
  const double delta1_eff = p.delta_1 + drive.single_magnon_g0 * q + 2.0 * drive.kerr_K * s;

  const std::complex<double> r_c =
      -(p.kappa_c + i * p.delta_c) * amps.c +
      2.0 * p.G_pa * std::exp(i * p.theta) * std::conj(amps.c) - i * p.g_1 * amps.m1 -
      i * p.g_2 * amps.m2;
  const std::complex<double> r_m1 =
      -(p.kappa_1 + i * delta1_eff) * amps.m1 - i * p.g_1 * amps.c + drive.rabi_omega;
  const std::complex<double> r_m2 = -(p.kappa_2 + i * p.delta_2) * amps.m2 - i * p.g_2 * amps.c;
  const double r_q = 0.0;  // q_dot = omega_b p, and p = 0 identically
  const double r_p = -p.omega_b * q - drive.single_magnon_g0 * s;

  const double worst = std::max({std::abs(r_c), std::abs(r_m1), std::abs(r_m2), r_q,
                                 std::abs(r_p)});
  return worst / std::max(std::abs(drive.rabi_omega), 1.0);
}

constexpr int kMeanFieldBudget = 100000;
constexpr double kMeanFieldRelax = 0.5;
constexpr double kMeanFieldTol = 1e-9;

// One damped fixed-point pass on the magnon-1 shift, starting from x0.
// Returns the converged shift or nullopt on budget exhaustion; iterations
// accumulates into *used.
std::optional<double> damped_shift_iteration(const PhysicalParams& p, const DriveParams& drive,
                                             double rabi, double x0, int budget, int* used) {
  const double eta_g = drive.single_magnon_g0 * drive.single_magnon_g0 / p.omega_b;
  double x = x0;
  for (int it = 0; it < budget; ++it) {
    const MeanFieldAmplitudes amps = mean_field_amplitudes(p, x, rabi);
    const double s = std::norm(amps.m1);
    const double x_new = p.delta_1 + (2.0 * drive.kerr_K - eta_g) * s;
    ++*used;
    if (std::abs(x_new - x) <= 1e-13 * std::max(std::abs(x_new), p.kappa_1)) return x_new;
    x = (1.0 - kMeanFieldRelax) * x + kMeanFieldRelax * x_new;
  }
  return std::nullopt;
}

// Counts fixed points of the scalar self-consistency map
// h(x) = delta_1 + eta |m1(x)|^2 - x over the reachable shift interval.
int count_shift_fixed_points(const PhysicalParams& p, const DriveParams& drive) {
  const double eta =
      2.0 * drive.kerr_K - drive.single_magnon_g0 * drive.single_magnon_g0 / p.omega_b;
  if (eta == 0.0) return 1;
  // |m1| is bounded by the resonant bare response; factor 4 of headroom for
  // coupling/gain enhancement.
  const double s_max = 4.0 * std::norm(drive.rabi_omega / p.kappa_1);
  double lo = p.delta_1;
  double hi = p.delta_1 + eta * s_max;
  if (lo > hi) std::swap(lo, hi);
  if (!(std::isfinite(lo) && std::isfinite(hi)) || lo == hi) return 1;

  constexpr int kScanPoints = 4001;
  int sign_changes = 0;
  int prev = 0;
  for (int k = 0; k < kScanPoints; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / (kScanPoints - 1);
    const MeanFieldAmplitudes amps = mean_field_amplitudes(p, x, drive.rabi_omega);
    const double h = p.delta_1 + eta * std::norm(amps.m1) - x;
    const int sgn = (h > 0.0) - (h < 0.0);
    if (sgn != 0 && prev != 0 && sgn != prev) ++sign_changes;
    if (sgn != 0) prev = sgn;
  }
  return std::max(1, sign_changes);
}

}  // namespace

MeanFieldState steady_state_mean_field(const PhysicalParams& p, const DriveParams& drive) {
  if (!(p.kappa_c > 0.0 && p.kappa_1 > 0.0 && p.kappa_2 > 0.0 && p.gamma_b > 0.0)) {
    throw InvalidInput("mean-field solve requires positive dissipation rates");
  }
  if (!(p.omega_b > 0.0)) throw InvalidInput("mean-field solve requires omega_b > 0");

  MeanFieldState state;
  if (drive.rabi_omega == 0.0) return state;  // undriven: all amplitudes vanish exactly

  int used = 0;
  std::optional<double> shift =
      damped_shift_iteration(p, drive, drive.rabi_omega, p.delta_1, kMeanFieldBudget, &used);

  const int fixed_points = count_shift_fixed_points(p, drive);
  state.multistable = fixed_points > 1;
  if (state.multistable) {
    // Several coexisting branches: pick the one continuously connected to the
    // undriven solution by ramping the drive from zero.
    constexpr int kRampSteps = 100;
    double x = p.delta_1;
    for (int step = 1; step <= kRampSteps; ++step) {
      const double rabi = drive.rabi_omega * static_cast<double>(step) / kRampSteps;
      const auto branch =
          damped_shift_iteration(p, drive, rabi, x, kMeanFieldBudget / kRampSteps, &used);
      if (!branch) throw ConvergenceError("mean-field continuation stalled mid-ramp");
      x = *branch;
    }
    shift = damped_shift_iteration(p, drive, drive.rabi_omega, x, kMeanFieldBudget, &used);
  }
  if (!shift) {
    throw ConvergenceError("mean-field iteration exhausted its budget without converging");
  }

  const MeanFieldAmplitudes amps = mean_field_amplitudes(p, *shift, drive.rabi_omega);
  state.amp_c = amps.c;
  state.amp_m1 = amps.m1;
  state.amp_m2 = amps.m2;
  state.pos_q = -drive.single_magnon_g0 * std::norm(amps.m1) / p.omega_b;
  state.iterations = used;
  state.residual = mean_field_residual(p, drive, amps, state.pos_q);
  if (!(state.residual < kMeanFieldTol)) {
    std::ostringstream msg;
    msg << "mean-field fixed point failed the stationarity check: residual " << state.residual;
    throw ConvergenceError(msg.str());
  }
  return state;
}

double effective_coupling(const MeanFieldState& mean_field, double g0) {
  if (g0 < 0.0) throw InvalidInput("bare magnomechanical coupling must be nonnegative");
  return std::sqrt(2.0) * g0 * std::abs(mean_field.amp_m1);
}

double linearized_kerr_shift(const MeanFieldState& mean_field, double kerr_K) {
  return 2.0 * kerr_K * std::norm(mean_field.amp_m1);
}

Eigen::Matrix<double, 8, 8> build_drift(const PhysicalParams& p) {
  const double cth = std::cos(p.theta);
  const double sth = std::sin(p.theta);
  const double k = p.kerr_shift_k;

  Eigen::Matrix<double, 8, 8> a = Eigen::Matrix<double, 8, 8>::Zero();
  // Cavity quadratures: parametric gain feeds the diagonal (theta-dependent).
  a(0, 0) = -p.kappa_c + 2.0 * p.G_pa * cth;
  a(0, 1) = p.delta_c + 2.0 * p.G_pa * sth;
  a(0, 3) = p.g_1;
  a(0, 5) = p.g_2;
  a(1, 0) = -p.delta_c + 2.0 * p.G_pa * sth;
  a(1, 1) = -p.kappa_c - 2.0 * p.G_pa * cth;
  a(1, 2) = -p.g_1;
  a(1, 4) = -p.g_2;
  // Driven magnon: Kerr shift enters the two quadratures with opposite sign
  // relative to the detuning, and the mechanical position couples in.
  a(2, 1) = p.g_1;
  a(2, 2) = -p.kappa_1;
  a(2, 3) = p.delta_1 - k;
  a(2, 6) = -p.G_mb;
  a(3, 0) = -p.g_1;
  a(3, 2) = -(p.delta_1 + k);
  a(3, 3) = -p.kappa_1;
  // Second magnon.
  a(4, 1) = p.g_2;
  a(4, 4) = -p.kappa_2;
  a(4, 5) = p.delta_2;
  a(5, 0) = -p.g_2;
  a(5, 4) = -p.delta_2;
  a(5, 5) = -p.kappa_2;
  // Mechanics.
  a(6, 7) = p.omega_b;
  a(7, 3) = p.G_mb;
  a(7, 6) = -p.omega_b;
  a(7, 7) = -p.gamma_b;
  return a;
}

Eigen::Matrix<double, 8, 8> build_diffusion(const PhysicalParams& p) {
  const double n_c = thermal_occupation(p.omega_c, p.temperature);
  const double n_1 = thermal_occupation(p.omega_m1, p.temperature);
  const double n_2 = thermal_occupation(p.omega_m2, p.temperature);
  const double n_b = thermal_occupation(p.omega_b, p.temperature);

  Eigen::Matrix<double, 8, 8> d = Eigen::Matrix<double, 8, 8>::Zero();
  d(0, 0) = d(1, 1) = p.kappa_c * (2.0 * n_c + 1.0);
  d(2, 2) = d(3, 3) = p.kappa_1 * (2.0 * n_1 + 1.0);
  d(4, 4) = d(5, 5) = p.kappa_2 * (2.0 * n_2 + 1.0);
  d(6, 6) = 0.0;  // position quadrature carries no direct noise input
  d(7, 7) = p.gamma_b * (2.0 * n_b + 1.0);
  return d;
}

EntanglementResult compute_entanglement(const PhysicalParams& p) {
  const Eigen::Matrix<double, 8, 8> a = build_drift(p);

  EntanglementResult result;
  const gaussian::StabilityReport report = gaussian::is_hurwitz(a);
  result.max_real_part = report.max_real_part;
  if (!report.is_hurwitz) return result;  // instability is a result, not an error

  const gaussian::Matrix v = gaussian::solve_lyapunov(a, build_diffusion(p));
  const gaussian::LogNegativity ln = gaussian::log_negativity(gaussian::two_mode_block(v, 1, 2));
  result.stable = true;
  result.nu_minus = ln.nu_minus;
  result.log_neg = ln.e_n;
  return result;
}

}  // namespace magnomech
