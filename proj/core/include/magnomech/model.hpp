#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <optional>

#include "magnomech/errors.hpp"

// The physical model: a microwave cavity coupled to two magnon modes (YIG
// spheres), one of which also couples to a mechanical vibration mode through
// magnetostriction; the cavity contains a degenerate parametric amplifier and
// the driven magnon mode carries a self-Kerr nonlinearity. This header owns
// parameter bookkeeping, thermal occupations, the classical mean-field steady
// state, and the construction of the 8x8 drift and diffusion matrices of the
// linearized fluctuation dynamics.
//
// All frequencies, rates, detunings and couplings in PhysicalParams are
// angular (rad/s). Configuration files quote ordinary frequencies in Hz; the
// conversion happens at that boundary, never here.

namespace magnomech {

namespace constants {
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * pi;
// CODATA values.
inline constexpr double hbar = 6.62607015e-34 / two_pi;    // J s
inline constexpr double k_boltzmann = 1.380649e-23;        // J / K
// YIG material constants.
inline constexpr double gyromagnetic_gamma = two_pi * 28e9;  // rad / (s T)
inline constexpr double spin_density = 4.22e27;              // spins / m^3
}  // namespace constants

struct PhysicalParams {
  double omega_b;   // mechanical angular frequency
  double delta_c;   // cavity detuning (signed)
  double delta_1;   // driven-magnon detuning (signed)
  double delta_2;   // second-magnon detuning (signed)
  double kappa_c;   // cavity dissipation rate
  double kappa_1;   // magnon-1 dissipation rate
  double kappa_2;   // magnon-2 dissipation rate
  double gamma_b;   // mechanical damping rate
  double g_1;       // magnon-1 <-> cavity coupling
  double g_2;       // magnon-2 <-> cavity coupling
  double G_mb;      // effective magnomechanical coupling (real, nonnegative)
  double G_pa;      // parametric-amplifier gain
  double theta;     // parametric-amplifier phase, radians
  double kerr_shift_k;  // linearized Kerr shift k in the drift matrix
  double temperature;   // K
  // Absolute mode frequencies, used only for thermal occupations.
  double omega_c;
  double omega_m1;
  double omega_m2;

  // Reference working point: kappa_c/2pi = kappa_1/2pi = kappa_2/2pi = 1 MHz,
  // omega_b/2pi = 10 MHz, gamma_b/2pi = 100 Hz, g_1/2pi = 3.2 MHz,
  // g_2/2pi = 2.6 MHz, G_mb/2pi = 4.8 MHz, G_pa/2pi = 1 MHz, theta = 0, k = 0,
  // T = 10 mK, all mode frequencies 2pi x 12 GHz, and detunings
  // (delta_c, delta_1, delta_2) = (-0.45, +0.80, -0.55) omega_b (the
  // entanglement maximum of the theta = pi/2 density map).
  static PhysicalParams baseline();
};

// Strict invariant check: dissipation rates and absolute frequencies positive,
// temperature >= 0, couplings and gain nonnegative, theta in [0, 2pi), all
// entries finite. Throws InvalidInput. Used at the configuration boundary;
// model code itself treats theta as periodic and total.
void validate(const PhysicalParams& p);

// Drive-side quantities used by the mean-field consistency checks. These are
// not part of the fluctuation pipeline (G_mb is an input there).
struct DriveParams {
  double rabi_omega = 0.0;        // drive Rabi frequency, rad/s
  double drive_field_b0 = 0.0;    // drive magnetic field amplitude, T
  double single_magnon_g0 = 0.0;  // bare magnomechanical coupling, rad/s
  double kerr_K = 0.0;            // bare self-Kerr coefficient, rad/s
  double sphere_diameter = 0.0;   // m
};

// Classical steady-state amplitudes of the driven system.
struct MeanFieldState {
  std::complex<double> amp_c{0.0, 0.0};
  std::complex<double> amp_m1{0.0, 0.0};
  std::complex<double> amp_m2{0.0, 0.0};
  double pos_q = 0.0;       // mechanical displacement
  bool multistable = false; // more than one fixed point detected
  int iterations = 0;
  double residual = 0.0;    // max stationarity residual relative to |Omega|
};

// Mean thermal occupation 1/(exp(hbar omega / kB T) - 1); exactly 0 at T = 0.
// Throws InvalidInput for omega <= 0 or T < 0.
double thermal_occupation(double omega, double temperature);

// Number of spins N = rho V of a YIG sphere of the given diameter.
double spin_count(double diameter);

// Drive Rabi frequency Omega = (sqrt(5)/4) gamma sqrt(N) B0 for a sphere of
// the given diameter. Throws InvalidInput for B0 < 0 or diameter <= 0.
double rabi_frequency(double field_b0, double diameter);

// Classical (noise-free) fixed point of the driven mean-field equations,
// including the Kerr term -2iK|m1|^2 m1 and the magnomechanical shift
// -i G0 m1 q with q = -G0 |m1|^2 / omega_b. Solved by damped fixed-point
// iteration (relaxation 0.5, budget 1e5) on the self-consistent magnon-1
// shift, the inner step being a 6x6 real linear solve; initial guess is the
// linear (K = 0, G0 = 0) solution. Multistability is detected by counting
// sign changes of the scalar self-consistency map over its reachable range;
// when detected, the returned branch is re-resolved by a 100-step drive ramp
// from zero (continuation) and flagged. All five stationarity residuals are
// below 1e-9 relative to |Omega| on return; ConvergenceError otherwise.
MeanFieldState steady_state_mean_field(const PhysicalParams& p, const DriveParams& drive);

// Effective magnomechanical coupling sqrt(2) G0 |<m1>| (magnitude convention).
double effective_coupling(const MeanFieldState& mean_field, double g0);

// Optional helper: the linearized Kerr shift 2 K |<m1>|^2 implied by a bare
// Kerr coefficient and a mean-field amplitude. Not used by the fluctuation
// pipeline, which takes kerr_shift_k directly.
double linearized_kerr_shift(const MeanFieldState& mean_field, double kerr_K);

// The 8x8 drift matrix of the linearized quantum Langevin equations in
// quadrature ordering (dX, dY, dx1, dy1, dx2, dy2, dq, dp).
Eigen::Matrix<double, 8, 8> build_drift(const PhysicalParams& p);

// The 8x8 diagonal diffusion matrix
// diag[kappa_c(2Nc+1) x2, kappa_1(2N1+1) x2, kappa_2(2N2+1) x2, 0, gamma_b(2Nb+1)]
// with N_* = thermal_occupation(omega_*, T). The seventh entry is exactly zero.
Eigen::Matrix<double, 8, 8> build_diffusion(const PhysicalParams& p);

// Outcome of one steady-state evaluation. Instability is a result state, not
// an error; nu_minus / log_neg are absent in that case.
struct EntanglementResult {
  bool stable = false;
  double max_real_part = 0.0;  // largest eigenvalue real part of the drift matrix
  std::optional<double> nu_minus;
  std::optional<double> log_neg;
};

// Full pipeline for one parameter point: drift + diffusion, Hurwitz check,
// steady-state covariance, magnon-magnon block (mode indices 1 and 2 in the
// ordering cavity = 0, magnon1 = 1, magnon2 = 2, mechanics = 3), logarithmic
// negativity. Solver failures propagate as exceptions.
EntanglementResult compute_entanglement(const PhysicalParams& p);

}  // namespace magnomech
