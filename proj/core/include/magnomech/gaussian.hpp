#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "magnomech/errors.hpp"

// Gaussian-state linear algebra: stability of drift matrices, steady-state
// Lyapunov solutions, and two-mode entanglement measures. Everything here is
// independent of the physical model; matrices are plain real Eigen matrices.
//
// Conventions: covariance matrices use quadrature ordering (x1, y1, x2, y2, ...)
// with V_ij = <u_i u_j + u_j u_i>/2 and vacuum variance 1/2. With that
// normalization a bona fide state has every symplectic eigenvalue >= 1/2 and a
// two-mode state is entangled iff the smallest partially transposed symplectic
// eigenvalue drops below 1/2.

namespace magnomech::gaussian {

using Matrix = Eigen::MatrixXd;

// Eigenvalue summary of a drift matrix. The steady-state Lyapunov equation has
// a unique bounded solution iff the matrix is Hurwitz (all eigenvalues in the
// open left half-plane).
struct StabilityReport {
  bool is_hurwitz = false;
  double max_real_part = 0.0;
  std::vector<std::complex<double>> spectrum;
};

// Thrown when a steady-state solve is requested for a non-Hurwitz drift matrix.
struct UnstableSystem : Error {
  explicit UnstableSystem(StabilityReport r);
  StabilityReport report;
};

// Full eigenvalue analysis of a square matrix.
// Throws InvalidInput for non-square or non-finite input.
StabilityReport is_hurwitz(const Matrix& a);

// Solves A V + V A^T + D = 0 for the steady-state covariance matrix V by
// Kronecker vectorization, (I (x) A + A (x) I) vec(V) = -vec(D), as a dense
// n^2 x n^2 LU solve. V is symmetrized on output and the relative residual
// ||A V + V A^T + D||_F / max(||D||_F, eps) is required to be < 1e-10.
// Throws UnstableSystem if A is not Hurwitz, InvalidInput on dimension
// mismatch, ConvergenceError if the residual check fails.
Matrix solve_lyapunov(const Matrix& a, const Matrix& d);

// Independent cross-check for solve_lyapunov: integrates dV/dt = A V + V A^T + D
// from V = 0 with an adaptive classical Runge-Kutta step until the derivative
// norm satisfies ||dV/dt||_F < tol * max(||D||_F, eps). The step size adapts to
// the spectral radius of A and backs off (restarting the decay) if divergence
// is detected. Same error contract as solve_lyapunov, plus ConvergenceError
// when max_steps is exhausted.
Matrix solve_lyapunov_by_integration(const Matrix& a, const Matrix& d,
                                     double tol = 1e-12,
                                     std::int64_t max_steps = 50'000'000);

// Relative Lyapunov residual ||A V + V A^T + D||_F / max(||D||_F, eps).
double lyapunov_residual(const Matrix& a, const Matrix& d, const Matrix& v);

// The three 2x2 blocks of a reduced two-mode covariance matrix
// V0 = [V1, V12; V12^T, V2].
struct TwoModeBlock {
  Eigen::Matrix2d v1;
  Eigen::Matrix2d v2;
  Eigen::Matrix2d v12;

  Eigen::Matrix4d assemble() const;
};

// Extracts the two-mode reduced covariance matrix of modes (mode_i, mode_j)
// from a 2N x 2N covariance matrix, preserving order (x_i, y_i, x_j, y_j).
// Throws InvalidInput for out-of-range or equal indices.
TwoModeBlock two_mode_block(const Matrix& v, int mode_i, int mode_j);

struct LogNegativity {
  double e_n = 0.0;       // logarithmic negativity, max(0, -ln 2 nu_minus)
  double nu_minus = 0.0;  // smallest symplectic eigenvalue of the partial transpose
};

// Logarithmic negativity of a two-mode Gaussian state:
//   Sigma    = det V1 + det V2 - 2 det V12   (the sign flip on det V12 is the
//                                             partial transpose)
//   nu_minus = sqrt((Sigma - sqrt(Sigma^2 - 4 det V0)) / 2)
//   E_N      = max(0, -ln 2 nu_minus)
// Small negative discriminants from round-off (within 1e-9) are clamped to
// zero; anything worse throws InvalidState (non-physical input).
LogNegativity log_negativity(const TwoModeBlock& v0);

// Symplectic spectrum of a 2N x 2N covariance matrix (moduli of the eigenvalues
// of i Sigma V, one per mode, ascending). Physical states have all >= 1/2.
std::vector<double> symplectic_eigenvalues(const Matrix& v);

}  // namespace magnomech::gaussian
