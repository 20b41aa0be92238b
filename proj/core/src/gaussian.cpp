#include "magnomech/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace magnomech::gaussian {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kResidualTol = 1e-10;
constexpr double kPhysicalitySlack = 1e-9;

void require_square_finite(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    std::ostringstream msg;
    msg << what << " must be square and nonempty, got " << m.rows() << "x" << m.cols();
    throw InvalidInput(msg.str());
  }
  if (!m.allFinite()) {
    throw InvalidInput(std::string(what) + " has non-finite entries");
  }
}

std::string unstable_message(const StabilityReport& r) {
  std::ostringstream msg;
  msg << "drift matrix is not Hurwitz (max eigenvalue real part " << r.max_real_part
      << "); no steady state exists";
  return msg.str();
}

}  // namespace

UnstableSystem::UnstableSystem(StabilityReport r)
    : Error(unstable_message(r)), report(std::move(r)) {}

StabilityReport is_hurwitz(const Matrix& a) {
  require_square_finite(a, "stability input");
  Eigen::EigenSolver<Matrix> eig(a, /*computeEigenvectors=*/false);
  StabilityReport report;
  report.spectrum.reserve(static_cast<std::size_t>(a.rows()));
  report.max_real_part = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const std::complex<double> lambda = eig.eigenvalues()[i];
    report.spectrum.push_back(lambda);
    report.max_real_part = std::max(report.max_real_part, lambda.real());
  }
  report.is_hurwitz = report.max_real_part < 0.0;
  return report;
}

double lyapunov_residual(const Matrix& a, const Matrix& d, const Matrix& v) {
  const double num = (a * v + v * a.transpose() + d).norm();
  return num / std::max(d.norm(), kEps);
}

namespace {

// Shared entry checks for both Lyapunov solvers; returns the stability report
// so callers can reuse the spectrum.
StabilityReport check_lyapunov_inputs(const Matrix& a, const Matrix& d) {
  require_square_finite(a, "drift matrix");
  require_square_finite(d, "diffusion matrix");
  if (a.rows() != d.rows()) {
    std::ostringstream msg;
    msg << "dimension mismatch: drift is " << a.rows() << "x" << a.cols()
        << ", diffusion is " << d.rows() << "x" << d.cols();
    throw InvalidInput(msg.str());
  }
  StabilityReport report = is_hurwitz(a);
  if (!report.is_hurwitz) throw UnstableSystem(std::move(report));
  return report;
}

}  // namespace

Matrix solve_lyapunov(const Matrix& a, const Matrix& d) {
  check_lyapunov_inputs(a, d);
  const Eigen::Index n = a.rows();

  // (I (x) A + A (x) I) vec(V) = -vec(D), column-major vec.
  Matrix kron = Matrix::Zero(n * n, n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    kron.block(j * n, j * n, n, n) += a;            // I (x) A
    for (Eigen::Index i = 0; i < n; ++i) {
      kron.block(j * n, i * n, n, n).diagonal().array() += a(j, i);  // A (x) I
    }
  }

  Eigen::VectorXd rhs(n * n);
  for (Eigen::Index j = 0; j < n; ++j) rhs.segment(j * n, n) = -d.col(j);

  const Eigen::VectorXd x = kron.partialPivLu().solve(rhs);
  Matrix v(n, n);
  for (Eigen::Index j = 0; j < n; ++j) v.col(j) = x.segment(j * n, n);
  v = ((v + v.transpose()) / 2.0).eval();

  const double res = lyapunov_residual(a, d, v);
  if (!(res < kResidualTol) || !v.allFinite()) {
    std::ostringstream msg;
    msg << "Lyapunov solve failed the residual check: " << res << " >= " << kResidualTol;
    throw ConvergenceError(msg.str());
  }
  return v;
}

Matrix solve_lyapunov_by_integration(const Matrix& a, const Matrix& d, double tol,
                                     std::int64_t max_steps) {
  const StabilityReport report = check_lyapunov_inputs(a, d);
  if (!(tol > 0.0)) throw InvalidInput("integration tolerance must be positive");

  double rho = 0.0;
  for (const auto& lambda : report.spectrum) rho = std::max(rho, std::abs(lambda));
  // The Lyapunov operator's spectrum is {lambda_i + lambda_j}; keep
  // |h (lambda_i + lambda_j)| <= 2.5, inside the RK4 stability region.
  double h = (rho > 0.0) ? 1.25 / rho : 1.0;

  const double d_norm = std::max(d.norm(), kEps);
  const double stop = tol * d_norm;

  Matrix v = Matrix::Zero(a.rows(), a.cols());
  Matrix k1, k2, k3, k4;
  const auto rhs = [&](const Matrix& x) -> Matrix {
    return a * x + x * a.transpose() + d;
  };

  double best_norm = std::numeric_limits<double>::infinity();
  std::int64_t steps = 0;
  while (steps < max_steps) {
    for (int burst = 0; burst < 16 && steps < max_steps; ++burst, ++steps) {
      k1 = rhs(v);
      k2 = rhs(v + (h / 2.0) * k1);
      k3 = rhs(v + (h / 2.0) * k2);
      k4 = rhs(v + h * k3);
      v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    const double f_norm = rhs(v).norm();
    if (f_norm < stop && v.allFinite()) {
      v = ((v + v.transpose()) / 2.0).eval();
      return v;
    }
    if (!std::isfinite(f_norm) || f_norm > 4.0 * std::max(best_norm, d_norm)) {
      // Diverging: the step was outside the stability region (spectral radius
      // estimate too optimistic for a non-normal matrix). Halve and restart;
      // convergence of the linear iteration is global, so nothing is lost.
      h /= 2.0;
      v.setZero();
      best_norm = std::numeric_limits<double>::infinity();
      continue;
    }
    best_norm = std::min(best_norm, f_norm);
  }
  std::ostringstream msg;
  msg << "Lyapunov integration did not reach tolerance " << tol << " within " << max_steps
      << " steps";
  throw ConvergenceError(msg.str());
}

Eigen::Matrix4d TwoModeBlock::assemble() const {
  Eigen::Matrix4d v0;
  v0.topLeftCorner<2, 2>() = v1;
  v0.topRightCorner<2, 2>() = v12;
  v0.bottomLeftCorner<2, 2>() = v12.transpose();
  v0.bottomRightCorner<2, 2>() = v2;
  return v0;
}

TwoModeBlock two_mode_block(const Matrix& v, int mode_i, int mode_j) {
  require_square_finite(v, "covariance matrix");
  if (mode_i == mode_j) throw InvalidInput("two_mode_block requires distinct modes");
  if (mode_i < 0 || mode_j < 0) throw InvalidInput("mode indices must be nonnegative");
  const Eigen::Index needed = 2 * (std::max(mode_i, mode_j) + 1);
  if (v.rows() < needed) {
    std::ostringstream msg;
    msg << "covariance matrix of size " << v.rows() << " has no mode pair (" << mode_i
        << ", " << mode_j << ")";
    throw InvalidInput(msg.str());
  }
  const Eigen::Index i = 2 * mode_i;
  const Eigen::Index j = 2 * mode_j;
  TwoModeBlock block;
  block.v1 = v.block<2, 2>(i, i);
  block.v2 = v.block<2, 2>(j, j);
  block.v12 = v.block<2, 2>(i, j);
  return block;
}

LogNegativity log_negativity(const TwoModeBlock& v0) {
  const double det1 = v0.v1.determinant();
  const double det2 = v0.v2.determinant();
  const double det12 = v0.v12.determinant();
  const double det0 = v0.assemble().determinant();

  // Partial transpose flips the sign of det V12.
  const double sigma = det1 + det2 - 2.0 * det12;

  double disc = sigma * sigma - 4.0 * det0;
  if (disc < 0.0) {
    if (disc < -kPhysicalitySlack) {
      std::ostringstream msg;
      msg << "non-physical two-mode covariance block: discriminant " << disc;
      throw InvalidState(msg.str());
    }
    disc = 0.0;
  }

  double inner = (sigma - std::sqrt(disc)) / 2.0;
  if (inner <= 0.0) {
    if (inner < -kPhysicalitySlack) {
      std::ostringstream msg;
      msg << "non-physical two-mode covariance block: nu^2 = " << inner;
      throw InvalidState(msg.str());
    }
    throw InvalidState("two-mode covariance block has a vanishing symplectic eigenvalue");
  }

  LogNegativity result;
  result.nu_minus = std::sqrt(inner);
  result.e_n = std::max(0.0, -std::log(2.0 * result.nu_minus));
  return result;
}

std::vector<double> symplectic_eigenvalues(const Matrix& v) {
  require_square_finite(v, "covariance matrix");
  if (v.rows() % 2 != 0) throw InvalidInput("covariance matrix must have even dimension");
  const Eigen::Index n_modes = v.rows() / 2;

  Matrix omega = Matrix::Zero(v.rows(), v.rows());
  for (Eigen::Index m = 0; m < n_modes; ++m) {
    omega(2 * m, 2 * m + 1) = 1.0;
    omega(2 * m + 1, 2 * m) = -1.0;
  }

  // Eigenvalues of (Omega V) are +-i nu_k; the moduli give each nu_k twice.
  Eigen::EigenSolver<Matrix> eig(omega * v, /*computeEigenvectors=*/false);
  std::vector<double> moduli;
  moduli.reserve(static_cast<std::size_t>(v.rows()));
  for (Eigen::Index i = 0; i < v.rows(); ++i) moduli.push_back(std::abs(eig.eigenvalues()[i]));
  std::sort(moduli.begin(), moduli.end());

  std::vector<double> nus;
  nus.reserve(static_cast<std::size_t>(n_modes));
  for (Eigen::Index k = 0; k < n_modes; ++k) nus.push_back(moduli[static_cast<std::size_t>(2 * k)]);
  return nus;
}

}  // namespace magnomech::gaussian
