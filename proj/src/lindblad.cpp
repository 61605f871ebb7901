#include "floquet/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>
#include <fmt/format.h>

namespace floquet {

int LindbladSystem::dim() const {
  if (!hamiltonian) throw std::invalid_argument("LindbladSystem: missing Hamiltonian");
  return static_cast<int>(hamiltonian(0.0).rows());
}

void LindbladSystem::validate() const {
  const int d = dim();
  for (const auto& l : jumps) {
    if (l.rows() != d || l.cols() != d) {
      throw std::invalid_argument("LindbladSystem: jump operator dimension mismatch");
    }
  }
}

Matrix lindblad_rhs(const LindbladSystem& sys, const Matrix& rho, double t) {
  const Matrix h = sys.hamiltonian(t);
  Matrix out = -I * (h * rho - rho * h);
  for (const auto& l : sys.jumps) {
    const Matrix ldl = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

namespace {

double spectral_norm(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

Matrix rk4_step(const LindbladSystem& sys, const Matrix& rho, double t, double dt) {
  const Matrix k1 = lindblad_rhs(sys, rho, t);
  const Matrix k2 = lindblad_rhs(sys, rho + 0.5 * dt * k1, t + 0.5 * dt);
  const Matrix k3 = lindblad_rhs(sys, rho + 0.5 * dt * k2, t + 0.5 * dt);
  const Matrix k4 = lindblad_rhs(sys, rho + dt * k3, t + dt);
  return rho + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

int step_count(double span, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("evolve_lindblad: dt must be positive");
  return std::max(1, static_cast<int>(std::ceil(std::abs(span) / dt - 1e-9)));
}

}  // namespace

Trajectory evolve_lindblad(const LindbladSystem& sys, const Matrix& rho0, double t0, double t1,
                           double dt, int record_every) {
  sys.validate();
  if (record_every < 1) throw std::invalid_argument("evolve_lindblad: record_every must be >= 1");
  double scale = spectral_norm(sys.hamiltonian(t0));
  for (const auto& l : sys.jumps) scale += std::pow(spectral_norm(l), 2);
  if (dt * scale >= 0.1) {
    throw std::invalid_argument(fmt::format(
        "evolve_lindblad: dt (|H| + sum |L|^2) = {:.3g} violates the stability bound 0.1",
        dt * scale));
  }
  const int steps = step_count(t1 - t0, dt);
  const double h = (t1 - t0) / steps;
  const cplx trace0 = rho0.trace();

  Trajectory traj;
  traj.t.push_back(t0);
  traj.rho.push_back(rho0);
  traj.min_eigenvalue = hermitian_eigen(0.5 * (rho0 + rho0.adjoint())).values.minCoeff();
  Matrix rho = rho0;
  for (int s = 1; s <= steps; ++s) {
    const double t = t0 + (s - 1) * h;
    rho = rk4_step(sys, rho, t, h);
    const double drift = std::abs(rho.trace() - trace0);
    const double lowest = hermitian_eigen(0.5 * (rho + rho.adjoint())).values.minCoeff();
    traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
    traj.max_hermiticity_error = std::max(traj.max_hermiticity_error, hermiticity_error(rho));
    traj.min_eigenvalue = std::min(traj.min_eigenvalue, lowest);
    if (drift > 1e-6) {
      throw SolverError(fmt::format("evolve_lindblad: trace drift {:.3e} at t = {:.6g}", drift,
                                    t + h));
    }
    if (lowest < -1e-6) {
      throw SolverError(fmt::format("evolve_lindblad: negative eigenvalue {:.3e} at t = {:.6g}",
                                    lowest, t + h));
    }
    if (s % record_every == 0 || s == steps) {
      traj.t.push_back(t0 + s * h);
      traj.rho.push_back(rho);
    }
  }
  return traj;
}

NessResult find_ness(const LindbladSystem& sys, double omega, double tol, int max_periods,
                     int steps_per_period, int samples) {
  sys.validate();
  if (!(omega > 0.0)) throw std::invalid_argument("find_ness: omega must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("find_ness: tol must be positive");
  if (max_periods < 1 || steps_per_period < 1 || samples < 1) {
    throw std::invalid_argument("find_ness: max_periods, steps_per_period and samples must be >= 1");
  }
  const bool dissipative =
      std::any_of(sys.jumps.begin(), sys.jumps.end(), [](const Matrix& l) { return max_abs(l) > 0.0; });
  if (!dissipative) throw std::invalid_argument("find_ness: at least one jump operator must be nonzero");

  const int d = sys.dim();
  const double period = 2.0 * pi / omega;
  const double h = period / steps_per_period;

  // Φ_T is linear in ρ: tabulate it once on the matrix-unit basis, column-major vec.
  Matrix phi(d * d, d * d);
  for (int c = 0; c < d * d; ++c) {
    Matrix rho = Matrix::Zero(d, d);
    rho(c % d, c / d) = 1.0;
    for (int s = 0; s < steps_per_period; ++s) rho = rk4_step(sys, rho, s * h, h);
    phi.col(c) = Eigen::Map<const Vector>(rho.data(), d * d);
  }

  Vector vec = (Matrix::Identity(d, d) / static_cast<double>(d)).reshaped();
  NessResult result;
  for (int p = 1; p <= max_periods; ++p) {
    Vector next = phi * vec;
    result.residual = (next - vec).cwiseAbs().maxCoeff();
    result.periods = p;
    vec = std::move(next);
    if (result.residual < tol) break;
  }
  if (result.residual >= tol) {
    throw SolverError(fmt::format(
        "find_ness: no convergence after {} periods (residual {:.3e} >= tol {:.3e})", max_periods,
        result.residual, tol));
  }

  Matrix rho = Eigen::Map<const Matrix>(vec.data(), d, d);
  const int every = std::max(1, steps_per_period / samples);
  result.t.push_back(0.0);
  result.rho.push_back(rho);
  for (int s = 1; s <= steps_per_period; ++s) {
    rho = rk4_step(sys, rho, (s - 1) * h, h);
    if (s % every == 0 || s == steps_per_period) {
      result.t.push_back(s * h);
      result.rho.push_back(rho);
    }
  }
  return result;
}

}  // namespace floquet
