#pragma once

#include <vector>

#include "floquet/linalg.hpp"

namespace floquet {

/// Time-periodic system Hamiltonian with jump operators {L_j}.
struct LindbladSystem {
  Sampler hamiltonian;
  std::vector<Matrix> jumps;

  int dim() const;
  /// Throws std::invalid_argument if dimensions disagree.
  void validate() const;
};

/// dρ/dt = -i[H(t), ρ] + sum_j (L_j ρ L_j^† - {L_j^† L_j, ρ} / 2)
Matrix lindblad_rhs(const LindbladSystem& sys, const Matrix& rho, double t);

struct Trajectory {
  std::vector<double> t;
  std::vector<Matrix> rho;
  double max_trace_drift = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
};

/// Classical RK4 on lindblad_rhs, no renormalisation. The step is shrunk so that an
/// integer number of steps spans [t0, t1]. Every `record_every`-th state is stored,
/// plus the final one.
///
/// Throws std::invalid_argument if dt (||H(t0)|| + sum ||L_j||^2) >= 0.1 and
/// SolverError if the trace drifts by more than 1e-6 or an eigenvalue drops
/// below -1e-6.
Trajectory evolve_lindblad(const LindbladSystem& sys, const Matrix& rho0, double t0, double t1,
                           double dt, int record_every = 1);

struct NessResult {
  std::vector<double> t;
  std::vector<Matrix> rho;
  int periods = 0;
  double residual = 0.0;
};

/// Time-periodic steady state by fixed-point iteration of the one-period map
/// Φ_T (RK4 with steps_per_period steps), started from the maximally mixed state
/// at t = 0, until max|Φ_T(ρ) - ρ| < tol. The returned trajectory samples one
/// period [0, T] at `samples` + 1 points.
///
/// Throws std::invalid_argument without dissipation and SolverError when
/// max_periods is exhausted (the message carries the final residual).
NessResult find_ness(const LindbladSystem& sys, double omega, double tol, int max_periods,
                     int steps_per_period = 2048, int samples = 64);

}  // namespace floquet
