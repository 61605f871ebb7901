#pragma once

#include "floquet/linalg.hpp"

namespace floquet {

/// Time-ordered propagator U(t1, t0) as a product of midpoint exponentials
/// exp(-i Δt H(t_j + Δt/2)), later times to the left. Second order in Δt and
/// unitary at every step. Works for t1 < t0 as well (backward propagation).
Matrix evolve(const Sampler& sampler, double t0, double t1, int n_steps);

inline constexpr int default_steps_per_period = 4096;

/// Stroboscopic Floquet Hamiltonian H_F(s) defined by U(s + T, s) = exp(-i H_F(s) T).
struct StroboscopicHF {
  double s = 0.0;
  double omega = 0.0;
  Matrix matrix;
  /// Eigenvalues of `matrix`, ascending.
  RealVector quasienergies;
};

/// Matrix logarithm of the monodromy through its Schur eigenbasis, eigenphases
/// taken in (-π, π]. Throws BranchCutError when an eigenphase lies within 1e-10
/// of π, where the logarithm branch is ambiguous.
StroboscopicHF stroboscopic_hf(const Sampler& sampler, double s, double omega,
                               int n_steps = default_steps_per_period);

/// Micromotion operator P_s(t) = U(t, s) exp(i (t - s) H_F(s)).
/// `n_steps` is per period; U(t, s) uses it pro rata.
Matrix micromotion(const Sampler& sampler, double s, double t, double omega,
                   int n_steps = default_steps_per_period);

/// Same as above with a precomputed H_F(s).
Matrix micromotion(const Sampler& sampler, const StroboscopicHF& hf, double t,
                   int n_steps = default_steps_per_period);

/// ε_j = -(ω / 2π) arg λ_j with arg in (-π, π], so ε_j ∈ [-ω/2, ω/2). Ascending.
RealVector quasienergies_from_monodromy(const Matrix& u, double omega);

}  // namespace floquet
