#pragma once

#include "floquet/linalg.hpp"
#include "floquet/models.hpp"

namespace floquet {

/// Second-order van Vleck effective Hamiltonian
///   H_eff = H_0 + sum_{n >= 1} [H_{-n}, H_n] / (n ω).
struct EffectiveHamiltonianReport {
  double omega = 0.0;
  Matrix h0;
  Matrix correction;
  Matrix total;
};

EffectiveHamiltonianReport van_vleck_hf(const FourierModeSet& modes);

/// J 𝒥_0(x): Bessel-renormalised hopping of the driven chain (x = E/ω) or of the
/// honeycomb nearest-neighbour bond (x = A).
double effective_hopping_1d(double hopping, double x);

/// Effective Haldane couplings of the circularly driven honeycomb lattice.
///
///   J_eff = J 𝒥_0(A)
///   K_eff = -(J^2/ω) sum_{n != 0} 𝒥_n(A)^2 sin(2π n h / 3) / n
///
/// with h the helicity; the n and -n terms are combined. Chirality convention:
/// the imaginary second-neighbour hopping carries τ = +1 along b_i on sublattice A
/// and τ = -1 on sublattice B (see haldane_bloch).
struct HaldaneParameters {
  double j_eff = 0.0;
  double k_eff = 0.0;
  int helicity = +1;
};

/// Throws std::invalid_argument if n_cut < 20.
HaldaneParameters haldane_effective(double hopping, double amplitude, double omega,
                                    int n_cut = 40, int helicity = +1);

/// Bloch matrix of the static Haldane model produced by the expansion:
///   H_AB = J_eff sum_i exp(i k·delta_i),  H_AA = -H_BB = -2 K_eff sum_i sin(k·b_i).
Matrix haldane_bloch(double kx, double ky, const HaldaneParameters& params,
                     BlochGauge gauge = BlochGauge::bond);

/// Quasienergy gap of the circularly driven Dirac cone at k = 0: sqrt(ω² + 4A²) - ω.
double dirac_gap(double amplitude, double omega);

}  // namespace floquet
