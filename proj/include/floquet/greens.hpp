#pragma once

#include <vector>

#include "floquet/linalg.hpp"
#include "floquet/models.hpp"

namespace floquet {

/// Flat-band free-fermion bath: retarded self-energy -iΓ, temperature 1/β,
/// chemical potential 0. beta = +inf is the zero-temperature limit.
struct BathSpec {
  double gamma = 0.05;
  double beta = 20.0;

  /// F(ν) = tanh(βν/2); sign(ν) at β = ∞ (F(0) = 0).
  double distribution(double nu) const;
  void validate() const;
};

struct BathSelfEnergy {
  cplx retarded;
  cplx advanced;
  cplx keldysh;
};

/// Diagonal entry of block n: Σ^R = -iΓ, Σ^A = +iΓ, Σ^K = -2iΓ F(ν + nω).
BathSelfEnergy bath_self_energy(const BathSpec& bath, double nu, int n, double omega);

/// Uniform midpoint grid ν_j = -ω/2 + (j + 1/2) ω / points over [-ω/2, ω/2).
/// Odd `points` put a node at ν = 0.
std::vector<double> fbz_frequency_grid(double omega, int points);

inline constexpr int default_frequency_points = 401;

/// Floquet-matrix Green's functions of a noninteracting driven system coupled to the bath.
struct GreensFunctionGrid {
  double omega = 0.0;
  int cutoff = 0;
  int dim = 0;
  std::vector<double> nu;
  std::vector<Matrix> retarded;
  std::vector<Matrix> advanced;
  std::vector<Matrix> keldysh;

  /// Block (m, n) of a Floquet matrix on this grid.
  Matrix block(const Matrix& g, int m, int n) const;
};

/// G^R(ν) = [(ν + mω) δ_mn - H_{m-n} + iΓ δ_mn]^{-1}, G^A = (G^R)^†,
/// G^K = G^R Σ^K G^A. Requires cutoff >= n_max.
GreensFunctionGrid floquet_greens(const FourierModeSet& modes, const BathSpec& bath, int cutoff,
                                  const std::vector<double>& nu_grid);

/// A function on the unfolded axis ν̃ = ν + nω, ascending in ν̃.
struct UnfoldedSpectrum {
  std::vector<double> nu;
  std::vector<double> value;
};

/// A(ν + nω) = -(1/π) Im tr[G^R(ν)]_nn for |n| <= window (window < 0: all blocks).
UnfoldedSpectrum spectral_function(const GreensFunctionGrid& grid, int window = -1);

/// N(ν + nω) = tr[G^<(ν)]_nn / (2πi) with G^< = (G^K - G^R + G^A) / 2.
UnfoldedSpectrum occupation_function(const GreensFunctionGrid& grid, int window = -1);

}  // namespace floquet
