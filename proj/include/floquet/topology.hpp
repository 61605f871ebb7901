#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "floquet/linalg.hpp"
#include "floquet/models.hpp"

namespace floquet {

/// Band eigenvectors on an nk x nk grid k_ij = (i b_1 + j b_2) / nk covering one
/// Brillouin zone. Indices wrap, so the Hamiltonian must be periodic in k
/// (use BlochGauge::periodic for the honeycomb).
struct BandGrid {
  int nk = 0;
  int n_bands = 0;
  /// Zero for static bands; ω for quasienergy bands (gaps measured on the circle).
  double energy_period = 0.0;
  std::array<honeycomb::Vec2, 2> reciprocal{};
  /// states[(i * nk + j) * n_bands + b], normalised
  std::vector<Vector> states;
  /// energies[i * nk + j](b), ascending in b
  std::vector<RealVector> energies;
  std::vector<std::string> warnings;

  const Vector& state(int i, int j, int band) const;
  honeycomb::Vec2 k(int i, int j) const;
};

using BlochFunction = std::function<Matrix(double kx, double ky)>;
using ModesFunction = std::function<FourierModeSet(double kx, double ky)>;

/// Eigenvectors of a static Bloch Hamiltonian.
BandGrid static_band_grid(const BlochFunction& bloch, int nk,
                          const std::array<honeycomb::Vec2, 2>& reciprocal);

/// Physical Floquet bands from the Sambe matrix at each k. Each band vector is
/// the full extended vector (all replica blocks), normalised.
BandGrid floquet_band_grid(const ModesFunction& modes, int cutoff, int nk,
                           const std::array<honeycomb::Vec2, 2>& reciprocal);

/// Plaquette Berry phases F_ij ∈ (-π, π] of one band.
struct CurvatureField {
  int nk = 0;
  std::vector<double> phases;  // phases[i * nk + j]
  /// Smallest gap between the band and its neighbours over the grid.
  double min_gap = 0.0;
  std::vector<std::string> warnings;

  double flux(int i, int j) const { return phases[static_cast<std::size_t>(i * nk + j)]; }
  double total() const;
};

/// Lattice field strength F = arg(<u1|u2><u2|u3><u3|u4><u4|u1>) around each
/// plaquette. Warns when the band gap drops below 1e-6.
CurvatureField berry_curvature_grid(const BandGrid& bands, int band_index);

struct ChernResult {
  int chern = 0;
  double residual = 0.0;
};

/// round(sum F / 2π). Throws SolverError when |sum F / 2π - chern| >= tolerance.
ChernResult chern_number(const CurvatureField& field, double tolerance = 1e-3);

inline constexpr int default_chern_grid = 24;

}  // namespace floquet
