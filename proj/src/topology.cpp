#include "floquet/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "floquet/sambe.hpp"

namespace floquet {

const Vector& BandGrid::state(int i, int j, int band) const {
  i = ((i % nk) + nk) % nk;
  j = ((j % nk) + nk) % nk;
  return states[static_cast<std::size_t>((i * nk + j) * n_bands + band)];
}

honeycomb::Vec2 BandGrid::k(int i, int j) const {
  const double fi = static_cast<double>(i) / nk;
  const double fj = static_cast<double>(j) / nk;
  return {fi * reciprocal[0][0] + fj * reciprocal[1][0],
          fi * reciprocal[0][1] + fj * reciprocal[1][1]};
}

namespace {

void check_grid(int nk) {
  if (nk < 2) throw std::invalid_argument("band grid: nk must be >= 2");
}

}  // namespace

BandGrid static_band_grid(const BlochFunction& bloch, int nk,
                          const std::array<honeycomb::Vec2, 2>& reciprocal) {
  check_grid(nk);
  BandGrid grid;
  grid.nk = nk;
  grid.reciprocal = reciprocal;
  for (int i = 0; i < nk; ++i) {
    for (int j = 0; j < nk; ++j) {
      const auto kv = grid.k(i, j);
      const auto eig = hermitian_eigen(bloch(kv[0], kv[1]));
      grid.n_bands = static_cast<int>(eig.values.size());
      for (int b = 0; b < grid.n_bands; ++b) grid.states.push_back(eig.vectors.col(b).normalized());
      grid.energies.push_back(eig.values);
    }
  }
  return grid;
}

BandGrid floquet_band_grid(const ModesFunction& modes, int cutoff, int nk,
                           const std::array<honeycomb::Vec2, 2>& reciprocal) {
  check_grid(nk);
  BandGrid grid;
  grid.nk = nk;
  grid.reciprocal = reciprocal;
  bool ambiguous = false;
  for (int i = 0; i < nk; ++i) {
    for (int j = 0; j < nk; ++j) {
      const auto kv = grid.k(i, j);
      const auto fm = modes(kv[0], kv[1]);
      grid.energy_period = fm.omega();
      const auto band = physical_quasienergies(fm, cutoff);
      ambiguous = ambiguous || band.ambiguous;
      grid.n_bands = band.size();
      for (int b = 0; b < band.size(); ++b) grid.states.push_back(band.vectors.col(b).normalized());
      grid.energies.push_back(band.folded);
    }
  }
  if (ambiguous) {
    grid.warnings.push_back("replica identification ambiguous at some k-points");
  }
  return grid;
}

double CurvatureField::total() const {
  double sum = 0.0;
  for (double f : phases) sum += f;
  return sum;
}

CurvatureField berry_curvature_grid(const BandGrid& bands, int band_index) {
  if (band_index < 0 || band_index >= bands.n_bands) {
    throw std::out_of_range("berry_curvature_grid: band index out of range");
  }
  const int nk = bands.nk;
  CurvatureField field;
  field.nk = nk;
  field.phases.resize(static_cast<std::size_t>(nk * nk));
  field.warnings = bands.warnings;

  double min_gap = std::numeric_limits<double>::infinity();
  for (const auto& e : bands.energies) {
    const int nb = bands.n_bands;
    if (nb < 2) break;
    for (int other : {band_index - 1, band_index + 1}) {
      if (bands.energy_period > 0.0) {
        min_gap = std::min(min_gap, circular_distance(e(band_index), e(((other % nb) + nb) % nb),
                                                      bands.energy_period));
      } else if (other >= 0 && other < nb) {
        min_gap = std::min(min_gap, std::abs(e(other) - e(band_index)));
      }
    }
  }
  field.min_gap = min_gap;
  if (min_gap < 1e-6) {
    field.warnings.push_back(
        fmt::format("band {} gap closes on the grid (min gap {:.3e}); Chern number ill-defined",
                    band_index, min_gap));
  }

  for (int i = 0; i < nk; ++i) {
    for (int j = 0; j < nk; ++j) {
      const Vector& u1 = bands.state(i, j, band_index);
      const Vector& u2 = bands.state(i + 1, j, band_index);
      const Vector& u3 = bands.state(i + 1, j + 1, band_index);
      const Vector& u4 = bands.state(i, j + 1, band_index);
      const cplx loop = u1.dot(u2) * u2.dot(u3) * u3.dot(u4) * u4.dot(u1);
      field.phases[static_cast<std::size_t>(i * nk + j)] = std::arg(loop);
    }
  }
  return field;
}

ChernResult chern_number(const CurvatureField& field, double tolerance) {
  const double winding = field.total() / (2.0 * pi);
  ChernResult r;
  r.chern = static_cast<int>(std::lround(winding));
  r.residual = std::abs(winding - r.chern);
  if (r.residual >= tolerance) {
    throw SolverError(fmt::format(
        "chern_number: non-integer winding {:.6f} (residual {:.2e}); refine the grid or check "
        "for a gap closing",
        winding, r.residual));
  }
  return r;
}

}  // namespace floquet
