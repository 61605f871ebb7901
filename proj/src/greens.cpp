#include "floquet/greens.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/LU>
#include <fmt/format.h>

namespace floquet {

double BathSpec::distribution(double nu) const {
  if (std::isinf(beta)) return nu > 0.0 ? 1.0 : (nu < 0.0 ? -1.0 : 0.0);
  return std::tanh(0.5 * beta * nu);
}

void BathSpec::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("bath: gamma must be positive");
  }
  if (!(beta > 0.0)) throw std::invalid_argument("bath: beta must be positive");
}

BathSelfEnergy bath_self_energy(const BathSpec& bath, double nu, int n, double omega) {
  const double f = bath.distribution(nu + n * omega);
  return {-I * bath.gamma, I * bath.gamma, -2.0 * I * bath.gamma * f};
}

std::vector<double> fbz_frequency_grid(double omega, int points) {
  if (points < 1) throw std::invalid_argument("fbz_frequency_grid: points must be >= 1");
  std::vector<double> nu(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) nu[j] = -0.5 * omega + (j + 0.5) * omega / points;
  return nu;
}

Matrix GreensFunctionGrid::block(const Matrix& g, int m, int n) const {
  return g.block((m + cutoff) * dim, (n + cutoff) * dim, dim, dim);
}

GreensFunctionGrid floquet_greens(const FourierModeSet& modes, const BathSpec& bath, int cutoff,
                                  const std::vector<double>& nu_grid) {
  bath.validate();
  if (cutoff < modes.n_max()) {
    throw std::invalid_argument(fmt::format(
        "floquet_greens: cutoff M = {} < n_max = {}", cutoff, modes.n_max()));
  }
  const int dim = modes.dim();
  const int nb = 2 * cutoff + 1;
  const int size = nb * dim;
  const double omega = modes.omega();

  // ν - 𝓗_F + iΓ with 𝓗_F the Sambe matrix; only the ν shift changes across the grid.
  Matrix base = Matrix::Zero(size, size);
  for (int m = -cutoff; m <= cutoff; ++m) {
    for (int n = -cutoff; n <= cutoff; ++n) {
      const int diff = m - n;
      if (std::abs(diff) > modes.n_max()) continue;
      base.block((m + cutoff) * dim, (n + cutoff) * dim, dim, dim) = -modes.mode(diff);
    }
    base.block((m + cutoff) * dim, (m + cutoff) * dim, dim, dim).diagonal().array() +=
        m * omega + I * bath.gamma;
  }

  GreensFunctionGrid grid;
  grid.omega = omega;
  grid.cutoff = cutoff;
  grid.dim = dim;
  grid.nu = nu_grid;
  grid.retarded.reserve(nu_grid.size());
  grid.advanced.reserve(nu_grid.size());
  grid.keldysh.reserve(nu_grid.size());
  Eigen::VectorXcd sigma_k(size);
  for (double nu : nu_grid) {
    Matrix inv = base;
    inv.diagonal().array() += nu;
    Matrix gr = inv.partialPivLu().inverse();
    Matrix ga = gr.adjoint();
    for (int n = -cutoff; n <= cutoff; ++n) {
      sigma_k.segment((n + cutoff) * dim, dim).setConstant(bath_self_energy(bath, nu, n, omega).keldysh);
    }
    grid.keldysh.push_back(gr * sigma_k.asDiagonal() * ga);
    grid.retarded.push_back(std::move(gr));
    grid.advanced.push_back(std::move(ga));
  }
  return grid;
}

namespace {

template <typename Entry>
UnfoldedSpectrum unfold(const GreensFunctionGrid& grid, int window, Entry entry) {
  const int w = window < 0 ? grid.cutoff : std::min(window, grid.cutoff);
  UnfoldedSpectrum out;
  for (int n = -w; n <= w; ++n) {
    for (std::size_t j = 0; j < grid.nu.size(); ++j) {
      out.nu.push_back(grid.nu[j] + n * grid.omega);
      out.value.push_back(entry(j, n));
    }
  }
  return out;
}

}  // namespace

UnfoldedSpectrum spectral_function(const GreensFunctionGrid& grid, int window) {
  return unfold(grid, window, [&](std::size_t j, int n) {
    return -grid.block(grid.retarded[j], n, n).trace().imag() / pi;
  });
}

UnfoldedSpectrum occupation_function(const GreensFunctionGrid& grid, int window) {
  return unfold(grid, window, [&](std::size_t j, int n) {
    const cplx lesser = 0.5 * (grid.block(grid.keldysh[j], n, n).trace() -
                               grid.block(grid.retarded[j], n, n).trace() +
                               grid.block(grid.advanced[j], n, n).trace());
    return (lesser / (2.0 * pi * I)).real();
  });
}

}  // namespace floquet
