#include "floquet/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace floquet {

namespace {

int pro_rata_steps(double span, double period, int steps_per_period) {
  return std::max(1, static_cast<int>(std::ceil(std::abs(span) / period * steps_per_period)));
}

}  // namespace

Matrix evolve(const Sampler& sampler, double t0, double t1, int n_steps) {
  if (n_steps < 1) throw std::invalid_argument("evolve: n_steps must be >= 1");
  const double dt = (t1 - t0) / n_steps;
  Matrix u;
  for (int j = 0; j < n_steps; ++j) {
    const Matrix step = exp_minus_i(sampler(t0 + (j + 0.5) * dt), dt);
    u = j == 0 ? step : Matrix(step * u);
  }
  return u;
}

StroboscopicHF stroboscopic_hf(const Sampler& sampler, double s, double omega, int n_steps) {
  if (!(omega > 0.0)) throw std::invalid_argument("stroboscopic_hf: omega must be positive");
  const double period = 2.0 * pi / omega;
  const Matrix u = evolve(sampler, s, s + period, n_steps);
  const auto eig = unitary_eigen(u);

  RealVector eps(eig.values.size());
  for (Eigen::Index j = 0; j < eps.size(); ++j) {
    const double phase = std::arg(eig.values(j));
    if (pi - std::abs(phase) < 1e-10) {
      throw BranchCutError(fmt::format(
          "stroboscopic_hf: eigenphase {:.12f} within 1e-10 of the branch cut (quasienergy at "
          "the zone edge)",
          phase));
    }
    eps(j) = -phase / period;
  }
  StroboscopicHF hf;
  hf.s = s;
  hf.omega = omega;
  hf.matrix = eig.vectors * eps.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
  hf.matrix = 0.5 * (hf.matrix + hf.matrix.adjoint()).eval();
  hf.quasienergies = eps;
  std::sort(hf.quasienergies.begin(), hf.quasienergies.end());
  return hf;
}

Matrix micromotion(const Sampler& sampler, const StroboscopicHF& hf, double t, int n_steps) {
  const double period = 2.0 * pi / hf.omega;
  const Matrix u = evolve(sampler, hf.s, t, pro_rata_steps(t - hf.s, period, n_steps));
  return u * exp_minus_i(hf.matrix, -(t - hf.s));
}

Matrix micromotion(const Sampler& sampler, double s, double t, double omega, int n_steps) {
  return micromotion(sampler, stroboscopic_hf(sampler, s, omega, n_steps), t, n_steps);
}

RealVector quasienergies_from_monodromy(const Matrix& u, double omega) {
  const auto eig = unitary_eigen(u);
  RealVector eps(eig.values.size());
  for (Eigen::Index j = 0; j < eps.size(); ++j) {
    eps(j) = -omega / (2.0 * pi) * std::arg(eig.values(j));
    // arg can return -π for a signed-zero imaginary part
    if (eps(j) >= 0.5 * omega) eps(j) -= omega;
  }
  std::sort(eps.begin(), eps.end());
  return eps;
}

}  // namespace floquet
