#include "floquet/hfe.hpp"

#include <cmath>
#include <stdexcept>

#include "floquet/bessel.hpp"

namespace floquet {

EffectiveHamiltonianReport van_vleck_hf(const FourierModeSet& modes) {
  EffectiveHamiltonianReport report;
  report.omega = modes.omega();
  report.h0 = modes.mode(0);
  report.correction = Matrix::Zero(modes.dim(), modes.dim());
  for (int n = 1; n <= modes.n_max(); ++n) {
    const Matrix hm = modes.mode(-n);
    const Matrix hp = modes.mode(n);
    report.correction += (hm * hp - hp * hm) / (n * modes.omega());
  }
  report.total = report.h0 + report.correction;
  return report;
}

double effective_hopping_1d(double hopping, double x) { return hopping * bessel_j(0, x); }

namespace {

// sin(2π n / 3) without rounding noise at multiples of 3.
double sin_two_pi_third(int n) {
  switch (((n % 3) + 3) % 3) {
    case 1: return std::sqrt(3.0) / 2.0;
    case 2: return -std::sqrt(3.0) / 2.0;
    default: return 0.0;
  }
}

}  // namespace

HaldaneParameters haldane_effective(double hopping, double amplitude, double omega, int n_cut,
                                    int helicity) {
  if (n_cut < 20) throw std::invalid_argument("haldane_effective: n_cut must be >= 20");
  if (!(omega > 0.0)) throw std::invalid_argument("haldane_effective: omega must be positive");
  if (helicity != 1 && helicity != -1) {
    throw std::invalid_argument("haldane_effective: helicity must be +1 or -1");
  }
  double series = 0.0;
  // Sum from the tail so the small terms are not swamped.
  for (int n = n_cut; n >= 1; --n) {
    const double jn = bessel_j(n, amplitude);
    series += 2.0 * jn * jn * sin_two_pi_third(helicity * n) / n;
  }
  HaldaneParameters p;
  p.j_eff = effective_hopping_1d(hopping, amplitude);
  p.k_eff = -hopping * hopping / omega * series;
  p.helicity = helicity;
  return p;
}

Matrix haldane_bloch(double kx, double ky, const HaldaneParameters& params, BlochGauge gauge) {
  const auto deltas = honeycomb::bond_vectors();
  cplx ab = 0.0;
  for (const auto& d : deltas) ab += std::exp(I * (kx * d[0] + ky * d[1]));
  if (gauge == BlochGauge::periodic) ab *= std::exp(-I * (kx * deltas[0][0] + ky * deltas[0][1]));
  double s = 0.0;
  for (const auto& b : honeycomb::second_neighbour_vectors()) s += std::sin(kx * b[0] + ky * b[1]);

  Matrix h(2, 2);
  h(0, 0) = -2.0 * params.k_eff * s;
  h(1, 1) = 2.0 * params.k_eff * s;
  h(0, 1) = params.j_eff * ab;
  h(1, 0) = std::conj(params.j_eff * ab);
  return h;
}

double dirac_gap(double amplitude, double omega) {
  return std::sqrt(omega * omega + 4.0 * amplitude * amplitude) - omega;
}

}  // namespace floquet
