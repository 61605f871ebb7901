#include <cmath>
#include <random>

#include "doctest.h"
#include "floquet/hfe.hpp"
#include "floquet/topology.hpp"

using namespace floquet;

namespace {

const auto recip = honeycomb::reciprocal_vectors();

HaldaneParameters haldane(double k_eff) { return {1.0, k_eff, 1}; }

BandGrid haldane_grid(double k_eff, int nk, double mass = 0.0) {
  const auto p = haldane(k_eff);
  return static_band_grid(
      [&](double kx, double ky) {
        return Matrix(haldane_bloch(kx, ky, p, BlochGauge::periodic) + mass * pauli::z());
      },
      nk, recip);
}

int chern_of(const BandGrid& g, int band) { return chern_number(berry_curvature_grid(g, band)).chern; }

BandGrid driven_grid(int helicity, int nk = default_chern_grid) {
  const DriveProtocol drive{10.0, 1.0, Polarization::circular, helicity};
  return floquet_band_grid(
      [&](double kx, double ky) {
        return honeycomb_modes(kx, ky, 1.0, drive, 11, BlochGauge::periodic);
      },
      17, nk, recip);
}

}  // namespace

TEST_SUITE("topology") {

TEST_CASE("trivial insulator has zero Chern number") {
  const auto g = haldane_grid(-0.03, 18, 3.0);
  CHECK(chern_of(g, 0) == 0);
  CHECK(chern_of(g, 1) == 0);
}

TEST_CASE("static Haldane bands carry opposite unit Chern numbers") {
  const auto g = haldane_grid(-0.05, 24);
  const int c0 = chern_of(g, 0);
  CHECK(c0 == 1);
  CHECK(chern_of(g, 1) == -1);
  CHECK(chern_of(haldane_grid(0.05, 24), 0) == -1);
}

TEST_CASE("curvature is invariant under random gauge phases") {
  auto g = haldane_grid(-0.05, 12);
  const auto before = berry_curvature_grid(g, 0);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> phase(-pi, pi);
  for (auto& s : g.states) s *= std::exp(I * phase(rng));
  const auto after = berry_curvature_grid(g, 0);
  double worst = 0.0;
  for (std::size_t i = 0; i < before.phases.size(); ++i) {
    worst = std::max(worst, std::abs(before.phases[i] - after.phases[i]));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("integer check") {
  CurvatureField zero;
  zero.nk = 4;
  zero.phases.assign(16, 0.0);
  CHECK(chern_number(zero).chern == 0);
  CHECK(chern_number(zero).residual == 0.0);

  CurvatureField broken = zero;
  broken.phases[3] = 0.5;
  CHECK_THROWS_AS(chern_number(broken), SolverError);
  CHECK_THROWS_AS(berry_curvature_grid(haldane_grid(-0.05, 6), 2), std::out_of_range);
  CHECK_THROWS_AS(haldane_grid(-0.05, 1), std::invalid_argument);
}

TEST_CASE("Chern numbers sum to zero over all bands") {
  for (double k : {-0.1, 0.02, 0.2}) {
    const auto g = haldane_grid(k, 15);
    CHECK(chern_of(g, 0) + chern_of(g, 1) == 0);
  }
}

TEST_CASE("grid refinement leaves the Chern number unchanged") {
  for (int nk : {12, 24, 36}) {
    CHECK(chern_of(haldane_grid(-0.05, nk), 0) == 1);
  }
}

TEST_CASE("gap closing at the K point is reported") {
  const auto field = berry_curvature_grid(haldane_grid(0.0, 24), 0);
  CHECK(field.min_gap < 1e-6);
  CHECK_FALSE(field.warnings.empty());
  const auto gapped = berry_curvature_grid(haldane_grid(-0.05, 24), 0);
  CHECK(gapped.warnings.empty());
  CHECK(gapped.min_gap > 0.1);
}

TEST_CASE("driven honeycomb matches the effective Haldane model") {
  for (int helicity : {1, -1}) {
    CAPTURE(helicity);
    const auto driven = driven_grid(helicity);
    const auto params = haldane_effective(1.0, 1.0, 10.0, 40, helicity);
    const auto stat = static_band_grid(
        [&](double kx, double ky) { return haldane_bloch(kx, ky, params, BlochGauge::periodic); },
        default_chern_grid, recip);
    const auto f0 = berry_curvature_grid(driven, 0);
    CHECK(f0.warnings.empty());
    CHECK(f0.min_gap > 0.1);
    const int c0 = chern_number(f0).chern;
    const int c1 = chern_of(driven, 1);
    CHECK(c0 == helicity);
    CHECK(c1 == -helicity);
    CHECK(c0 == chern_of(stat, 0));
    CHECK(c1 == chern_of(stat, 1));
  }
}

}
