#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "floquet/linalg.hpp"

namespace floquet {

enum class Polarization { linear, circular };

/// Periodic drive. ħ = 1, energies in units of the hopping J.
///
/// For the 1D chain `amplitude` is E/ω and A(t) = -(E/ω) sin ωt.
/// For the 2D models A(t) = amplitude * (cos ωt, helicity * sin ωt) when circular,
/// and amplitude * (cos ωt, 0) when linear.
struct DriveProtocol {
  double omega = 1.0;
  double amplitude = 0.0;
  Polarization polarization = Polarization::circular;
  int helicity = +1;

  double period() const { return 2.0 * pi / omega; }
  /// Throws std::invalid_argument unless omega > 0, amplitude >= 0, helicity = ±1.
  void validate() const;
};

std::optional<Polarization> parse_polarization(std::string_view name);

/// Honeycomb geometry with unit bond length. Sublattice A sits at the origin,
/// B sites at A + delta_i:
///   delta_1 = (0, 1), delta_2 = (-√3/2, -1/2), delta_3 = (√3/2, -1/2).
/// Bravais vectors a_1 = delta_1 - delta_2, a_2 = delta_1 - delta_3.
namespace honeycomb {
using Vec2 = std::array<double, 2>;
std::array<Vec2, 3> bond_vectors();
std::array<Vec2, 2> lattice_vectors();
std::array<Vec2, 2> reciprocal_vectors();
/// Next-nearest-neighbour vectors b_1 = delta_2 - delta_1, b_2 = delta_3 - delta_2,
/// b_3 = delta_1 - delta_3 (one orientation around the hexagon).
std::array<Vec2, 3> second_neighbour_vectors();
Vec2 k_point();
}  // namespace honeycomb

/// Phase convention of a 2x2 honeycomb Bloch matrix.
///  - bond: H_AB = J sum_i exp(i k·delta_i), the literal Peierls form.
///  - periodic: H_AB multiplied by exp(-i k·delta_1); periodic under k -> k + G.
///    Unitarily equivalent to `bond`; used on Brillouin-zone grids.
enum class BlochGauge { bond, periodic };

Matrix sample_chain_1d(double k, double hopping, const DriveProtocol& drive, double t);
/// Throws std::invalid_argument for linear polarization.
Matrix sample_dirac(double kx, double ky, const DriveProtocol& drive, double t);
Matrix sample_honeycomb(double kx, double ky, double hopping, const DriveProtocol& drive,
                        double t, BlochGauge gauge = BlochGauge::bond);

/// H(t) = sum_{|n| <= n_max} H_n exp(-i n ω t).
class FourierModeSet {
 public:
  FourierModeSet(double omega, int n_max, int dim);
  FourierModeSet(double omega, std::vector<Matrix> modes);  // modes[n + n_max]

  double omega() const { return omega_; }
  int n_max() const { return n_max_; }
  int dim() const { return dim_; }

  /// H_n; zero outside [-n_max, n_max].
  Matrix mode(int n) const;
  void set_mode(int n, const Matrix& h);

  /// max_n max_ij |H_{-n} - H_n^†|.
  double pairing_error() const;
  Matrix reconstruct(double t) const;
  /// Same drive with the time origin moved: H'(t) = H(t + shift).
  FourierModeSet time_shifted(double shift) const;

 private:
  double omega_;
  int n_max_;
  int dim_;
  std::vector<Matrix> modes_;
};

/// Rectangle-rule Fourier transform on t_j = jT/n_samples.
/// Throws std::invalid_argument if n_samples < 4 n_max + 1 and AliasingError if
/// ||H_{n_max}|| > 1e-3 ||H_0|| (||H_0|| replaced by the largest mode norm when H_0 vanishes).
FourierModeSet fourier_modes(const Sampler& sampler, double omega, int n_max, int n_samples);

/// Closed-form Fourier modes of the built-in models (Jacobi–Anger expansion).
FourierModeSet chain_1d_modes(double k, double hopping, const DriveProtocol& drive, int n_max);
FourierModeSet dirac_modes(double kx, double ky, const DriveProtocol& drive);
FourierModeSet honeycomb_modes(double kx, double ky, double hopping, const DriveProtocol& drive,
                               int n_max, BlochGauge gauge = BlochGauge::bond);

Sampler modes_sampler(const FourierModeSet& modes);

/// Bessel-decay heuristic for the mode cutoff: ceil(A) + 10.
int suggested_n_max(double amplitude);

enum class ModelKind { chain1d, dirac, honeycomb, custom };
std::optional<ModelKind> parse_model_kind(std::string_view name);
std::string_view to_string(ModelKind kind);

/// A model bound to its drive, evaluated at a momentum point.
/// For chain1d only kx is used; custom models ignore momentum.
struct Model {
  ModelKind kind = ModelKind::chain1d;
  double hopping = 1.0;
  DriveProtocol drive;
  BlochGauge gauge = BlochGauge::bond;
  std::optional<FourierModeSet> custom;
  /// Overrides the chain/honeycomb mode cutoff.
  std::optional<int> n_max;

  int dim() const;
  Sampler sampler(double kx, double ky = 0.0) const;
  /// Closed-form modes for built-ins, the stored set for custom models.
  FourierModeSet modes(double kx, double ky = 0.0) const;
  /// Cutoff used by modes(): 1 for Dirac, n_max or suggested_n_max for chain/honeycomb.
  int natural_n_max() const;
};

}  // namespace floquet
