#pragma once

#include <string>
#include <vector>

#include "floquet/linalg.hpp"
#include "floquet/models.hpp"

namespace floquet {

/// Truncated extended-space (Sambe) Floquet matrix with blocks m, n in [-M, M]:
///   block(m, n) = H_{m-n} - m ω δ_mn.
class FloquetMatrix {
 public:
  FloquetMatrix(double omega, int cutoff, int dim, Matrix data);

  double omega() const { return omega_; }
  int cutoff() const { return cutoff_; }
  int dim() const { return dim_; }
  int blocks() const { return 2 * cutoff_ + 1; }
  const Matrix& matrix() const { return data_; }
  Matrix block(int m, int n) const;

 private:
  double omega_;
  int cutoff_;
  int dim_;
  Matrix data_;
};

/// Throws std::invalid_argument if cutoff < modes.n_max().
FloquetMatrix build_floquet_matrix(const FourierModeSet& modes, int cutoff);

/// Default replica cutoff M = n_max + 6.
int default_cutoff(int n_max);

/// Folds into the Floquet Brillouin zone [-ω/2, ω/2); +ω/2 maps to -ω/2.
double fold_to_bz(double epsilon, double omega);

/// Eigenstates of a Floquet matrix (or a subset of them).
///
/// Column a of `vectors` is the extended vector of state a; rows
/// [(n + M) dim, (n + M + 1) dim) hold the Fourier component |u_a^n>.
/// `raw` is the eigenvalue belonging to that vector and
/// raw = folded + replica * ω.
struct QuasienergySolution {
  double omega = 0.0;
  int cutoff = 0;
  int dim = 0;
  RealVector raw;
  RealVector folded;
  Eigen::VectorXi replica;
  Matrix vectors;
  /// weights(n + M, a) = ||u_a^n||^2
  Eigen::MatrixXd weights;
  /// States flagged by select_physical_band.
  std::vector<bool> physical;
  /// Set when replica identification is ambiguous (best weight0 < 0.5).
  bool ambiguous = false;
  std::vector<std::string> warnings;

  int size() const { return static_cast<int>(raw.size()); }
  double weight(int state, int n) const { return weights(n + cutoff, state); }
  double weight0(int state) const { return weight(state, 0); }
  Vector component(int state, int n) const;
  /// |u_a(t)> = sum_n exp(-i n ω t) |u_a^n>
  Vector mode_at(int state, double t) const;
  /// Extended vector shifted by `shift` blocks: component n becomes the old n - shift.
  Vector shifted(int state, int shift) const;
};

/// Full Hermitian diagonalization of the truncated Floquet matrix.
QuasienergySolution quasienergies(const FloquetMatrix& fm);

/// Keeps one representative per replica family: the member with the largest
/// n = 0 Fourier weight. Returns exactly dim states, sorted by folded quasienergy.
/// Flags `ambiguous` and adds a warning when some retained weight0 < 0.5.
QuasienergySolution select_physical_band(const QuasienergySolution& sol);

/// Convenience: modes -> Floquet matrix -> diagonalize -> physical band.
QuasienergySolution physical_quasienergies(const FourierModeSet& modes, int cutoff);

/// psi(t) = sum_a c_a exp(-i ε_a (t - t0)) |u_a(t)>, with c fixed from psi0 at t0.
/// `sol` must be a physical band (dim states). Throws SolverError if the norm
/// drifts by more than 1e-4 (truncation too small).
Vector evolve_state_floquet(const QuasienergySolution& sol, const Vector& psi0, double t0,
                            double t);

struct ConvergenceEntry {
  int cutoff;
  /// max |Δε| (mod ω) of the physical band against the largest cutoff.
  double max_deviation;
};
std::vector<ConvergenceEntry> convergence_scan(const FourierModeSet& modes,
                                               const std::vector<int>& cutoffs);

/// Permutations connecting physical bands across a path of k-points by maximal
/// overlap of extended vectors with the previous point. order[k][branch] is the
/// state index of `branch` at point k.
std::vector<std::vector<int>> connect_bands(const std::vector<QuasienergySolution>& path);

}  // namespace floquet
