#include "floquet/sambe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

namespace floquet {

FloquetMatrix::FloquetMatrix(double omega, int cutoff, int dim, Matrix data)
    : omega_(omega), cutoff_(cutoff), dim_(dim), data_(std::move(data)) {}

Matrix FloquetMatrix::block(int m, int n) const {
  return data_.block((m + cutoff_) * dim_, (n + cutoff_) * dim_, dim_, dim_);
}

FloquetMatrix build_floquet_matrix(const FourierModeSet& modes, int cutoff) {
  if (cutoff < modes.n_max()) {
    throw std::invalid_argument(fmt::format(
        "build_floquet_matrix: cutoff M = {} < n_max = {} would drop drive modes", cutoff,
        modes.n_max()));
  }
  const int dim = modes.dim();
  const int nb = 2 * cutoff + 1;
  Matrix data = Matrix::Zero(nb * dim, nb * dim);
  for (int m = -cutoff; m <= cutoff; ++m) {
    for (int n = -cutoff; n <= cutoff; ++n) {
      const int diff = m - n;
      if (std::abs(diff) > modes.n_max()) continue;
      Matrix blk = modes.mode(diff);
      if (m == n) blk.diagonal().array() -= m * modes.omega();
      data.block((m + cutoff) * dim, (n + cutoff) * dim, dim, dim) = blk;
    }
  }
  return FloquetMatrix(modes.omega(), cutoff, dim, std::move(data));
}

int default_cutoff(int n_max) { return n_max + 6; }

double fold_to_bz(double epsilon, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("fold_to_bz: omega must be positive");
  double folded = epsilon - omega * std::round(epsilon / omega);
  const double half = 0.5 * omega;
  if (folded >= half) folded -= omega;
  if (folded < -half) folded += omega;
  return folded;
}

Vector QuasienergySolution::component(int state, int n) const {
  return vectors.col(state).segment((n + cutoff) * dim, dim);
}

Vector QuasienergySolution::mode_at(int state, double t) const {
  Vector out = Vector::Zero(dim);
  for (int n = -cutoff; n <= cutoff; ++n) {
    out += std::exp(-I * (n * omega * t)) * component(state, n);
  }
  return out;
}

Vector QuasienergySolution::shifted(int state, int shift) const {
  Vector out = Vector::Zero(vectors.rows());
  for (int n = -cutoff; n <= cutoff; ++n) {
    const int src = n - shift;
    if (src < -cutoff || src > cutoff) continue;
    out.segment((n + cutoff) * dim, dim) = component(state, src);
  }
  return out;
}

namespace {

QuasienergySolution make_subset(const QuasienergySolution& sol, const std::vector<int>& keep) {
  QuasienergySolution out;
  out.omega = sol.omega;
  out.cutoff = sol.cutoff;
  out.dim = sol.dim;
  const auto n = static_cast<Eigen::Index>(keep.size());
  out.raw.resize(n);
  out.folded.resize(n);
  out.replica.resize(n);
  out.vectors.resize(sol.vectors.rows(), n);
  out.weights.resize(sol.weights.rows(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int s = keep[i];
    out.raw(i) = sol.raw(s);
    out.folded(i) = sol.folded(s);
    out.replica(i) = sol.replica(s);
    out.vectors.col(i) = sol.vectors.col(s);
    out.weights.col(i) = sol.weights.col(s);
  }
  out.physical.assign(keep.size(), true);
  out.ambiguous = sol.ambiguous;
  out.warnings = sol.warnings;
  return out;
}

}  // namespace

QuasienergySolution quasienergies(const FloquetMatrix& fm) {
  const auto eig = hermitian_eigen(fm.matrix());
  QuasienergySolution sol;
  sol.omega = fm.omega();
  sol.cutoff = fm.cutoff();
  sol.dim = fm.dim();
  sol.raw = eig.values;
  sol.vectors = eig.vectors;
  const auto n = sol.raw.size();
  sol.folded.resize(n);
  sol.replica.resize(n);
  sol.weights.resize(fm.blocks(), n);
  for (Eigen::Index a = 0; a < n; ++a) {
    sol.folded(a) = fold_to_bz(sol.raw(a), sol.omega);
    sol.replica(a) = static_cast<int>(std::lround((sol.raw(a) - sol.folded(a)) / sol.omega));
    for (int b = 0; b < fm.blocks(); ++b) {
      sol.weights(b, a) = sol.vectors.col(a).segment(b * sol.dim, sol.dim).squaredNorm();
    }
  }
  sol.physical.assign(n, false);
  return sol;
}

QuasienergySolution select_physical_band(const QuasienergySolution& sol) {
  std::vector<int> order(sol.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return sol.weight0(a) > sol.weight0(b); });

  const double energy_tol = 1e-6 * std::max(1.0, sol.omega);
  std::vector<int> picked;
  for (int cand : order) {
    if (static_cast<int>(picked.size()) == sol.dim) break;
    bool same_family = false;
    for (int p : picked) {
      const int shift = static_cast<int>(std::lround((sol.raw(p) - sol.raw(cand)) / sol.omega));
      if (std::abs(sol.raw(p) - shift * sol.omega - sol.raw(cand)) > energy_tol) continue;
      if (std::abs(sol.shifted(p, shift).dot(sol.vectors.col(cand))) > 0.5) {
        same_family = true;
        break;
      }
    }
    if (!same_family) picked.push_back(cand);
  }
  if (static_cast<int>(picked.size()) != sol.dim) {
    throw SolverError("select_physical_band: could not identify dim distinct replica families");
  }
  std::sort(picked.begin(), picked.end(),
            [&](int a, int b) { return sol.folded(a) < sol.folded(b); });

  QuasienergySolution out = make_subset(sol, picked);
  double worst = 1.0;
  for (int i = 0; i < out.size(); ++i) worst = std::min(worst, out.weight0(i));
  if (worst < 0.5) {
    out.ambiguous = true;
    out.warnings.push_back(fmt::format(
        "replica identification ambiguous: smallest retained n=0 weight is {:.3f} < 0.5", worst));
  }
  return out;
}

QuasienergySolution physical_quasienergies(const FourierModeSet& modes, int cutoff) {
  return select_physical_band(quasienergies(build_floquet_matrix(modes, cutoff)));
}

Vector evolve_state_floquet(const QuasienergySolution& sol, const Vector& psi0, double t0,
                            double t) {
  if (sol.size() != sol.dim) {
    throw std::invalid_argument("evolve_state_floquet: expected a physical band of dim states");
  }
  if (psi0.size() != sol.dim) {
    throw std::invalid_argument("evolve_state_floquet: state dimension mismatch");
  }
  Matrix basis0(sol.dim, sol.dim);
  for (int a = 0; a < sol.dim; ++a) basis0.col(a) = sol.mode_at(a, t0);
  const Vector coeff = basis0.colPivHouseholderQr().solve(psi0);

  Vector psi = Vector::Zero(sol.dim);
  for (int a = 0; a < sol.dim; ++a) {
    psi += coeff(a) * std::exp(-I * (sol.raw(a) * (t - t0))) * sol.mode_at(a, t);
  }
  const double drift = std::abs(psi.norm() - psi0.norm());
  if (drift > 1e-4) {
    throw SolverError(fmt::format(
        "evolve_state_floquet: norm drift {:.3e} > 1e-4; increase the replica cutoff", drift));
  }
  return psi;
}

std::vector<ConvergenceEntry> convergence_scan(const FourierModeSet& modes,
                                               const std::vector<int>& cutoffs) {
  if (cutoffs.empty()) return {};
  if (!std::is_sorted(cutoffs.begin(), cutoffs.end())) {
    throw std::invalid_argument("convergence_scan: cutoffs must be ascending");
  }
  std::vector<RealVector> bands;
  bands.reserve(cutoffs.size());
  for (int m : cutoffs) bands.push_back(physical_quasienergies(modes, m).folded);
  std::vector<ConvergenceEntry> report;
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    report.push_back(
        {cutoffs[i], circular_set_distance(bands[i], bands.back(), modes.omega())});
  }
  return report;
}

std::vector<std::vector<int>> connect_bands(const std::vector<QuasienergySolution>& path) {
  std::vector<std::vector<int>> order;
  if (path.empty()) return order;
  const int nb = path.front().size();
  std::vector<int> first(nb);
  std::iota(first.begin(), first.end(), 0);
  order.push_back(first);
  for (std::size_t k = 1; k < path.size(); ++k) {
    const auto& prev = path[k - 1];
    const auto& curr = path[k];
    if (curr.size() != nb) throw std::invalid_argument("connect_bands: band count changes");
    std::vector<std::tuple<double, int, int>> pairs;
    for (int b = 0; b < nb; ++b) {
      const int ps = order.back()[b];
      for (int s = 0; s < nb; ++s) {
        pairs.emplace_back(std::abs(prev.vectors.col(ps).dot(curr.vectors.col(s))), b, s);
      }
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto& x, const auto& y) { return std::get<0>(x) > std::get<0>(y); });
    std::vector<int> next(nb, -1);
    std::vector<bool> used(nb, false);
    for (const auto& [ov, b, s] : pairs) {
      if (next[b] >= 0 || used[s]) continue;
      next[b] = s;
      used[s] = true;
    }
    order.push_back(next);
  }
  return order;
}

}  // namespace floquet
