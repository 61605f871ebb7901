#include "floquet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>

namespace floquet {

namespace pauli {
Matrix identity() { return Matrix::Identity(2, 2); }

Matrix x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix y() {
  Matrix m(2, 2);
  m << 0.0, -I, I, 0.0;
  return m;
}

Matrix z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Matrix lowering() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}
}  // namespace pauli

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_error(const Matrix& m) { return max_abs(m - m.adjoint()); }

bool is_hermitian(const Matrix& m, double tol) {
  return m.rows() == m.cols() && hermiticity_error(m) <= tol;
}

double unitarity_error(const Matrix& u) {
  return max_abs(u.adjoint() * u - Matrix::Identity(u.cols(), u.cols()));
}

HermitianEigen hermitian_eigen(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw SolverError("Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

NormalEigen unitary_eigen(const Matrix& u) {
  Eigen::ComplexSchur<Matrix> schur(u);
  if (schur.info() != Eigen::Success) {
    throw SolverError("complex Schur decomposition did not converge");
  }
  return {schur.matrixT().diagonal(), schur.matrixU()};
}

Matrix exp_minus_i(const Matrix& h, double dt) {
  if (h.rows() == 1) {
    Matrix out(1, 1);
    out(0, 0) = std::exp(-I * dt * h(0, 0).real());
    return out;
  }
  const auto eig = hermitian_eigen(h);
  const Eigen::VectorXcd phases = (-I * dt * eig.values.cast<cplx>()).array().exp();
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

double circular_distance(double a, double b, double period) {
  double d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

double circular_set_distance(const RealVector& a, const RealVector& b, double period) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("circular_set_distance: sets differ in size");
  }
  const auto n = static_cast<std::size_t>(a.size());
  if (n == 0) return 0.0;
  auto wrapped = [period](const RealVector& v) {
    std::vector<double> out(v.data(), v.data() + v.size());
    for (auto& x : out) {
      x = std::fmod(x, period);
      if (x < 0) x += period;
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto sa = wrapped(a);
  const auto sb = wrapped(b);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t shift = 0; shift < n; ++shift) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      worst = std::max(worst, circular_distance(sa[i], sb[(i + shift) % n], period));
    }
    best = std::min(best, worst);
  }
  return best;
}

}  // namespace floquet
