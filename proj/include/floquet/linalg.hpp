#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace floquet {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Time-dependent Hamiltonian H(t). Samplers are expected to be pure.
using Sampler = std::function<Matrix(double)>;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double pi = 3.14159265358979323846;

/// Numerical failure inside a solver (non-convergence, truncation too small, ...).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fourier cutoff too small for the sampled drive.
class AliasingError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// An eigenphase of a unitary sits on the logarithm branch cut.
class BranchCutError : public SolverError {
 public:
  using SolverError::SolverError;
};

namespace pauli {
Matrix identity();
Matrix x();
Matrix y();
Matrix z();
/// sigma_- = (sigma_x - i sigma_y) / 2 = |1><0|; index 0 is the upper (sigma_z = +1) level.
Matrix lowering();
}  // namespace pauli

double max_abs(const Matrix& m);
double hermiticity_error(const Matrix& m);
bool is_hermitian(const Matrix& m, double tol = 1e-12);
double unitarity_error(const Matrix& u);

/// Hermitian eigendecomposition with eigenvalues ascending.
struct HermitianEigen {
  RealVector values;
  Matrix vectors;
};
HermitianEigen hermitian_eigen(const Matrix& h);

/// Eigendecomposition of a normal (here: unitary) matrix via complex Schur form.
/// The Schur vectors are an orthonormal eigenbasis even for degenerate spectra.
struct NormalEigen {
  Eigen::VectorXcd values;
  Matrix vectors;
};
NormalEigen unitary_eigen(const Matrix& u);

/// exp(-i dt H) for Hermitian H.
Matrix exp_minus_i(const Matrix& h, double dt);

/// Distance between a and b on the circle of circumference `period`.
double circular_distance(double a, double b, double period);

/// Bottleneck distance between two equally sized point sets on a circle:
/// min over cyclic pairings of the sorted sets of the largest pair distance.
double circular_set_distance(const RealVector& a, const RealVector& b, double period);

}  // namespace floquet
