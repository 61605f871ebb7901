#include "floquet/models.hpp"

#include <cmath>
#include <stdexcept>

#include "floquet/bessel.hpp"

namespace floquet {

void DriveProtocol::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw std::invalid_argument("drive: omega must be positive");
  }
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw std::invalid_argument("drive: amplitude must be non-negative");
  }
  if (helicity != 1 && helicity != -1) {
    throw std::invalid_argument("drive: helicity must be +1 or -1");
  }
}

std::optional<Polarization> parse_polarization(std::string_view name) {
  if (name == "linear") return Polarization::linear;
  if (name == "circular") return Polarization::circular;
  return std::nullopt;
}

namespace honeycomb {

std::array<Vec2, 3> bond_vectors() {
  const double h = std::sqrt(3.0) / 2.0;
  return {Vec2{0.0, 1.0}, Vec2{-h, -0.5}, Vec2{h, -0.5}};
}

std::array<Vec2, 2> lattice_vectors() {
  const auto d = bond_vectors();
  return {Vec2{d[0][0] - d[1][0], d[0][1] - d[1][1]}, Vec2{d[0][0] - d[2][0], d[0][1] - d[2][1]}};
}

std::array<Vec2, 2> reciprocal_vectors() {
  const auto a = lattice_vectors();
  const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  // b_i · a_j = 2π δ_ij
  return {Vec2{2.0 * pi * a[1][1] / det, -2.0 * pi * a[1][0] / det},
          Vec2{-2.0 * pi * a[0][1] / det, 2.0 * pi * a[0][0] / det}};
}

std::array<Vec2, 3> second_neighbour_vectors() {
  const auto d = bond_vectors();
  auto diff = [](const Vec2& p, const Vec2& q) { return Vec2{p[0] - q[0], p[1] - q[1]}; };
  return {diff(d[1], d[0]), diff(d[2], d[1]), diff(d[0], d[2])};
}

Vec2 k_point() { return {4.0 * pi / (3.0 * std::sqrt(3.0)), 0.0}; }

}  // namespace honeycomb

namespace {

using honeycomb::Vec2;

Vec2 vector_potential(const DriveProtocol& drive, double t) {
  const double phase = drive.omega * t;
  if (drive.polarization == Polarization::linear) {
    return {drive.amplitude * std::cos(phase), 0.0};
  }
  return {drive.amplitude * std::cos(phase), drive.helicity * drive.amplitude * std::sin(phase)};
}

double dot(const Vec2& a, double kx, double ky) { return a[0] * kx + a[1] * ky; }

cplx gauge_phase(double kx, double ky, BlochGauge gauge) {
  if (gauge == BlochGauge::bond) return 1.0;
  return std::exp(-I * dot(honeycomb::bond_vectors()[0], kx, ky));
}

Matrix from_ab(cplx ab) {
  Matrix h = Matrix::Zero(2, 2);
  h(0, 1) = ab;
  h(1, 0) = std::conj(ab);
  return h;
}

cplx pow_minus_i(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return 1.0;
    case 1: return -I;
    case 2: return -1.0;
    default: return I;
  }
}

}  // namespace

Matrix sample_chain_1d(double k, double hopping, const DriveProtocol& drive, double t) {
  const double a = -drive.amplitude * std::sin(drive.omega * t);
  Matrix h(1, 1);
  h(0, 0) = -2.0 * hopping * std::cos(k - a);
  return h;
}

Matrix sample_dirac(double kx, double ky, const DriveProtocol& drive, double t) {
  if (drive.polarization != Polarization::circular) {
    throw std::invalid_argument("dirac model is defined for circular polarization only");
  }
  const auto a = vector_potential(drive, t);
  return (kx - a[0]) * pauli::x() + (ky - a[1]) * pauli::y();
}

Matrix sample_honeycomb(double kx, double ky, double hopping, const DriveProtocol& drive,
                        double t, BlochGauge gauge) {
  const auto a = vector_potential(drive, t);
  cplx ab = 0.0;
  for (const auto& d : honeycomb::bond_vectors()) {
    ab += std::exp(I * ((kx - a[0]) * d[0] + (ky - a[1]) * d[1]));
  }
  return from_ab(hopping * ab * gauge_phase(kx, ky, gauge));
}

FourierModeSet::FourierModeSet(double omega, int n_max, int dim)
    : omega_(omega), n_max_(n_max), dim_(dim) {
  if (!(omega > 0.0)) throw std::invalid_argument("FourierModeSet: omega must be positive");
  if (n_max < 0) throw std::invalid_argument("FourierModeSet: n_max must be non-negative");
  if (dim <= 0) throw std::invalid_argument("FourierModeSet: dim must be positive");
  modes_.assign(2 * n_max + 1, Matrix::Zero(dim, dim));
}

FourierModeSet::FourierModeSet(double omega, std::vector<Matrix> modes)
    : omega_(omega), n_max_(0), dim_(0), modes_(std::move(modes)) {
  if (!(omega > 0.0)) throw std::invalid_argument("FourierModeSet: omega must be positive");
  if (modes_.empty() || modes_.size() % 2 == 0) {
    throw std::invalid_argument("FourierModeSet: need 2 n_max + 1 modes");
  }
  n_max_ = static_cast<int>(modes_.size() / 2);
  dim_ = static_cast<int>(modes_.front().rows());
  for (const auto& m : modes_) {
    if (m.rows() != dim_ || m.cols() != dim_ || dim_ == 0) {
      throw std::invalid_argument("FourierModeSet: all modes must be square with equal dim");
    }
  }
}

Matrix FourierModeSet::mode(int n) const {
  if (n < -n_max_ || n > n_max_) return Matrix::Zero(dim_, dim_);
  return modes_[n + n_max_];
}

void FourierModeSet::set_mode(int n, const Matrix& h) {
  if (n < -n_max_ || n > n_max_) throw std::out_of_range("FourierModeSet: mode index");
  if (h.rows() != dim_ || h.cols() != dim_) {
    throw std::invalid_argument("FourierModeSet: mode dimension mismatch");
  }
  modes_[n + n_max_] = h;
}

double FourierModeSet::pairing_error() const {
  double err = 0.0;
  for (int n = 0; n <= n_max_; ++n) {
    err = std::max(err, max_abs(mode(-n) - mode(n).adjoint()));
  }
  return err;
}

Matrix FourierModeSet::reconstruct(double t) const {
  Matrix h = Matrix::Zero(dim_, dim_);
  for (int n = -n_max_; n <= n_max_; ++n) {
    h += std::exp(-I * (n * omega_ * t)) * modes_[n + n_max_];
  }
  return h;
}

FourierModeSet FourierModeSet::time_shifted(double shift) const {
  FourierModeSet out(omega_, n_max_, dim_);
  for (int n = -n_max_; n <= n_max_; ++n) {
    out.modes_[n + n_max_] = std::exp(-I * (n * omega_ * shift)) * modes_[n + n_max_];
  }
  return out;
}

FourierModeSet fourier_modes(const Sampler& sampler, double omega, int n_max, int n_samples) {
  if (n_samples < 4 * n_max + 1) {
    throw std::invalid_argument("fourier_modes: n_samples must be >= 4 n_max + 1");
  }
  const double period = 2.0 * pi / omega;
  const Matrix first = sampler(0.0);
  FourierModeSet out(omega, n_max, static_cast<int>(first.rows()));
  std::vector<Matrix> acc(2 * n_max + 1, Matrix::Zero(first.rows(), first.cols()));
  for (int j = 0; j < n_samples; ++j) {
    const double t = period * j / n_samples;
    const Matrix h = j == 0 ? first : sampler(t);
    for (int n = -n_max; n <= n_max; ++n) {
      // exp(i n ω t_j) = exp(2π i n j / N); reduce n j mod N to keep the phase exact.
      const long long r = (static_cast<long long>(n) * j) % n_samples;
      acc[n + n_max] += std::exp(I * (2.0 * pi * static_cast<double>(r) / n_samples)) * h;
    }
  }
  double largest = 0.0;
  for (int n = -n_max; n <= n_max; ++n) {
    acc[n + n_max] /= static_cast<double>(n_samples);
    out.set_mode(n, acc[n + n_max]);
    largest = std::max(largest, acc[n + n_max].norm());
  }
  if (n_max > 0) {
    double reference = acc[n_max].norm();
    if (reference <= 1e-12 * largest) reference = largest;
    const double tail = std::max(acc[0].norm(), acc[2 * n_max].norm());
    if (tail > 1e-3 * reference) {
      throw AliasingError("fourier_modes: |H_{n_max}| / |H_0| = " + std::to_string(tail / reference) +
                          " exceeds 1e-3; increase n_max");
    }
  }
  return out;
}

FourierModeSet chain_1d_modes(double k, double hopping, const DriveProtocol& drive, int n_max) {
  FourierModeSet out(drive.omega, n_max, 1);
  for (int n = -n_max; n <= n_max; ++n) {
    const double jn = bessel_j(n, drive.amplitude);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    Matrix h(1, 1);
    h(0, 0) = -hopping * jn * (sign * std::exp(I * k) + std::exp(-I * k));
    out.set_mode(n, h);
  }
  return out;
}

FourierModeSet dirac_modes(double kx, double ky, const DriveProtocol& drive) {
  if (drive.polarization != Polarization::circular) {
    throw std::invalid_argument("dirac model is defined for circular polarization only");
  }
  FourierModeSet out(drive.omega, 1, 2);
  const double a = drive.amplitude;
  const double h = drive.helicity;
  out.set_mode(0, kx * pauli::x() + ky * pauli::y());
  out.set_mode(1, -0.5 * a * (pauli::x() + I * h * pauli::y()));
  out.set_mode(-1, -0.5 * a * (pauli::x() - I * h * pauli::y()));
  return out;
}

FourierModeSet honeycomb_modes(double kx, double ky, double hopping, const DriveProtocol& drive,
                               int n_max, BlochGauge gauge) {
  // exp(-i A(t)·delta) with A·delta = a cos(ωt - hθ) expands as sum_n (-i)^n J_n(a) e^{inhθ} e^{-inωt}.
  std::vector<cplx> ab(2 * n_max + 1, 0.0);
  const cplx gp = gauge_phase(kx, ky, gauge);
  for (const auto& d : honeycomb::bond_vectors()) {
    const cplx bloch = std::exp(I * dot(d, kx, ky)) * gp;
    double a_eff = drive.amplitude;
    double theta = std::atan2(d[1], d[0]);
    if (drive.polarization == Polarization::linear) {
      a_eff = drive.amplitude * d[0];
      theta = 0.0;
    }
    for (int n = -n_max; n <= n_max; ++n) {
      ab[n + n_max] += hopping * bloch * pow_minus_i(n) * bessel_j(n, a_eff) *
                       std::exp(I * (n * drive.helicity * theta));
    }
  }
  FourierModeSet out(drive.omega, n_max, 2);
  for (int n = -n_max; n <= n_max; ++n) {
    Matrix h = Matrix::Zero(2, 2);
    h(0, 1) = ab[n + n_max];
    h(1, 0) = std::conj(ab[-n + n_max]);
    out.set_mode(n, h);
  }
  return out;
}

Sampler modes_sampler(const FourierModeSet& modes) {
  return [modes](double t) { return modes.reconstruct(t); };
}

int suggested_n_max(double amplitude) { return static_cast<int>(std::ceil(amplitude)) + 10; }

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  if (name == "chain1d") return ModelKind::chain1d;
  if (name == "dirac") return ModelKind::dirac;
  if (name == "honeycomb") return ModelKind::honeycomb;
  if (name == "custom") return ModelKind::custom;
  return std::nullopt;
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::chain1d: return "chain1d";
    case ModelKind::dirac: return "dirac";
    case ModelKind::honeycomb: return "honeycomb";
    case ModelKind::custom: return "custom";
  }
  return "unknown";
}

int Model::dim() const {
  switch (kind) {
    case ModelKind::chain1d: return 1;
    case ModelKind::dirac:
    case ModelKind::honeycomb: return 2;
    case ModelKind::custom:
      if (!custom) throw std::invalid_argument("custom model without Fourier modes");
      return custom->dim();
  }
  return 0;
}

Sampler Model::sampler(double kx, double ky) const {
  switch (kind) {
    case ModelKind::chain1d:
      return [kx, j = hopping, d = drive](double t) { return sample_chain_1d(kx, j, d, t); };
    case ModelKind::dirac:
      return [kx, ky, d = drive](double t) { return sample_dirac(kx, ky, d, t); };
    case ModelKind::honeycomb:
      return [kx, ky, j = hopping, d = drive, g = gauge](double t) {
        return sample_honeycomb(kx, ky, j, d, t, g);
      };
    case ModelKind::custom:
      if (!custom) throw std::invalid_argument("custom model without Fourier modes");
      return modes_sampler(*custom);
  }
  throw std::logic_error("unhandled model kind");
}

FourierModeSet Model::modes(double kx, double ky) const {
  switch (kind) {
    case ModelKind::chain1d: return chain_1d_modes(kx, hopping, drive, natural_n_max());
    case ModelKind::dirac: return dirac_modes(kx, ky, drive);
    case ModelKind::honeycomb:
      return honeycomb_modes(kx, ky, hopping, drive, natural_n_max(), gauge);
    case ModelKind::custom:
      if (!custom) throw std::invalid_argument("custom model without Fourier modes");
      return *custom;
  }
  throw std::logic_error("unhandled model kind");
}

int Model::natural_n_max() const {
  switch (kind) {
    case ModelKind::dirac: return 1;
    case ModelKind::custom: return custom ? custom->n_max() : 0;
    default: return n_max ? *n_max : suggested_n_max(drive.amplitude);
  }
}

}  // namespace floquet
