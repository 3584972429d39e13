// Copyright 2026 The collmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "collmeas/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "collmeas/errors.hpp"

namespace collmeas {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

}  // namespace

double BlochVector::norm() const { return std::sqrt(dot(*this)); }

PureQubit PureQubit::from_angles(double theta, double phi) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw DomainError("theta must lie in [0, pi], got " + std::to_string(theta));
  }
  if (!(phi >= 0.0 && phi < kTwoPi)) {
    throw DomainError("phi must lie in [0, 2pi), got " + std::to_string(phi));
  }
  if (theta == 0.0) return PureQubit(Vec2c(1.0, 0.0));
  return PureQubit(Vec2c(std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi)));
}

PureQubit PureQubit::from_amplitudes(const Vec2c &amp) {
  if (std::abs(amp.squaredNorm() - 1.0) > kExactTol) {
    throw DomainError("qubit amplitudes are not normalized");
  }
  return PureQubit(amp);
}

PureQubit PureQubit::normalized(const Vec2c &amp) {
  const double n = amp.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("cannot normalize a zero qubit vector");
  return PureQubit(amp / n);
}

PureQubit PureQubit::from_bloch(const BlochVector &n) {
  const double len = n.norm();
  if (!(len > 0.0)) throw DomainError("zero Bloch vector has no pure-state direction");
  const double z = std::clamp(n.z / len, -1.0, 1.0);
  const double c0 = std::sqrt((1.0 + z) / 2.0);
  const double s = std::sqrt((1.0 - z) / 2.0);
  if (s == 0.0) return PureQubit(Vec2c(1.0, 0.0));
  const double phi = std::atan2(n.y, n.x);
  return PureQubit::normalized(Vec2c(c0, std::polar(s, phi)));
}

double PureQubit::theta() const { return 2.0 * std::atan2(std::abs(amp_(1)), std::abs(amp_(0))); }

double PureQubit::phi() const {
  if (std::abs(amp_(0)) < kExactTol || std::abs(amp_(1)) < kExactTol) return 0.0;
  return wrap_angle(std::arg(amp_(1)) - std::arg(amp_(0)));
}

BlochVector PureQubit::bloch() const {
  const cplx off = std::conj(amp_(0)) * amp_(1);
  return {2.0 * off.real(), 2.0 * off.imag(), std::norm(amp_(0)) - std::norm(amp_(1))};
}

PureQubit PureQubit::canonical() const {
  const double a0 = std::abs(amp_(0));
  if (a0 < kExactTol) return PureQubit(Vec2c(0.0, 1.0));
  const cplx phase = std::conj(amp_(0)) / a0;
  return PureQubit(amp_ * phase);
}

TwoQubitState TwoQubitState::from_amplitudes(const Vec4c &amp) {
  if (std::abs(amp.squaredNorm() - 1.0) > kExactTol) {
    throw DomainError("two-qubit amplitudes are not normalized");
  }
  return TwoQubitState(amp);
}

double SingleQubitOperator::unitarity_residual() const {
  return (matrix.adjoint() * matrix - Mat2c::Identity()).cwiseAbs().maxCoeff();
}

bool SingleQubitOperator::is_unitary(double tol) const { return unitarity_residual() <= tol; }

QubitDensityMatrix QubitDensityMatrix::from_matrix(const Mat2c &rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kExactTol) {
    throw DomainError("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - cplx(1.0)) > kExactTol) {
    throw DomainError("density matrix does not have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<Mat2c> es(rho);
  if (es.eigenvalues().minCoeff() < -kExactTol) {
    throw DomainError("density matrix is not positive semidefinite");
  }
  return QubitDensityMatrix(rho);
}

QubitDensityMatrix QubitDensityMatrix::from_pure(const PureQubit &psi) {
  return QubitDensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

QubitDensityMatrix QubitDensityMatrix::from_bloch(const BlochVector &r) {
  if (r.norm() > 1.0 + kExactTol) throw DomainError("Bloch vector lies outside the unit ball");
  const Mat2c rho = 0.5 * (pauli(0) + r.x * pauli(1) + r.y * pauli(2) + r.z * pauli(3));
  return QubitDensityMatrix(rho);
}

QubitDensityMatrix QubitDensityMatrix::maximally_mixed() {
  return QubitDensityMatrix(0.5 * Mat2c::Identity());
}

PureQubit state_from_angles(double theta, double phi) { return PureQubit::from_angles(theta, phi); }

double fidelity_pure(const PureQubit &a, const PureQubit &b) {
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

namespace {

// Square root of a Hermitian PSD matrix, eigenvalues clipped at zero.
Mat2c psd_sqrt(const Mat2c &m) {
  Eigen::SelfAdjointEigenSolver<Mat2c> es(m);
  Eigen::Vector2d ev = es.eigenvalues();
  for (int i = 0; i < 2; ++i) {
    if (ev(i) < -kExactTol) throw DomainError("matrix is not positive semidefinite");
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double infidelity_mixed(const QubitDensityMatrix &est, const QubitDensityMatrix &true_state) {
  const Mat2c s = psd_sqrt(est.matrix());
  Mat2c inner = s * true_state.matrix() * s;
  inner = 0.5 * (inner + inner.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat2c> es(inner);
  double tr = 0.0;
  for (int i = 0; i < 2; ++i) tr += std::sqrt(std::max(es.eigenvalues()(i), 0.0));
  return std::clamp(1.0 - tr * tr, 0.0, 1.0);
}

double concurrence(const TwoQubitState &psi) {
  return 2.0 * std::abs(psi[0] * psi[3] - psi[1] * psi[2]);
}

TwoQubitState tensor_square(const PureQubit &n) {
  return TwoQubitState::unnormalized(kron(n.amplitudes(), n.amplitudes()));
}

PureQubit haar_random_qubit(Rng &rng) {
  const double u = rng.uniform();
  const double v = rng.uniform();
  const double theta = std::acos(std::clamp(1.0 - 2.0 * u, -1.0, 1.0));
  return PureQubit::from_angles(theta, kTwoPi * v);
}

TwoQubitState singlet() {
  const double h = 1.0 / std::sqrt(2.0);
  Vec4c s;
  s << 0.0, h, -h, 0.0;
  return TwoQubitState::unnormalized(s);
}

Mat4c kron(const Mat2c &a, const Mat2c &b) {
  Mat4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Vec4c kron(const Vec2c &a, const Vec2c &b) {
  Vec4c out;
  out << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
  return out;
}

const Mat2c &pauli(int index) {
  static const std::array<Mat2c, 4> mats = [] {
    std::array<Mat2c, 4> m;
    const cplx i(0.0, 1.0);
    m[0] << 1.0, 0.0, 0.0, 1.0;
    m[1] << 0.0, 1.0, 1.0, 0.0;
    m[2] << 0.0, -i, i, 0.0;
    m[3] << 1.0, 0.0, 0.0, -1.0;
    return m;
  }();
  return mats.at(static_cast<std::size_t>(index));
}

Mat2c su2_from_rotation(const Eigen::Matrix3d &rotation) {
  const Eigen::Quaterniond q(rotation);
  const cplx i(0.0, 1.0);
  return q.w() * pauli(0) - i * (q.x() * pauli(1) + q.y() * pauli(2) + q.z() * pauli(3));
}

}  // namespace collmeas
