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

#pragma once

// One- and two-qubit states and operators, Bloch geometry, and the
// fidelity/concurrence functionals used by every other module.
//
// Conventions: |0> == |H>, |1> == |V>. Two-qubit amplitudes are ordered
// (|00>, |01>, |10>, |11>) with the first factor being the photon in arm 1.

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "collmeas/rng.hpp"

namespace collmeas {

using cplx = std::complex<double>;
using Vec2c = Eigen::Vector2cd;
using Vec4c = Eigen::Matrix<cplx, 4, 1>;
using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix<cplx, 4, 4>;

inline constexpr double kExactTol = 1e-12;
inline constexpr double kChainedTol = 1e-10;

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double dot(const BlochVector &o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const;
  Eigen::Vector3d as_eigen() const { return {x, y, z}; }
  static BlochVector from_eigen(const Eigen::Vector3d &v) { return {v.x(), v.y(), v.z()}; }
};

/// Normalized single-qubit pure state.
///
/// Stores amplitudes rather than angles: states produced by an SU(2) action
/// (tetrahedron frames) carry a global phase that matters once the state is
/// doubled into |n>|n> and superposed with the singlet. `canonical()` gives
/// the representative with a real, nonnegative |0> amplitude.
class PureQubit {
 public:
  PureQubit() : amp_(1.0, 0.0) {}

  /// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>; theta in [0, pi], phi in [0, 2pi).
  static PureQubit from_angles(double theta, double phi);
  /// Amplitudes must have unit norm within kExactTol.
  static PureQubit from_amplitudes(const Vec2c &amp);
  /// Normalizes any nonzero vector.
  static PureQubit normalized(const Vec2c &amp);
  /// Canonical state for a Bloch direction; the vector is normalized first.
  static PureQubit from_bloch(const BlochVector &n);

  const Vec2c &amplitudes() const { return amp_; }
  cplx c0() const { return amp_(0); }
  cplx c1() const { return amp_(1); }

  double theta() const;
  /// In [0, 2pi); 0 at the poles.
  double phi() const;
  BlochVector bloch() const;
  PureQubit canonical() const;

 private:
  explicit PureQubit(const Vec2c &amp) : amp_(amp) {}
  Vec2c amp_;
};

/// Four-amplitude two-qubit vector. Normalized unless built with `unnormalized`.
class TwoQubitState {
 public:
  TwoQubitState() { amp_.setZero(); amp_(0) = 1.0; }

  static TwoQubitState from_amplitudes(const Vec4c &amp);
  static TwoQubitState unnormalized(const Vec4c &amp) { return TwoQubitState(amp); }

  const Vec4c &amplitudes() const { return amp_; }
  cplx operator[](int i) const { return amp_(i); }
  double norm() const { return amp_.norm(); }
  cplx inner(const TwoQubitState &other) const { return amp_.dot(other.amp_); }

 private:
  explicit TwoQubitState(const Vec4c &amp) : amp_(amp) {}
  Vec4c amp_;
};

struct SingleQubitOperator {
  Mat2c matrix = Mat2c::Identity();

  static SingleQubitOperator identity() { return {}; }
  bool is_unitary(double tol = kExactTol) const;
  /// Largest entry of |U^dagger U - I|.
  double unitarity_residual() const;
};

class QubitDensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positivity (eigenvalues >= -kExactTol).
  static QubitDensityMatrix from_matrix(const Mat2c &rho);
  static QubitDensityMatrix from_pure(const PureQubit &psi);
  /// (I + r.sigma)/2 for |r| <= 1.
  static QubitDensityMatrix from_bloch(const BlochVector &r);
  static QubitDensityMatrix maximally_mixed();

  const Mat2c &matrix() const { return rho_; }

 private:
  explicit QubitDensityMatrix(const Mat2c &rho) : rho_(rho) {}
  Mat2c rho_;
};

PureQubit state_from_angles(double theta, double phi);

double fidelity_pure(const PureQubit &a, const PureQubit &b);

/// 1 - [Tr sqrt(sqrt(est) rho sqrt(est))]^2.
double infidelity_mixed(const QubitDensityMatrix &est, const QubitDensityMatrix &true_state);

/// 2|ad - bc| for amplitudes (a, b, c, d).
double concurrence(const TwoQubitState &psi);

TwoQubitState tensor_square(const PureQubit &n);

/// Uniform on the Bloch sphere: theta = arccos(1 - 2u), phi = 2 pi v.
PureQubit haar_random_qubit(Rng &rng);

/// (|01> - |10>)/sqrt(2).
TwoQubitState singlet();

Mat4c kron(const Mat2c &a, const Mat2c &b);
Vec4c kron(const Vec2c &a, const Vec2c &b);

/// Pauli matrix by index: 0 -> I, 1 -> X, 2 -> Y, 3 -> Z.
const Mat2c &pauli(int index);

/// Single-qubit SU(2) element acting on states as the rotation R acts on Bloch vectors.
Mat2c su2_from_rotation(const Eigen::Matrix3d &rotation);

}  // namespace collmeas
