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

// Tetrahedron guess frame, the two-copy collective (MP) basis, the optimal
// local strategy, and the photonic device that realizes the MP projections:
// a partial polarizer and per-setting wave plates in front of a beamsplitter
// whose opposite-port coincidences herald the projection.
//
// Settings and outcomes are numbered 1..4 at the public surface.

#include <Eigen/Dense>
#include <array>
#include <optional>

#include "collmeas/qcore.hpp"

namespace collmeas {

using Probabilities4 = std::array<double, 4>;

struct TetrahedronFrame {
  std::array<PureQubit, 4> states;
  std::array<BlochVector, 4> bloch;
  /// Azimuths of vertices 2..4 before rotation.
  std::array<double, 3> alphas{};
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
};

/// Vertex 1 is |0>, vertices 2..4 are |0>/sqrt(3) + sqrt(2/3) e^{i alpha}|1>,
/// alpha = 0, 2pi/3, 4pi/3. A rotation, if given, is applied through its SU(2)
/// image so relative phases between the vertices are preserved.
TetrahedronFrame build_tetrahedron(const std::optional<Eigen::Matrix3d> &rotation = std::nullopt);

/// R = Rz(alpha) Ry(beta) Rz(gamma).
Eigen::Matrix3d rotation_from_euler_zyz(double alpha, double beta, double gamma);

struct MPBasis {
  std::array<TwoQubitState, 4> states;
  TetrahedronFrame frame;
};

/// |MP_1> = S/2 + (sqrt3/2)|v1 v1>, |MP_j> = -S/2 + (sqrt3/2)|vj vj>.
MPBasis build_mp_basis(const TetrahedronFrame &frame);

/// |<MP_i| n n>|^2 for i = 1..4 (array index i-1).
Probabilities4 collective_outcome_probs(const MPBasis &basis, const PureQubit &n);

/// Photon 1 measured in {D, A}, photon 2 in {H, V}; order (DH, DV, AH, AV).
Probabilities4 locc_outcome_probs(const PureQubit &n);

/// Bisector guess for LOCC outcome 1..4.
PureQubit locc_guess(int outcome_index);

/// Diagonal polarization filter diag(t_H, t_V) in arm 1 (real amplitudes).
struct PartialPolarizer {
  double t_h = 1.0;
  double t_v = 1.0;

  /// Validates 0 <= t <= 1 and not both zero.
  static PartialPolarizer make(double t_h, double t_v);
  Mat2c matrix() const;
};

/// 2 t_H t_V / (t_H^2 + t_V^2).
double polarizer_concurrence(const PartialPolarizer &p);

/// (t_H, t_V) = ((1 - sqrt(1 - C^2))/C, 1), C in (0, 1].
PartialPolarizer polarizer_for_concurrence(double concurrence);

/// Power extinction ratio (larger/smaller transmitted power).
double extinction_ratio(const PartialPolarizer &p);

/// Projection efficiency 1/(1 + sqrt(1 - C^2)), C in [0, 1].
double efficiency(double concurrence);

struct SettingUnitaries {
  SingleQubitOperator arm1;
  SingleQubitOperator arm2;
};

struct DeviceModel {
  /// Beamsplitter power transmission; reflection is 1 - T.
  double transmittance = 0.5;
  PartialPolarizer polarizer;
  std::array<SettingUnitaries, 4> settings;
  /// Residual polarization unitary in arm 1, after the polarizer.
  SingleQubitOperator imperfection;
  /// Photons made distinguishable (long delay): no two-photon interference.
  bool distinguishable = false;
};

/// Wave-plate unitaries that steer the canonical projection (W x I)|S> onto
/// each |MP_i>. Throws DomainError when the polarizer concurrence differs from
/// the basis concurrence by more than kChainedTol.
std::array<SettingUnitaries, 4> setting_unitaries_for(const MPBasis &basis, const PartialPolarizer &p);

struct DeviceOptions {
  double concurrence = 0.25;
  double transmittance = 0.5;
  SingleQubitOperator imperfection;
  bool distinguishable = false;
};

/// Matched polarizer plus setting unitaries for `basis`.
DeviceModel make_device(const MPBasis &basis, const DeviceOptions &options = {});

/// Heralded coincidence probability of setting 1..4 for a two-photon input.
double device_coincidence_prob(const DeviceModel &device, int setting, const TwoQubitState &input);

/// Hermitian Q with device_coincidence_prob(setting, psi) = <psi|Q|psi>.
Mat4c coincidence_operator(const DeviceModel &device, int setting);

enum class StrategyKind { Collective, LOCC, SuppressedEntanglement };

const char *to_string(StrategyKind kind);

/// Normalized outcome distribution of a strategy for the input n x n.
/// Collective and SuppressedEntanglement post-select on coincidences (the
/// four setting probabilities are renormalized); SuppressedEntanglement
/// forces the distinguishable-photon regime regardless of the device flag.
Probabilities4 strategy_outcome_probs(StrategyKind kind, const DeviceModel &device, const MPBasis &basis,
                                      const PureQubit &n);

/// Guess attached to outcome 1..4: a frame vertex, or the LOCC bisector.
PureQubit strategy_guess(StrategyKind kind, const MPBasis &basis, int outcome_index);

}  // namespace collmeas
