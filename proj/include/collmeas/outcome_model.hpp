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

#include <Eigen/Dense>
#include <array>

#include "collmeas/measurement.hpp"

namespace collmeas {

/// Outcome weights of a strategy as real quadratic forms in the Bloch vector.
///
/// Every outcome is a two-photon effect Q_i, so on rho(m) x rho(m) its weight
/// is  w_i(m) = v^T A_i v  with v = (1, m_x, m_y, m_z) and
/// (A_i)_ab = Tr[Q_i (sigma_a x sigma_b)] / 4. This form is exact for any m in
/// the unit ball (mixed inputs included), which the tomography fit relies on.
/// On the sphere it agrees with strategy_outcome_probs.
class OutcomeModel {
 public:
  static OutcomeModel build(StrategyKind kind, const DeviceModel &device, const MPBasis &basis);

  /// Unnormalized coincidence weights.
  Probabilities4 weights(const Eigen::Vector3d &m) const;
  /// Post-selected probabilities; throws DegenerateInputError when all weights vanish.
  Probabilities4 probabilities(const Eigen::Vector3d &m) const;

  /// sum_i f_i log p_i(m) with p floored at 1e-300; optional gradient in m.
  double log_likelihood(const Probabilities4 &freq, const Eigen::Vector3d &m,
                        Eigen::Vector3d *gradient = nullptr) const;

  /// Expected fidelity sum_i p_i(n) (1 + n.g_i)/2 for a unit vector n.
  double expected_fidelity(const Eigen::Vector3d &n) const;

  StrategyKind kind() const { return kind_; }
  const std::array<PureQubit, 4> &guesses() const { return guesses_; }
  const std::array<Eigen::Vector3d, 4> &guess_bloch() const { return guess_bloch_; }
  const Eigen::Matrix4d &form(int outcome) const { return forms_[outcome]; }

 private:
  StrategyKind kind_ = StrategyKind::Collective;
  std::array<Eigen::Matrix4d, 4> forms_;
  std::array<PureQubit, 4> guesses_;
  std::array<Eigen::Vector3d, 4> guess_bloch_;
};

}  // namespace collmeas
