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

// Independent reference computations. None of these go through the library's
// device model, outcome model or optimizer; they are built from the textbook
// formulas directly so they can catch convention slips in the library.

#include <array>
#include <cstdint>
#include <vector>

#include "collmeas/qcore.hpp"

namespace collmeas::testing {

/// Tetrahedron vertex j (0-based) in the unrotated frame, as amplitudes.
Vec2c vertex_amplitudes(int j);
Eigen::Vector3d vertex_bloch(int j);

/// +-1/2 |S> + (sqrt3/2) |n_j n_j>, unrotated frame; + for j = 0 only.
Vec4c mp_state(int j);

/// (3/4) ((1 + n.n_i)/2)^2
std::array<double, 4> ideal_collective_probs(const Eigen::Vector3d &n);

/// Projector products P_{D/A} (x) P_{H/V} evaluated on |n>|n>, ordered DH, DV, AH, AV.
std::array<double, 4> locc_probs(const Vec2c &n);

/// Distinguishable-photon probabilities for the ideal device in the unrotated
/// frame: the setting effect reduces to (W U_A)^dag (W U_A) on photon 1, which
/// the MP target pins to the reduced state of |MP_i>, so
/// P(i|n) is proportional to <n| Tr_2 |MP_i><MP_i| |n>.
std::array<double, 4> suppressed_entanglement_probs(const Vec2c &n);

/// Expected TetraMP fidelity for a probability rule p(n) and the vertex guesses.
template <class Rule>
double tetra_expected_fidelity(Rule rule) {
  double total = 0.0;
  for (int j = 0; j < 4; ++j) {
    const auto p = rule(j);
    for (int i = 0; i < 4; ++i) total += p[i] * (1.0 + vertex_bloch(j).dot(vertex_bloch(i))) / 2.0;
  }
  return total / 4.0;
}

/// Dense geodesic grid search (spacing `resolution` radians) for the maximum of
/// sum_i f_i log p_i with p from ideal_collective_probs, followed by a
/// shrinking pattern search in the tangent plane.
Eigen::Vector3d grid_mle(const std::array<double, 4> &freq, double resolution = 0.002);

double log_likelihood_ideal(const std::array<double, 4> &freq, const Eigen::Vector3d &n);

/// 1 - |<a|b>|^2 from unit Bloch vectors.
double pure_infidelity(const Eigen::Vector3d &a, const Eigen::Vector3d &b);

/// Ordinary least squares of log y on log x: returns (a, b) for y = a x^b.
std::pair<double, double> loglog_ols(const std::vector<std::pair<double, double>> &points);

}  // namespace collmeas::testing
