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

#include "collmeas/outcome_model.hpp"

#include <algorithm>
#include <cmath>

#include "collmeas/errors.hpp"

namespace collmeas {

namespace {

constexpr double kProbFloor = 1e-300;

Eigen::Matrix4d quadratic_form(const Mat4c &effect) {
  Eigen::Matrix4d form;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      form(a, b) = 0.25 * (effect * kron(pauli(a), pauli(b))).trace().real();
    }
  }
  return 0.5 * (form + form.transpose());
}

Mat4c locc_effect(int outcome) {
  const double h = 1.0 / std::sqrt(2.0);
  const Vec2c d(h, h), a(h, -h), hz(1.0, 0.0), vz(0.0, 1.0);
  const Vec2c &first = (outcome < 2) ? d : a;
  const Vec2c &second = (outcome % 2 == 0) ? hz : vz;
  const Vec4c v = kron(first, second);
  return v * v.adjoint();
}

Eigen::Vector4d lift(const Eigen::Vector3d &m) { return {1.0, m.x(), m.y(), m.z()}; }

}  // namespace

OutcomeModel OutcomeModel::build(StrategyKind kind, const DeviceModel &device, const MPBasis &basis) {
  OutcomeModel model;
  model.kind_ = kind;
  DeviceModel effective = device;
  if (kind == StrategyKind::SuppressedEntanglement) effective.distinguishable = true;
  for (int i = 0; i < 4; ++i) {
    const Mat4c effect = (kind == StrategyKind::LOCC) ? locc_effect(i) : coincidence_operator(effective, i + 1);
    model.forms_[i] = quadratic_form(effect);
    model.guesses_[i] = strategy_guess(kind, basis, i + 1);
    model.guess_bloch_[i] = model.guesses_[i].bloch().as_eigen();
  }
  return model;
}

Probabilities4 OutcomeModel::weights(const Eigen::Vector3d &m) const {
  const Eigen::Vector4d v = lift(m);
  Probabilities4 w{};
  for (int i = 0; i < 4; ++i) w[i] = v.dot(forms_[i] * v);
  return w;
}

Probabilities4 OutcomeModel::probabilities(const Eigen::Vector3d &m) const {
  Probabilities4 p = weights(m);
  double total = 0.0;
  for (double &v : p) {
    v = std::max(v, 0.0);
    total += v;
  }
  if (!(total > 0.0)) throw DegenerateInputError("all four coincidence weights vanish");
  for (double &v : p) v /= total;
  return p;
}

double OutcomeModel::log_likelihood(const Probabilities4 &freq, const Eigen::Vector3d &m,
                                    Eigen::Vector3d *gradient) const {
  const Eigen::Vector4d v = lift(m);
  double total = 0.0;
  double freq_total = 0.0;
  double value = 0.0;
  Eigen::Vector4d grad_sum = Eigen::Vector4d::Zero();
  Eigen::Vector4d grad = Eigen::Vector4d::Zero();
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector4d av = forms_[i] * v;
    const double w = std::max(v.dot(av), kProbFloor);
    total += w;
    grad_sum += av;
    freq_total += freq[i];
    if (freq[i] > 0.0) {
      value += freq[i] * std::log(w);
      grad += (freq[i] / w) * av;
    }
  }
  total = std::max(total, kProbFloor);
  value -= freq_total * std::log(total);
  if (gradient) {
    const Eigen::Vector4d g = 2.0 * (grad - (freq_total / total) * grad_sum);
    *gradient = g.tail<3>();
  }
  return value;
}

double OutcomeModel::expected_fidelity(const Eigen::Vector3d &n) const {
  const Probabilities4 p = probabilities(n);
  double f = 0.0;
  for (int i = 0; i < 4; ++i) f += p[i] * 0.5 * (1.0 + n.dot(guess_bloch_[i]));
  return f;
}

}  // namespace collmeas
