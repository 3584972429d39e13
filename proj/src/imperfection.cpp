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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "collmeas/errors.hpp"
#include "collmeas/game.hpp"
#include "collmeas/rng.hpp"

namespace collmeas {

namespace {

constexpr double kFitTol = 1e-12;
constexpr int kMaxGaussNewton = 200;

Mat2c euler_unitary(const std::array<double, 3> &angles) {
  const cplx i(0.0, 1.0);
  auto rz = [&](double a) {
    Mat2c m = Mat2c::Zero();
    m(0, 0) = std::exp(-i * (a / 2.0));
    m(1, 1) = std::exp(i * (a / 2.0));
    return m;
  };
  Mat2c ry;
  const double c = std::cos(angles[1] / 2.0);
  const double s = std::sin(angles[1] / 2.0);
  ry << c, -s, s, c;
  return rz(angles[0]) * ry * rz(angles[2]);
}

Eigen::Vector2d residual(const std::array<double, 3> &angles, const ImperfectionTargets &t) {
  const SingleQubitOperator u{euler_unitary(angles)};
  return {v_overlap(u) - t.v_overlap, a_overlap(u) - t.a_overlap};
}

// With s = (a+c)/2, d = (a-c)/2:
//   |<V|U|V>|^2 = (1 + cos b)/2
//   |<A|U|A>|^2 = (1 + cos b)/2 cos^2 s + (1 - cos b)/2 sin^2 d
Eigen::Matrix<double, 2, 3> jacobian(const std::array<double, 3> &angles) {
  const double a = angles[0], b = angles[1], c = angles[2];
  const double s = 0.5 * (a + c), d = 0.5 * (a - c);
  const double cb = std::cos(b), sb = std::sin(b);
  const double dads = -0.5 * (1.0 + cb) * std::sin(2.0 * s);
  const double dadd = 0.5 * (1.0 - cb) * std::sin(2.0 * d);
  Eigen::Matrix<double, 2, 3> j;
  j(0, 0) = 0.0;
  j(0, 1) = -0.5 * sb;
  j(0, 2) = 0.0;
  j(1, 0) = 0.5 * (dads + dadd);
  j(1, 1) = -0.5 * sb * std::cos(s) * std::cos(s) + 0.5 * sb * std::sin(d) * std::sin(d);
  j(1, 2) = 0.5 * (dads - dadd);
  return j;
}

bool gauss_newton(std::array<double, 3> &angles, const ImperfectionTargets &targets, double &final_residual) {
  Eigen::Vector2d r = residual(angles, targets);
  for (int it = 0; it < kMaxGaussNewton && r.norm() >= kFitTol; ++it) {
    const Eigen::Matrix<double, 2, 3> j = jacobian(angles);
    const Eigen::Vector3d step =
        Eigen::JacobiSVD<Eigen::Matrix<double, 2, 3>>(j, Eigen::ComputeFullU | Eigen::ComputeFullV).solve(-r);
    double scale = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 40; ++ls, scale *= 0.5) {
      std::array<double, 3> trial = angles;
      for (int k = 0; k < 3; ++k) trial[k] += scale * step(k);
      const Eigen::Vector2d rt = residual(trial, targets);
      if (rt.norm() < r.norm()) {
        angles = trial;
        r = rt;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  final_residual = r.norm();
  return final_residual < kFitTol;
}

void check_targets(const ImperfectionTargets &t) {
  if (!(t.v_overlap >= 0.0 && t.v_overlap <= 1.0 && t.a_overlap >= 0.0 && t.a_overlap <= 1.0)) {
    throw DomainError("imperfection overlap targets must lie in [0, 1]");
  }
}

}  // namespace

double v_overlap(const SingleQubitOperator &u) { return std::norm(u.matrix(1, 1)); }

double a_overlap(const SingleQubitOperator &u) {
  const double h = 1.0 / std::sqrt(2.0);
  const Vec2c a(h, -h);
  return std::norm(a.dot(u.matrix * a));
}

std::vector<ImperfectionFit> imperfection_family(const ImperfectionTargets &targets, int restarts,
                                                 std::uint64_t seed) {
  check_targets(targets);
  if (restarts < 1) throw DomainError("at least one restart is required");
  Rng rng = Rng::substream(seed, {static_cast<std::uint64_t>(StreamTag::kImperfection)});
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  std::vector<ImperfectionFit> family;
  double best_residual = std::numeric_limits<double>::infinity();
  std::array<double, 3> best_angles{};
  for (int k = 0; k < restarts; ++k) {
    std::array<double, 3> angles{kTwoPi * rng.uniform(), std::numbers::pi * rng.uniform(), kTwoPi * rng.uniform()};
    double res = 0.0;
    const bool ok = gauss_newton(angles, targets, res);
    if (res < best_residual) {
      best_residual = res;
      best_angles = angles;
    }
    if (ok) family.push_back({SingleQubitOperator{euler_unitary(angles)}, angles, res});
  }
  if (family.empty()) {
    std::ostringstream diag;
    diag << "restarts=" << restarts << " best_residual=" << best_residual << " angles=(" << best_angles[0] << ","
         << best_angles[1] << "," << best_angles[2] << ")";
    throw NumericError("imperfection fit did not converge", diag.str());
  }
  return family;
}

SingleQubitOperator fit_imperfection_unitary(const ImperfectionTargets &targets) {
  const std::vector<ImperfectionFit> family = imperfection_family(targets);
  const auto best = std::max_element(family.begin(), family.end(), [](const auto &x, const auto &y) {
    return std::abs(x.unitary.matrix.trace()) < std::abs(y.unitary.matrix.trace());
  });
  return best->unitary;
}

CorrectedBound corrected_fidelity_bound(const GameConfig &config, const ImperfectionTargets &targets) {
  if (config.strategy != StrategyKind::Collective) {
    throw DomainError("the corrected-fidelity bound applies to the collective strategy");
  }
  GameConfig ideal = config;
  ideal.device.imperfection = SingleQubitOperator::identity();
  const double ideal_expected = expected_fidelity(ideal.prior, ideal.strategy, ideal.device, ideal.frame);

  const std::vector<ImperfectionFit> family = imperfection_family(targets);
  CorrectedBound bound;
  double min_gap = std::numeric_limits<double>::infinity();
  for (const ImperfectionFit &member : family) {
    DeviceModel device = ideal.device;
    device.imperfection = member.unitary;
    const double gap = ideal_expected - expected_fidelity(config.prior, config.strategy, device, config.frame);
    if (gap < min_gap) {
      min_gap = gap;
      bound.member = member.unitary;
    }
  }
  bound.expected_gap = min_gap;

  GameConfig perturbed = ideal;
  perturbed.device.imperfection = bound.member;
  const GameResult with = run_game(perturbed);
  const GameResult without = run_game(ideal);
  bound.with_imperfection = with.average_fidelity;
  bound.with_imperfection_se = with.standard_error;
  bound.ideal = without.average_fidelity;
  bound.ideal_se = without.standard_error;
  bound.gap = bound.ideal - bound.with_imperfection;
  return bound;
}

}  // namespace collmeas
