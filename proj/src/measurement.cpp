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

#include "collmeas/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "collmeas/errors.hpp"

namespace collmeas {

namespace {

constexpr double kPi = std::numbers::pi;

void check_index(int index, const char *what) {
  if (index < 1 || index > 4) {
    throw DomainError(std::string(what) + " must be in 1..4, got " + std::to_string(index));
  }
}

// Coefficient matrix C_jk = psi_(2j+k): (X x Y)psi corresponds to X C Y^T.
Mat2c coefficient_matrix(const Vec4c &psi) {
  Mat2c c;
  c << psi(0), psi(1), psi(2), psi(3);
  return c;
}

}  // namespace

TetrahedronFrame build_tetrahedron(const std::optional<Eigen::Matrix3d> &rotation) {
  TetrahedronFrame frame;
  frame.alphas = {0.0, 2.0 * kPi / 3.0, 4.0 * kPi / 3.0};
  if (rotation) {
    const Eigen::Matrix3d &r = *rotation;
    const double ortho = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    if (ortho > kChainedTol || std::abs(r.determinant() - 1.0) > kChainedTol) {
      throw DomainError("frame rotation must be orthogonal with determinant +1");
    }
    frame.rotation = r;
  }
  const Mat2c u = su2_from_rotation(frame.rotation);

  std::array<Vec2c, 4> raw;
  raw[0] = Vec2c(1.0, 0.0);
  for (int j = 0; j < 3; ++j) {
    raw[j + 1] = Vec2c(1.0 / std::sqrt(3.0), std::polar(std::sqrt(2.0 / 3.0), frame.alphas[j]));
  }
  for (int i = 0; i < 4; ++i) {
    frame.states[i] = rotation ? PureQubit::normalized(u * raw[i]) : PureQubit::from_amplitudes(raw[i]);
    frame.bloch[i] = frame.states[i].bloch();
  }
  return frame;
}

Eigen::Matrix3d rotation_from_euler_zyz(double alpha, double beta, double gamma) {
  using Eigen::AngleAxisd;
  using Eigen::Vector3d;
  return (AngleAxisd(alpha, Vector3d::UnitZ()) * AngleAxisd(beta, Vector3d::UnitY()) *
          AngleAxisd(gamma, Vector3d::UnitZ()))
      .toRotationMatrix();
}

MPBasis build_mp_basis(const TetrahedronFrame &frame) {
  MPBasis basis;
  basis.frame = frame;
  const Vec4c s = singlet().amplitudes();
  for (int i = 0; i < 4; ++i) {
    const double sign = (i == 0) ? 0.5 : -0.5;
    const Vec4c doubled = tensor_square(frame.states[i]).amplitudes();
    basis.states[i] = TwoQubitState::unnormalized(sign * s + (std::sqrt(3.0) / 2.0) * doubled);
  }
  return basis;
}

Probabilities4 collective_outcome_probs(const MPBasis &basis, const PureQubit &n) {
  const TwoQubitState nn = tensor_square(n);
  Probabilities4 p{};
  for (int i = 0; i < 4; ++i) p[i] = std::norm(basis.states[i].inner(nn));
  return p;
}

Probabilities4 locc_outcome_probs(const PureQubit &n) {
  const double h = 1.0 / std::sqrt(2.0);
  const Vec2c d(h, h);
  const Vec2c a(h, -h);
  const Vec2c &amp = n.amplitudes();
  const double pd = std::norm(d.dot(amp));
  const double pa = std::norm(a.dot(amp));
  const double ph = std::norm(amp(0));
  const double pv = std::norm(amp(1));
  return {pd * ph, pd * pv, pa * ph, pa * pv};
}

PureQubit locc_guess(int outcome_index) {
  check_index(outcome_index, "LOCC outcome");
  const double near = kPi / 8.0;
  const double far = 3.0 * kPi / 8.0;
  switch (outcome_index) {
    case 1: return PureQubit::normalized(Vec2c(std::cos(near), std::sin(near)));
    case 2: return PureQubit::normalized(Vec2c(std::cos(far), std::sin(far)));
    case 3: return PureQubit::normalized(Vec2c(std::cos(near), -std::sin(near)));
    default: return PureQubit::normalized(Vec2c(std::cos(far), -std::sin(far)));
  }
}

PartialPolarizer PartialPolarizer::make(double t_h, double t_v) {
  if (!(t_h >= 0.0 && t_h <= 1.0 && t_v >= 0.0 && t_v <= 1.0)) {
    throw DomainError("polarizer amplitudes must lie in [0, 1]");
  }
  if (t_h == 0.0 && t_v == 0.0) throw DomainError("polarizer blocks both polarizations");
  return {t_h, t_v};
}

Mat2c PartialPolarizer::matrix() const {
  Mat2c w = Mat2c::Zero();
  w(0, 0) = t_h;
  w(1, 1) = t_v;
  return w;
}

double polarizer_concurrence(const PartialPolarizer &p) {
  const double denom = p.t_h * p.t_h + p.t_v * p.t_v;
  if (!(denom > 0.0)) throw DomainError("polarizer blocks both polarizations");
  return 2.0 * std::abs(p.t_h) * std::abs(p.t_v) / denom;
}

PartialPolarizer polarizer_for_concurrence(double concurrence) {
  if (!(concurrence > 0.0 && concurrence <= 1.0)) {
    throw DomainError("concurrence must lie in (0, 1], got " + std::to_string(concurrence));
  }
  const double t_h = (1.0 - std::sqrt(1.0 - concurrence * concurrence)) / concurrence;
  return PartialPolarizer::make(std::min(t_h, 1.0), 1.0);
}

double extinction_ratio(const PartialPolarizer &p) {
  const double hi = std::max(p.t_h, p.t_v);
  const double lo = std::min(p.t_h, p.t_v);
  return (hi * hi) / (lo * lo);
}

double efficiency(double concurrence) {
  if (!(concurrence >= 0.0 && concurrence <= 1.0)) {
    throw DomainError("concurrence must lie in [0, 1], got " + std::to_string(concurrence));
  }
  return 1.0 / (1.0 + std::sqrt(1.0 - concurrence * concurrence));
}

std::array<SettingUnitaries, 4> setting_unitaries_for(const MPBasis &basis, const PartialPolarizer &p) {
  const Vec4c canonical = kron(p.matrix(), Mat2c::Identity()) * singlet().amplitudes();
  const double c_dev = polarizer_concurrence(p);

  Eigen::JacobiSVD<Mat2c> svd_c(coefficient_matrix(canonical), Eigen::ComputeFullU | Eigen::ComputeFullV);
  std::array<SettingUnitaries, 4> out;
  for (int i = 0; i < 4; ++i) {
    const TwoQubitState &target = basis.states[i];
    const double c_target = concurrence(target) / target.amplitudes().squaredNorm();
    if (std::abs(c_target - c_dev) > kChainedTol) {
      throw DomainError("polarizer concurrence " + std::to_string(c_dev) +
                        " does not match MP state concurrence " + std::to_string(c_target));
    }
    Eigen::JacobiSVD<Mat2c> svd_t(coefficient_matrix(target.amplitudes()),
                                  Eigen::ComputeFullU | Eigen::ComputeFullV);
    // X C_c Y^T = |c| C_t with X = U_t U_c^dag, Y = conj(V_t) V_c^T.
    const Mat2c x = svd_t.matrixU() * svd_c.matrixU().adjoint();
    const Mat2c y = svd_t.matrixV().conjugate() * svd_c.matrixV().transpose();
    out[i].arm1.matrix = x.adjoint();
    out[i].arm2.matrix = y.adjoint();
  }
  return out;
}

DeviceModel make_device(const MPBasis &basis, const DeviceOptions &options) {
  if (!(options.transmittance >= 0.0 && options.transmittance <= 1.0)) {
    throw DomainError("beamsplitter transmittance must lie in [0, 1]");
  }
  if (!options.imperfection.is_unitary(kChainedTol)) throw DomainError("imperfection must be unitary");
  DeviceModel device;
  device.transmittance = options.transmittance;
  device.polarizer = polarizer_for_concurrence(options.concurrence);
  device.settings = setting_unitaries_for(basis, device.polarizer);
  device.imperfection = options.imperfection;
  device.distinguishable = options.distinguishable;
  return device;
}

namespace {

Mat4c propagation(const DeviceModel &device, int setting) {
  const SettingUnitaries &s = device.settings[setting - 1];
  const Mat2c arm1 = device.imperfection.matrix * device.polarizer.matrix() * s.arm1.matrix;
  return kron(arm1, s.arm2.matrix);
}

}  // namespace

double device_coincidence_prob(const DeviceModel &device, int setting, const TwoQubitState &input) {
  check_index(setting, "setting");
  const Vec4c out = propagation(device, setting) * input.amplitudes();
  const double t = device.transmittance;
  const double r = 1.0 - t;
  if (device.distinguishable) return (t * t + r * r) * out.squaredNorm();
  // Both photons transmitted (t) or both reflected (-r): polarization j exits
  // one port, k the other.
  double prob = 0.0;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      prob += std::norm(t * out(2 * j + k) - r * out(2 * k + j));
    }
  }
  return prob;
}

Mat4c coincidence_operator(const DeviceModel &device, int setting) {
  check_index(setting, "setting");
  const Mat4c g = propagation(device, setting);
  const double t = device.transmittance;
  const double r = 1.0 - t;
  if (device.distinguishable) return (t * t + r * r) * (g.adjoint() * g);
  Mat4c swap = Mat4c::Zero();
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
  const Mat4c interfere = t * Mat4c::Identity() - r * swap;
  const Mat4c q = g.adjoint() * interfere.adjoint() * interfere * g;
  return 0.5 * (q + q.adjoint());
}

const char *to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Collective: return "collective";
    case StrategyKind::LOCC: return "locc";
    case StrategyKind::SuppressedEntanglement: return "supp-ent";
  }
  return "?";
}

Probabilities4 strategy_outcome_probs(StrategyKind kind, const DeviceModel &device, const MPBasis &basis,
                                      const PureQubit &n) {
  (void)basis;
  if (kind == StrategyKind::LOCC) return locc_outcome_probs(n);
  DeviceModel effective = device;
  if (kind == StrategyKind::SuppressedEntanglement) effective.distinguishable = true;
  const TwoQubitState nn = tensor_square(n);
  Probabilities4 p{};
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    p[i] = device_coincidence_prob(effective, i + 1, nn);
    total += p[i];
  }
  if (!(total > 0.0)) throw DegenerateInputError("all four coincidence probabilities vanish");
  for (double &v : p) v /= total;
  return p;
}

PureQubit strategy_guess(StrategyKind kind, const MPBasis &basis, int outcome_index) {
  check_index(outcome_index, "outcome");
  if (kind == StrategyKind::LOCC) return locc_guess(outcome_index);
  return basis.frame.states[outcome_index - 1];
}

}  // namespace collmeas
