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

// Two-copy collective-measurement tomography: finite-sample outcome data,
// constrained maximum-likelihood reconstruction, infidelity-vs-sample-size
// curves, and log-log power-law fits.

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "collmeas/measurement.hpp"
#include "collmeas/outcome_model.hpp"
#include "collmeas/rng.hpp"

namespace collmeas {

struct OutcomeCounts {
  std::array<std::uint64_t, 4> counts{};

  std::uint64_t total_pairs() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
  Probabilities4 as_weights() const;
};

/// Multinomial draw of `pairs` collective outcomes for the input n x n.
OutcomeCounts sample_outcomes(const PureQubit &state, std::uint64_t pairs, const DeviceModel &device,
                              const TetrahedronFrame &frame, Rng &rng);

struct MleOptions {
  /// Stop when the projected-gradient norm of the per-pair log-likelihood drops below this.
  double gradient_tol = 1e-10;
  int max_iterations = 10000;
};

struct MleResult {
  PureQubit state;
  Eigen::Vector3d bloch = Eigen::Vector3d::UnitZ();
  /// Per-pair log-likelihood at the estimate.
  double log_likelihood = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
};

/// Maximum-likelihood pure state for nonnegative (possibly fractional) outcome weights.
///
/// Accelerated projected gradient (FISTA with backtracking and restart on a
/// decrease of the objective) is run first on the unit ball, then on the
/// sphere from the normalized ball solution, from each start of a fixed
/// schedule: the four frame vertices, +z and -z. The best sphere point wins.
MleResult mle_reconstruct_detailed(const Probabilities4 &weights, const OutcomeModel &model,
                                   const std::vector<Eigen::Vector3d> &starts, const MleOptions &options = {});

PureQubit mle_reconstruct(const OutcomeCounts &counts, const TetrahedronFrame &frame, const DeviceModel &device);
PureQubit mle_reconstruct(const Probabilities4 &weights, const TetrahedronFrame &frame, const DeviceModel &device);

/// Four frame vertices followed by +z and -z.
std::vector<Eigen::Vector3d> default_mle_starts(const TetrahedronFrame &frame);

enum class ReferenceMode { TrueState, LargestEnsemble };

struct TomographyConfig {
  PureQubit true_state;
  /// Photons per estimate (pairs = n_ens / 2); ascending, even, >= 4.
  std::vector<std::uint64_t> ensemble_sizes;
  std::uint32_t repeats = 1;
  std::uint64_t seed = 0;
  DeviceModel device;
  TetrahedronFrame frame;
  ReferenceMode reference = ReferenceMode::TrueState;

  void validate() const;
};

struct InfidelityPoint {
  std::uint64_t n_ens = 0;
  double mean_infidelity = 0.0;
  /// Absent with a single repeat.
  std::optional<double> standard_error;
  std::uint32_t repeats = 0;
};

/// Each repeat draws one outcome sequence of the largest size; smaller sizes
/// use its prefixes, as when sub-sampling a single data set. Repeats run in
/// parallel on independent substreams.
std::vector<InfidelityPoint> infidelity_curve(const TomographyConfig &config);
std::vector<InfidelityPoint> infidelity_curve_serial(const TomographyConfig &config);

struct ScalingFit {
  double a = 0.0;
  double b = 0.0;
  double stderr_a = 0.0;
  double stderr_b = 0.0;
  double r_squared = 0.0;
};

/// Least squares of log y = log a + b log N. Needs >= 3 points, all positive.
ScalingFit fit_power_law(std::span<const std::pair<double, double>> points);

/// 1 / n_ens.
double gill_massar_reference(std::uint64_t n_ens);

}  // namespace collmeas
