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

#include <gtest/gtest.h>

#include <cmath>

#include "collmeas/errors.hpp"
#include "collmeas/tomography.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace collmeas {
namespace {

struct Ideal {
  TetrahedronFrame frame = build_tetrahedron();
  DeviceModel device = make_device(build_mp_basis(frame));
};

double infidelity(const PureQubit &a, const PureQubit &b) { return 1.0 - fidelity_pure(a, b); }

TEST(SampleOutcomes, CountsAndFractions) {
  const Ideal ideal;
  Rng rng(41);
  const OutcomeCounts c = sample_outcomes(state_from_angles(0, 0), 1200, ideal.device, ideal.frame, rng);
  EXPECT_EQ(c.total_pairs(), 1200u);
  EXPECT_NEAR(static_cast<double>(c.counts[0]) / 1200.0, 0.75, 0.04);
}

TEST(SampleOutcomes, SinglePair) {
  const Ideal ideal;
  Rng rng(42);
  for (int k = 0; k < 50; ++k) {
    const OutcomeCounts c = sample_outcomes(testing::random_pure(rng), 1, ideal.device, ideal.frame, rng);
    int nonzero = 0;
    for (auto x : c.counts) {
      if (x != 0) {
        ++nonzero;
        EXPECT_EQ(x, 1u);
      }
    }
    EXPECT_EQ(nonzero, 1);
  }
}

TEST(SampleOutcomes, Deterministic) {
  const Ideal ideal;
  const PureQubit s = state_from_angles(1.0, 2.0);
  Rng a(43), b(43);
  EXPECT_EQ(sample_outcomes(s, 500, ideal.device, ideal.frame, a).counts,
            sample_outcomes(s, 500, ideal.device, ideal.frame, b).counts);
}

TEST(SampleOutcomes, MultinomialMeans) {
  const Ideal ideal;
  Rng rng(44);
  const PureQubit s = testing::random_pure(rng);
  const auto p = testing::ideal_collective_probs(s.bloch().as_eigen());
  const std::uint64_t n = 400000;
  const OutcomeCounts c = sample_outcomes(s, n, ideal.device, ideal.frame, rng);
  for (int i = 0; i < 4; ++i) {
    const double sd = std::sqrt(p[i] * (1 - p[i]) / n);
    EXPECT_NEAR(static_cast<double>(c.counts[i]) / n, p[i], 5 * sd + 1e-12);
  }
}

TEST(Mle, ExactFrequenciesOfZero) {
  const Ideal ideal;
  OutcomeCounts c;
  c.counts = {900000000, 100000000, 100000000, 100000000};
  EXPECT_LT(infidelity(mle_reconstruct(c, ideal.frame, ideal.device), state_from_angles(0, 0)), 1e-9);
}

TEST(Mle, ExactFrequencyRecoveryOnRandomStates) {
  const Ideal ideal;
  Rng rng(45);
  for (int k = 0; k < 100; ++k) {
    const PureQubit s = testing::random_pure(rng);
    const auto p = testing::ideal_collective_probs(s.bloch().as_eigen());
    const PureQubit est = mle_reconstruct(Probabilities4{p[0], p[1], p[2], p[3]}, ideal.frame, ideal.device);
    EXPECT_LT(infidelity(est, s), 1e-9);
  }
}

TEST(Mle, ExactRecoveryWithImperfectDevice) {
  Rng rng(46);
  const TetrahedronFrame frame = build_tetrahedron(testing::random_rotation(rng));
  DeviceOptions opts;
  opts.transmittance = 0.47;
  opts.imperfection.matrix = testing::random_unitary(rng);
  const DeviceModel device = make_device(build_mp_basis(frame), opts);
  for (int k = 0; k < 30; ++k) {
    const PureQubit s = testing::random_pure(rng);
    const Probabilities4 p = strategy_outcome_probs(StrategyKind::Collective, device, build_mp_basis(frame), s);
    EXPECT_LT(infidelity(mle_reconstruct(p, frame, device), s), 1e-9);
  }
}

TEST(Mle, AgreesWithGridOracle) {
  const Ideal ideal;
  Rng rng(47);
  for (int k = 0; k < 5; ++k) {
    const PureQubit s = testing::random_pure(rng);
    const std::uint64_t pairs = 20 + rng.below(600);
    const OutcomeCounts c = sample_outcomes(s, pairs, ideal.device, ideal.frame, rng);
    const Probabilities4 w = c.as_weights();
    const Eigen::Vector3d oracle = testing::grid_mle({w[0], w[1], w[2], w[3]});
    const PureQubit est = mle_reconstruct(c, ideal.frame, ideal.device);
    EXPECT_LT(testing::pure_infidelity(est.bloch().as_eigen(), oracle), 1e-8) << "pairs " << pairs;
  }
}

TEST(Mle, DetailedResultIsStationary) {
  const Ideal ideal;
  const OutcomeModel model = OutcomeModel::build(StrategyKind::Collective, ideal.device, build_mp_basis(ideal.frame));
  Rng rng(48);
  for (int k = 0; k < 200; ++k) {
    const PureQubit s = testing::random_pure(rng);
    const OutcomeCounts c = sample_outcomes(s, 4 + rng.below(100), ideal.device, ideal.frame, rng);
    const MleResult r = mle_reconstruct_detailed(c.as_weights(), model, default_mle_starts(ideal.frame));
    EXPECT_LE(r.gradient_norm, MleOptions{}.gradient_tol);
    EXPECT_NEAR(r.bloch.norm(), 1.0, kExactTol);
    // No start direction does better than the reported optimum.
    for (const Eigen::Vector3d &start : default_mle_starts(ideal.frame)) {
      EXPECT_LE(model.log_likelihood(c.as_weights(), start), r.log_likelihood + 1e-12);
    }
  }
}

TEST(Mle, RejectsEmptyCounts) {
  const Ideal ideal;
  EXPECT_THROW(mle_reconstruct(OutcomeCounts{}, ideal.frame, ideal.device), DomainError);
}

TEST(Mle, SixDeterministicStarts) {
  const Ideal ideal;
  const auto starts = default_mle_starts(ideal.frame);
  ASSERT_EQ(starts.size(), 6u);
  for (const auto &s : starts) EXPECT_NEAR(s.norm(), 1.0, kExactTol);
}

TomographyConfig ideal_config(const PureQubit &s, std::vector<std::uint64_t> sizes, std::uint32_t repeats,
                              std::uint64_t seed) {
  const Ideal ideal;
  TomographyConfig c;
  c.true_state = s;
  c.ensemble_sizes = std::move(sizes);
  c.repeats = repeats;
  c.seed = seed;
  c.frame = ideal.frame;
  c.device = ideal.device;
  return c;
}

TEST(TomographyConfig, Validation) {
  const PureQubit s = state_from_angles(1, 1);
  EXPECT_NO_THROW(ideal_config(s, {4, 8}, 1, 0).validate());
  EXPECT_THROW(ideal_config(s, {}, 1, 0).validate(), DomainError);
  EXPECT_THROW(ideal_config(s, {2, 8}, 1, 0).validate(), DomainError);
  EXPECT_THROW(ideal_config(s, {8, 9}, 1, 0).validate(), DomainError);
  EXPECT_THROW(ideal_config(s, {16, 8}, 1, 0).validate(), DomainError);
  EXPECT_THROW(ideal_config(s, {8}, 0, 0).validate(), DomainError);
}

TEST(InfidelityCurve, SingleRepeatHasNoStandardError) {
  const auto curve = infidelity_curve(ideal_config(state_from_angles(1, 1), {8, 64}, 1, 3));
  ASSERT_EQ(curve.size(), 2u);
  for (const auto &p : curve) {
    EXPECT_FALSE(p.standard_error.has_value());
    EXPECT_EQ(p.repeats, 1u);
  }
}

TEST(InfidelityCurve, LargestEnsembleReferenceIsZeroAtTheTop) {
  TomographyConfig c = ideal_config(state_from_angles(1, 1), {8, 64, 512}, 20, 3);
  c.reference = ReferenceMode::LargestEnsemble;
  const auto curve = infidelity_curve(c);
  EXPECT_EQ(curve.back().mean_infidelity, 0.0);
  EXPECT_GT(curve.front().mean_infidelity, 0.0);
}

TEST(InfidelityCurve, ParallelMatchesSerialBitForBit) {
  const TomographyConfig c = ideal_config(state_from_angles(2.0, 0.5), {8, 32, 128}, 37, 9);
  const auto a = infidelity_curve(c);
  const auto b = infidelity_curve_serial(c);
  const auto again = infidelity_curve(c);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].n_ens, b[i].n_ens);
    EXPECT_EQ(a[i].mean_infidelity, b[i].mean_infidelity);
    EXPECT_EQ(a[i].standard_error, b[i].standard_error);
    EXPECT_EQ(a[i].mean_infidelity, again[i].mean_infidelity);
  }
}

TEST(InfidelityCurve, MonotoneWithinNoise) {
  std::vector<std::uint64_t> sizes;
  for (std::uint64_t n = 8; n <= 2048; n *= 2) sizes.push_back(n);
  const auto curve = infidelity_curve(ideal_config(state_from_angles(1.1, 2.3), sizes, 200, 5));
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const double slack = 2.0 * std::hypot(*curve[i].standard_error, *curve[i - 1].standard_error);
    EXPECT_LT(curve[i].mean_infidelity, curve[i - 1].mean_infidelity + slack) << "n_ens " << curve[i].n_ens;
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto &p : curve) pts.emplace_back(static_cast<double>(p.n_ens), p.mean_infidelity);
  const ScalingFit fit = fit_power_law(pts);
  EXPECT_GE(fit.b, -1.15);
  EXPECT_LE(fit.b, -0.85);
}

TEST(InfidelityCurve, AsymptoticConsistencyOnRandomStates) {
  Rng rng(49);
  for (int k = 0; k < 20; ++k) {
    const auto curve = infidelity_curve(ideal_config(testing::random_pure(rng), {8, 2048}, 200, 100 + k));
    EXPECT_LT(curve[1].mean_infidelity, curve[0].mean_infidelity);
  }
}

TEST(PowerLaw, ExactData) {
  std::vector<std::pair<double, double>> inv, paper;
  for (double n : {8.0, 16.0, 50.0, 300.0, 2400.0}) {
    inv.emplace_back(n, 1.0 / n);
    paper.emplace_back(n, 2.2 * std::pow(n, -1.04));
  }
  const ScalingFit a = fit_power_law(inv);
  EXPECT_NEAR(a.a, 1.0, 1e-10);
  EXPECT_NEAR(a.b, -1.0, 1e-10);
  EXPECT_NEAR(a.r_squared, 1.0, 1e-12);
  const ScalingFit b = fit_power_law(paper);
  EXPECT_NEAR(b.a, 2.2, 1e-8);
  EXPECT_NEAR(b.b, -1.04, 1e-8);
  EXPECT_NEAR(b.stderr_b, 0.0, 1e-8);
}

TEST(PowerLaw, MatchesIndependentOls) {
  Rng rng(50);
  for (int k = 0; k < 100; ++k) {
    std::vector<std::pair<double, double>> pts;
    const int n = 3 + static_cast<int>(rng.below(10));
    for (int i = 0; i < n; ++i) {
      const double x = 4.0 * std::pow(2.0, i);
      pts.emplace_back(x, testing::uniform_in(rng, 0.5, 3.0) * std::pow(x, -1.0));
    }
    const ScalingFit fit = fit_power_law(pts);
    const auto [a, b] = testing::loglog_ols(pts);
    EXPECT_NEAR(fit.a, a, 1e-9 * a);
    EXPECT_NEAR(fit.b, b, 1e-9);
    EXPECT_GT(fit.a, 0.0);
    EXPECT_TRUE(std::isfinite(fit.stderr_a) && std::isfinite(fit.stderr_b));
    EXPECT_GE(fit.r_squared, 0.0);
    EXPECT_LE(fit.r_squared, 1.0 + 1e-12);
  }
}

TEST(PowerLaw, Rejects) {
  EXPECT_THROW(fit_power_law(std::vector<std::pair<double, double>>{{8, 0.1}, {16, 0.05}}), DomainError);
  EXPECT_THROW(fit_power_law(std::vector<std::pair<double, double>>{{8, 0.1}, {16, 0.0}, {32, 0.01}}), DomainError);
  EXPECT_THROW(fit_power_law(std::vector<std::pair<double, double>>{{8, 0.1}, {8, 0.2}, {8, 0.3}}), DomainError);
}

TEST(GillMassar, Reference) {
  EXPECT_DOUBLE_EQ(gill_massar_reference(1), 1.0);
  EXPECT_DOUBLE_EQ(gill_massar_reference(100), 0.01);
  EXPECT_NEAR(gill_massar_reference(2400), 4.1667e-4, 1e-8);
}

}  // namespace
}  // namespace collmeas
