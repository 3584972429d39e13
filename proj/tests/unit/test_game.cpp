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
#include <numbers>

#include "collmeas/errors.hpp"
#include "collmeas/game.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace collmeas {
namespace {

const double kLocc = (3.0 + std::sqrt(2.0)) / 6.0;

double supp_ent_oracle() {
  return testing::tetra_expected_fidelity(
      [](int j) { return testing::suppressed_entanglement_probs(testing::vertex_amplitudes(j)); });
}

TEST(ExpectedFidelity, ClosedForms) {
  const TetrahedronFrame frame = build_tetrahedron();
  const DeviceModel device = make_device(build_mp_basis(frame));
  EXPECT_NEAR(expected_fidelity(TetrahedronVerticesPrior{}, StrategyKind::Collective, device, frame), 5.0 / 6.0,
              kChainedTol);
  EXPECT_NEAR(expected_fidelity(FiniteSetPrior::make({state_from_angles(0, 0)}), StrategyKind::Collective, device,
                                frame),
              5.0 / 6.0, kChainedTol);
  EXPECT_NEAR(expected_fidelity(UniformSpherePrior{}, StrategyKind::Collective, device, frame), 0.75, 1e-6);
  EXPECT_NEAR(expected_fidelity(UniformSpherePrior{}, StrategyKind::LOCC, device, frame), kLocc, 1e-6);
}

TEST(ExpectedFidelity, TetraOraclesAgree) {
  const TetrahedronFrame frame = build_tetrahedron();
  const DeviceModel device = make_device(build_mp_basis(frame));
  const double collective = testing::tetra_expected_fidelity(
      [](int j) { return testing::ideal_collective_probs(testing::vertex_bloch(j)); });
  EXPECT_NEAR(collective, 5.0 / 6.0, kExactTol);
  const double se = supp_ent_oracle();
  EXPECT_NEAR(expected_fidelity(TetrahedronVerticesPrior{}, StrategyKind::SuppressedEntanglement, device, frame), se,
              kChainedTol);
  EXPECT_GT(5.0 / 6.0 - se, 0.10);
}

TEST(ExpectedFidelity, StrategyOrderingOnTheSphere) {
  const TetrahedronFrame frame = build_tetrahedron();
  const DeviceModel device = make_device(build_mp_basis(frame));
  const double c = expected_fidelity(UniformSpherePrior{}, StrategyKind::Collective, device, frame);
  const double l = expected_fidelity(UniformSpherePrior{}, StrategyKind::LOCC, device, frame);
  EXPECT_GT(c, l);
  EXPECT_NEAR(c - l, 0.75 - kLocc, 1e-6);
}

TEST(ExpectedFidelity, QuadratureConverged) {
  // Polynomial integrands in (cos theta, e^{i phi}): every order is exact to rounding.
  Rng rng(31);
  const TetrahedronFrame frame = build_tetrahedron(testing::random_rotation(rng));
  DeviceOptions opts;
  opts.transmittance = 0.47;
  opts.imperfection = fit_imperfection_unitary({0.987, 0.93});
  const DeviceModel device = make_device(build_mp_basis(frame), opts);
  for (StrategyKind kind : {StrategyKind::Collective, StrategyKind::LOCC, StrategyKind::SuppressedEntanglement}) {
    const double f32 = expected_fidelity(UniformSpherePrior{}, kind, device, frame, {32, 64});
    const double f64 = expected_fidelity(UniformSpherePrior{}, kind, device, frame, {64, 128});
    const double f128 = expected_fidelity(UniformSpherePrior{}, kind, device, frame, {128, 256});
    EXPECT_NEAR(f32, f128, 1e-12);
    EXPECT_NEAR(f64, f128, 1e-12);
  }
  EXPECT_THROW(expected_fidelity(UniformSpherePrior{}, StrategyKind::Collective, device, frame, {17, 64}),
               DomainError);
}

TEST(ExpectedFidelity, TetraInvariantUnderFrameRotation) {
  Rng rng(32);
  for (int k = 0; k < 50; ++k) {
    const TetrahedronFrame frame = build_tetrahedron(testing::random_rotation(rng));
    const DeviceModel device = make_device(build_mp_basis(frame));
    EXPECT_NEAR(expected_fidelity(TetrahedronVerticesPrior{}, StrategyKind::Collective, device, frame), 5.0 / 6.0,
                kChainedTol);
    EXPECT_NEAR(expected_fidelity(UniformSpherePrior{}, StrategyKind::Collective, device, frame), 0.75, 1e-8);
  }
}

TEST(OptimalCollectiveFidelity, Formula) {
  EXPECT_DOUBLE_EQ(optimal_collective_fidelity(2), 0.75);
  EXPECT_DOUBLE_EQ(optimal_collective_fidelity(1), 2.0 / 3.0);
  EXPECT_GT(optimal_collective_fidelity(1000000), 0.999998);
  EXPECT_LT(optimal_collective_fidelity(1000000), 1.0);
  EXPECT_THROW(optimal_collective_fidelity(0), DomainError);
}

TEST(FiniteSetPrior, Validation) {
  const PureQubit a = state_from_angles(0, 0), b = state_from_angles(1, 1);
  EXPECT_NO_THROW(FiniteSetPrior::make({a, b}, {0.3, 0.7}));
  EXPECT_THROW(FiniteSetPrior::make({a, b}, {0.3, 0.6}), DomainError);
  EXPECT_THROW(FiniteSetPrior::make({a, b}, {-0.1, 1.1}), DomainError);
  EXPECT_THROW(FiniteSetPrior::make({a, b}, {1.0}), DomainError);
  EXPECT_THROW(FiniteSetPrior::make({}, {}), DomainError);
  const FiniteSetPrior u = FiniteSetPrior::make({a, b});
  EXPECT_DOUBLE_EQ(u.weights[0], 0.5);
}

TEST(RunGame, GenMPBenchmarks) {
  const GameResult c = run_game(GameConfig::ideal(UniformSpherePrior{}, StrategyKind::Collective, 1000000, 42));
  EXPECT_NEAR(c.average_fidelity, 0.75, 0.002);
  const GameResult l = run_game(GameConfig::ideal(UniformSpherePrior{}, StrategyKind::LOCC, 1000000, 43));
  EXPECT_NEAR(l.average_fidelity, kLocc, 0.002);
  EXPECT_TRUE(c.per_state.empty());
  EXPECT_EQ(c.trials, 1000000u);
}

TEST(RunGame, TetraMP) {
  const GameResult c =
      run_game(GameConfig::ideal(TetrahedronVerticesPrior{}, StrategyKind::Collective, 1000000, 7));
  EXPECT_NEAR(c.average_fidelity, 5.0 / 6.0, 0.002);
  const GameResult s =
      run_game(GameConfig::ideal(TetrahedronVerticesPrior{}, StrategyKind::SuppressedEntanglement, 1000000, 7));
  EXPECT_NEAR(s.average_fidelity, supp_ent_oracle(), 3.0 * s.standard_error);
  EXPECT_EQ(s.per_state.size(), 4u);
}

TEST(RunGame, AverageIsTrialWeightedPerStateFidelity) {
  Rng rng(33);
  std::vector<PureQubit> states;
  for (int k = 0; k < 7; ++k) states.push_back(testing::random_pure(rng));
  const GameResult r = run_game(GameConfig::ideal(FiniteSetPrior::make(states, {0.1, 0.2, 0.05, 0.15, 0.2, 0.1, 0.2}),
                                                  StrategyKind::Collective, 100000, 5));
  double combined = 0.0;
  std::uint64_t trials = 0;
  for (const PerStateResult &row : r.per_state) {
    combined += row.fidelity * static_cast<double>(row.trials) / static_cast<double>(r.trials);
    trials += row.trials;
    double freq_sum = 0.0;
    for (double f : row.frequencies) freq_sum += f;
    if (row.trials > 0) {
      EXPECT_NEAR(freq_sum, 1.0, kExactTol);
    }
  }
  EXPECT_EQ(trials, r.trials);
  EXPECT_NEAR(r.average_fidelity, combined, kExactTol);
}

TEST(RunGame, FiniteSetConvergesOnManySeeds) {
  Rng rng(34);
  std::vector<PureQubit> states;
  for (int k = 0; k < 5; ++k) states.push_back(testing::random_pure(rng));
  const GameConfig base = GameConfig::ideal(FiniteSetPrior::make(states), StrategyKind::Collective, 1000000, 0);
  const double want = expected_fidelity(base.prior, base.strategy, base.device, base.frame);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GameConfig config = base;
    config.seed = seed;
    const GameResult r = run_game(config);
    EXPECT_LT(std::abs(r.average_fidelity - want), 4.0 * r.standard_error) << "seed " << seed;
  }
}

void expect_identical(const GameResult &a, const GameResult &b) {
  EXPECT_EQ(a.average_fidelity, b.average_fidelity);
  EXPECT_EQ(a.standard_error, b.standard_error);
  EXPECT_EQ(a.trials, b.trials);
  ASSERT_EQ(a.per_state.size(), b.per_state.size());
  for (std::size_t i = 0; i < a.per_state.size(); ++i) {
    EXPECT_EQ(a.per_state[i].trials, b.per_state[i].trials);
    EXPECT_EQ(a.per_state[i].frequencies, b.per_state[i].frequencies);
    EXPECT_EQ(a.per_state[i].fidelity, b.per_state[i].fidelity);
  }
}

TEST(RunGame, DeterministicAndMatchesSerialReference) {
  for (const Prior &prior : {Prior{UniformSpherePrior{}}, Prior{TetrahedronVerticesPrior{}}}) {
    for (StrategyKind kind : {StrategyKind::Collective, StrategyKind::LOCC, StrategyKind::SuppressedEntanglement}) {
      // Not a multiple of the block size, so the ragged last block is covered.
      const GameConfig config = GameConfig::ideal(prior, kind, 3 * kTrialsPerBlock + 1234, 77);
      const GameResult a = run_game(config);
      expect_identical(a, run_game(config));
      expect_identical(a, run_game_serial(config));
    }
  }
}

TEST(RunGame, SeedsGiveDifferentStreams) {
  const GameResult a = run_game(GameConfig::ideal(UniformSpherePrior{}, StrategyKind::Collective, 10000, 1));
  const GameResult b = run_game(GameConfig::ideal(UniformSpherePrior{}, StrategyKind::Collective, 10000, 2));
  EXPECT_NE(a.average_fidelity, b.average_fidelity);
}

TEST(RunGame, RejectsZeroTrials) {
  EXPECT_THROW(run_game(GameConfig::ideal(UniformSpherePrior{}, StrategyKind::Collective, 0, 1)), DomainError);
}

TEST(Imperfection, IdentityTargets) {
  const SingleQubitOperator u = fit_imperfection_unitary({1.0, 1.0});
  EXPECT_NEAR(v_overlap(u), 1.0, kChainedTol);
  EXPECT_NEAR(a_overlap(u), 1.0, kChainedTol);
  EXPECT_NEAR(std::abs(u.matrix.trace()), 2.0, 1e-6);
}

TEST(Imperfection, MeasuredVisibilities) {
  const SingleQubitOperator u = fit_imperfection_unitary({0.987, 0.93});
  EXPECT_NEAR(v_overlap(u), 0.987, 1e-8);
  EXPECT_NEAR(a_overlap(u), 0.93, 1e-8);
  EXPECT_LT(u.unitarity_residual(), kExactTol);
}

TEST(Imperfection, OverlapsMatchDirectProjection) {
  Rng rng(35);
  const double h = 1.0 / std::sqrt(2.0);
  const Vec2c v(0.0, 1.0), a(h, -h);
  for (int k = 0; k < 100; ++k) {
    SingleQubitOperator u;
    u.matrix = testing::random_unitary(rng);
    EXPECT_NEAR(v_overlap(u), std::norm(v.dot(u.matrix * v)), kExactTol);
    EXPECT_NEAR(a_overlap(u), std::norm(a.dot(u.matrix * a)), kExactTol);
  }
}

TEST(Imperfection, FamilyMembersAllMeetTargets) {
  Rng rng(36);
  for (int k = 0; k < 10; ++k) {
    const ImperfectionTargets t{testing::uniform_in(rng, 0.6, 1.0), testing::uniform_in(rng, 0.6, 1.0)};
    const auto family = imperfection_family(t);
    ASSERT_FALSE(family.empty());
    for (const ImperfectionFit &m : family) {
      EXPECT_NEAR(v_overlap(m.unitary), t.v_overlap, 1e-8);
      EXPECT_NEAR(a_overlap(m.unitary), t.a_overlap, 1e-8);
      EXPECT_LT(m.unitary.unitarity_residual(), kExactTol);
    }
  }
}

TEST(Imperfection, RejectsOutOfRangeTargets) {
  EXPECT_THROW(fit_imperfection_unitary({1.2, 0.9}), DomainError);
  EXPECT_THROW(fit_imperfection_unitary({0.9, -0.1}), DomainError);
}

TEST(CorrectedBound, IdentityPerturbationChangesNothing) {
  const CorrectedBound b = corrected_fidelity_bound(
      GameConfig::ideal(UniformSpherePrior{}, StrategyKind::Collective, 200000, 3), {1.0, 1.0});
  EXPECT_NEAR(b.with_imperfection, b.ideal, 3.0 * std::hypot(b.ideal_se, b.with_imperfection_se));
  EXPECT_NEAR(b.expected_gap, 0.0, 1e-8);
}

TEST(CorrectedBound, MeasuredVisibilitiesLowerTheFidelity) {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const CorrectedBound b = corrected_fidelity_bound(
        GameConfig::ideal(UniformSpherePrior{}, StrategyKind::Collective, 1000000, seed), {0.987, 0.93});
    EXPECT_NEAR(b.ideal, 0.75, 0.002);
    EXPECT_LT(b.with_imperfection, b.ideal);
    EXPECT_GT(b.expected_gap, 0.0);
  }
  const CorrectedBound t = corrected_fidelity_bound(
      GameConfig::ideal(TetrahedronVerticesPrior{}, StrategyKind::Collective, 200000, 4), {0.987, 0.93});
  EXPECT_GT(t.with_imperfection_se, 0.0);
  EXPECT_TRUE(std::isfinite(t.gap));
}

TEST(CorrectedBound, CollectiveOnly) {
  EXPECT_THROW(corrected_fidelity_bound(GameConfig::ideal(UniformSpherePrior{}, StrategyKind::LOCC, 10, 1), {1, 1}),
               DomainError);
}

}  // namespace
}  // namespace collmeas
