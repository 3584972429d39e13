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

#include "collmeas/game.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>

#include "collmeas/errors.hpp"
#include "collmeas/outcome_model.hpp"
#include "collmeas/rng.hpp"
#include "collmeas/summation.hpp"

namespace collmeas {

FiniteSetPrior FiniteSetPrior::make(std::vector<PureQubit> states, std::vector<double> weights) {
  if (states.empty()) throw DomainError("finite prior needs at least one state");
  if (weights.empty()) weights.assign(states.size(), 1.0 / static_cast<double>(states.size()));
  if (weights.size() != states.size()) throw DomainError("finite prior weight count differs from state count");
  CompensatedSum total;
  for (double w : weights) {
    if (!(w >= 0.0)) throw DomainError("finite prior weights must be nonnegative");
    total.add(w);
  }
  if (std::abs(total.value() - 1.0) > 1e-9) throw DomainError("finite prior weights must sum to 1");
  return {std::move(states), std::move(weights)};
}

GameConfig GameConfig::ideal(Prior prior, StrategyKind strategy, std::uint64_t trials, std::uint64_t seed,
                             const TetrahedronFrame &frame) {
  GameConfig config;
  config.prior = std::move(prior);
  config.strategy = strategy;
  config.trials = trials;
  config.seed = seed;
  config.frame = frame;
  config.device = make_device(build_mp_basis(frame));
  return config;
}

namespace {

struct PreparedGame {
  OutcomeModel model;
  bool uniform = false;
  std::vector<PureQubit> states;
  std::vector<Eigen::Vector3d> bloch;
  std::vector<double> cumulative;
  std::vector<Probabilities4> probs;
  std::vector<Probabilities4> guess_fidelity;
};

struct BlockTally {
  CompensatedSum fidelity;
  CompensatedSum fidelity_sq;
  std::vector<std::array<std::uint64_t, 4>> outcome_counts;
};

std::vector<PureQubit> prior_states(const Prior &prior, const TetrahedronFrame &frame, std::vector<double> &weights) {
  if (std::holds_alternative<TetrahedronVerticesPrior>(prior)) {
    weights.assign(4, 0.25);
    return {frame.states.begin(), frame.states.end()};
  }
  const auto &finite = std::get<FiniteSetPrior>(prior);
  weights = finite.weights;
  return finite.states;
}

PreparedGame prepare(const GameConfig &config) {
  if (config.trials < 1) throw DomainError("a game needs at least one trial");
  PreparedGame game;
  const MPBasis basis = build_mp_basis(config.frame);
  game.model = OutcomeModel::build(config.strategy, config.device, basis);
  game.uniform = std::holds_alternative<UniformSpherePrior>(config.prior);
  if (game.uniform) return game;

  std::vector<double> weights;
  game.states = prior_states(config.prior, config.frame, weights);
  CompensatedSum running;
  for (std::size_t s = 0; s < game.states.size(); ++s) {
    running.add(weights[s]);
    game.cumulative.push_back(running.value());
    const Eigen::Vector3d n = game.states[s].bloch().as_eigen();
    game.bloch.push_back(n);
    game.probs.push_back(game.model.probabilities(n));
    Probabilities4 f{};
    for (int g = 0; g < 4; ++g) f[g] = fidelity_pure(game.states[s], game.model.guesses()[g]);
    game.guess_fidelity.push_back(f);
  }
  return game;
}

int draw_index(const Probabilities4 &p, double u) {
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    acc += p[i];
    if (u < acc) return i;
  }
  return 3;
}

std::size_t draw_state(const std::vector<double> &cumulative, double u) {
  const double scaled = u * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), scaled);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

BlockTally run_block(const PreparedGame &game, const GameConfig &config, std::uint64_t block) {
  const std::uint64_t begin = block * kTrialsPerBlock;
  const std::uint64_t end = std::min(config.trials, begin + kTrialsPerBlock);
  Rng rng = Rng::substream(config.seed, {static_cast<std::uint64_t>(StreamTag::kGame), block});
  BlockTally tally;
  tally.outcome_counts.assign(game.states.size(), {0, 0, 0, 0});
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  for (std::uint64_t t = begin; t < end; ++t) {
    double f;
    if (game.uniform) {
      const double cos_theta = 1.0 - 2.0 * rng.uniform();
      const double phi = kTwoPi * rng.uniform();
      const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
      const Eigen::Vector3d n(sin_theta * std::cos(phi), sin_theta * std::sin(phi), cos_theta);
      const int g = draw_index(game.model.probabilities(n), rng.uniform());
      f = 0.5 * (1.0 + n.dot(game.model.guess_bloch()[g]));
    } else {
      const std::size_t s = draw_state(game.cumulative, rng.uniform());
      const int g = draw_index(game.probs[s], rng.uniform());
      ++tally.outcome_counts[s][g];
      f = game.guess_fidelity[s][g];
    }
    tally.fidelity.add(f);
    tally.fidelity_sq.add(f * f);
  }
  return tally;
}

GameResult reduce(const PreparedGame &game, const GameConfig &config, const std::vector<BlockTally> &blocks) {
  CompensatedSum sum, sum_sq;
  std::vector<std::array<std::uint64_t, 4>> counts(game.states.size(), {0, 0, 0, 0});
  for (const BlockTally &b : blocks) {
    sum.merge(b.fidelity);
    sum_sq.merge(b.fidelity_sq);
    for (std::size_t s = 0; s < counts.size(); ++s)
      for (int g = 0; g < 4; ++g) counts[s][g] += b.outcome_counts[s][g];
  }

  GameResult result;
  result.trials = config.trials;
  const double n = static_cast<double>(config.trials);
  result.average_fidelity = sum.value() / n;
  if (config.trials > 1) {
    const double var = std::max(0.0, (sum_sq.value() - sum.value() * sum.value() / n) / (n - 1.0));
    result.standard_error = std::sqrt(var / n);
  }
  for (std::size_t s = 0; s < counts.size(); ++s) {
    PerStateResult row;
    row.state = game.states[s];
    for (int g = 0; g < 4; ++g) row.trials += counts[s][g];
    if (row.trials > 0) {
      for (int g = 0; g < 4; ++g) {
        row.frequencies[g] = static_cast<double>(counts[s][g]) / static_cast<double>(row.trials);
        row.fidelity += row.frequencies[g] * game.guess_fidelity[s][g];
      }
    }
    result.per_state.push_back(row);
  }
  return result;
}

std::uint64_t block_count(std::uint64_t trials) { return (trials + kTrialsPerBlock - 1) / kTrialsPerBlock; }

}  // namespace

GameResult run_game_serial(const GameConfig &config) {
  const PreparedGame game = prepare(config);
  std::vector<BlockTally> blocks;
  for (std::uint64_t b = 0; b < block_count(config.trials); ++b) blocks.push_back(run_block(game, config, b));
  return reduce(game, config, blocks);
}

GameResult run_game(const GameConfig &config) {
  const PreparedGame game = prepare(config);
  const auto nblocks = static_cast<std::int64_t>(block_count(config.trials));
  std::vector<BlockTally> blocks(static_cast<std::size_t>(nblocks));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t b = 0; b < nblocks; ++b) {
    try {
      blocks[static_cast<std::size_t>(b)] = run_block(game, config, static_cast<std::uint64_t>(b));
    } catch (...) {
#pragma omp critical(collmeas_game_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return reduce(game, config, blocks);
}

namespace {

template <int Order>
double sphere_average(const OutcomeModel &model, int azimuthal) {
  const double dphi = 2.0 * std::numbers::pi / azimuthal;
  auto ring = [&](double cos_theta) {
    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    CompensatedSum acc;
    for (int k = 0; k < azimuthal; ++k) {
      const double phi = (k + 0.5) * dphi;
      acc.add(model.expected_fidelity({sin_theta * std::cos(phi), sin_theta * std::sin(phi), cos_theta}));
    }
    return acc.value() / azimuthal;
  };
  return 0.5 * boost::math::quadrature::gauss<double, Order>::integrate(ring, -1.0, 1.0);
}

}  // namespace

double expected_fidelity(const Prior &prior, StrategyKind strategy, const DeviceModel &device,
                         const TetrahedronFrame &frame, const QuadratureOrder &order) {
  const OutcomeModel model = OutcomeModel::build(strategy, device, build_mp_basis(frame));
  if (std::holds_alternative<UniformSpherePrior>(prior)) {
    if (order.azimuthal < 1) throw DomainError("azimuthal quadrature order must be positive");
    switch (order.polar) {
      case 16: return sphere_average<16>(model, order.azimuthal);
      case 32: return sphere_average<32>(model, order.azimuthal);
      case 64: return sphere_average<64>(model, order.azimuthal);
      case 128: return sphere_average<128>(model, order.azimuthal);
      default: throw DomainError("polar quadrature order must be 16, 32, 64 or 128");
    }
  }
  std::vector<double> weights;
  const std::vector<PureQubit> states = prior_states(prior, frame, weights);
  CompensatedSum acc;
  for (std::size_t s = 0; s < states.size(); ++s) {
    const Probabilities4 p = model.probabilities(states[s].bloch().as_eigen());
    for (int g = 0; g < 4; ++g) acc.add(weights[s] * p[g] * fidelity_pure(states[s], model.guesses()[g]));
  }
  return acc.value();
}

double optimal_collective_fidelity(std::uint64_t copies) {
  if (copies == 0) throw DomainError("number of copies must be at least 1");
  const double n = static_cast<double>(copies);
  return (n + 1.0) / (n + 2.0);
}

double benchmarks::locc_uniform() { return (3.0 + std::sqrt(2.0)) / 6.0; }

}  // namespace collmeas
