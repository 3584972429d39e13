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

#include "collmeas/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <string>

#include "collmeas/errors.hpp"
#include "collmeas/summation.hpp"

namespace collmeas {

Probabilities4 OutcomeCounts::as_weights() const {
  return {static_cast<double>(counts[0]), static_cast<double>(counts[1]), static_cast<double>(counts[2]),
          static_cast<double>(counts[3])};
}

namespace {

int draw_outcome(const Probabilities4 &p, double u) {
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    acc += p[i];
    if (u < acc) return i;
  }
  return 3;
}

enum class Feasible { Ball, Sphere };

constexpr double kMaxStartGradient = 1e12;

Eigen::Vector3d project(const Eigen::Vector3d &v, Feasible set) {
  const double n = v.norm();
  if (set == Feasible::Ball) return n > 1.0 ? Eigen::Vector3d(v / n) : v;
  return n > 0.0 ? Eigen::Vector3d(v / n) : Eigen::Vector3d::UnitZ();
}

double stationarity(const Eigen::Vector3d &x, const Eigen::Vector3d &g, Feasible set) {
  if (set == Feasible::Ball) return (x - project(x + g, Feasible::Ball)).norm();
  return (g - g.dot(x) * x).norm();
}

struct AscentRun {
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  double value = -std::numeric_limits<double>::infinity();
  int iterations = 0;
  double stationarity = std::numeric_limits<double>::infinity();
  bool converged = false;
};

// FISTA-style accelerated projected gradient ascent with backtracking. The
// momentum is reset by the gradient criterion (step direction opposing the
// previous displacement), which stays reliable once objective differences
// fall below rounding.
AscentRun accelerated_ascent(const Probabilities4 &freq, const OutcomeModel &model, const Eigen::Vector3d &start,
                             Feasible set, const MleOptions &options) {
  AscentRun run;
  Eigen::Vector3d x = project(start, set);
  Eigen::Vector3d gx;
  double fx = model.log_likelihood(freq, x, &gx);
  if (!std::isfinite(gx.squaredNorm()) || gx.norm() > kMaxStartGradient) {
    // An observed outcome is (numerically) impossible here; this start cannot win.
    run.x = x;
    return run;
  }
  Eigen::Vector3d y = x;
  double momentum = 1.0;
  double step = 1.0;

  int k = 0;
  for (; k < options.max_iterations; ++k) {
    const double crit = stationarity(x, gx, set);
    if (crit < options.gradient_tol) {
      run.converged = true;
      run.stationarity = crit;
      break;
    }
    Eigen::Vector3d gy;
    const double fy = model.log_likelihood(freq, y, &gy);
    const double slack = 1e-14 * std::max(1.0, std::abs(fy));

    Eigen::Vector3d xn, gn;
    double fn = 0.0;
    for (int ls = 0; ls < 80; ++ls) {
      xn = project(y + step * gy, set);
      fn = model.log_likelihood(freq, xn, &gn);
      const Eigen::Vector3d d = xn - y;
      if (fn >= fy + gy.dot(d) - d.squaredNorm() / (2.0 * step) - slack) break;
      step *= 0.5;
    }

    if (fn < fx - slack && y != x) {
      // Momentum overshot: retry from x without extrapolation.
      y = x;
      momentum = 1.0;
      continue;
    }

    double next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    if ((xn - y).dot(xn - x) < 0.0) next = 1.0;
    const double beta = next > 1.0 ? (momentum - 1.0) / next : 0.0;
    y = project(xn + beta * (xn - x), set);
    x = xn;
    fx = fn;
    gx = gn;
    momentum = next;
    step = std::min(step * 1.25, 1e6);
  }
  run.x = x;
  run.value = fx;
  run.iterations = k;
  if (!run.converged) run.stationarity = stationarity(x, gx, set);
  return run;
}

}  // namespace

OutcomeCounts sample_outcomes(const PureQubit &state, std::uint64_t pairs, const DeviceModel &device,
                              const TetrahedronFrame &frame, Rng &rng) {
  if (pairs < 1) throw DomainError("at least one pair must be sampled");
  const Probabilities4 p =
      strategy_outcome_probs(StrategyKind::Collective, device, build_mp_basis(frame), state);
  OutcomeCounts out;
  for (std::uint64_t k = 0; k < pairs; ++k) ++out.counts[draw_outcome(p, rng.uniform())];
  return out;
}

std::vector<Eigen::Vector3d> default_mle_starts(const TetrahedronFrame &frame) {
  std::vector<Eigen::Vector3d> starts;
  for (const BlochVector &b : frame.bloch) starts.push_back(b.as_eigen());
  starts.push_back(Eigen::Vector3d::UnitZ());
  starts.push_back(-Eigen::Vector3d::UnitZ());
  return starts;
}

MleResult mle_reconstruct_detailed(const Probabilities4 &weights, const OutcomeModel &model,
                                   const std::vector<Eigen::Vector3d> &starts, const MleOptions &options) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("outcome counts must be finite and nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw DomainError("all outcome counts are zero");
  if (starts.empty()) throw DomainError("at least one start point is required");
  Probabilities4 freq;
  for (int i = 0; i < 4; ++i) freq[i] = weights[i] / total;

  AscentRun best;
  AscentRun best_any;
  int total_iterations = 0;
  for (const Eigen::Vector3d &start : starts) {
    const AscentRun relaxed = accelerated_ascent(freq, model, 0.5 * start, Feasible::Ball, options);
    const Eigen::Vector3d warm = relaxed.x.norm() > 1e-8 ? relaxed.x : start;
    const AscentRun pure = accelerated_ascent(freq, model, warm, Feasible::Sphere, options);
    total_iterations += relaxed.iterations + pure.iterations;
    if (pure.value > best_any.value) best_any = pure;
    if (pure.converged && pure.value > best.value) best = pure;
  }
  if (!best.converged) {
    std::ostringstream diag;
    diag.precision(17);
    diag << "last_iterate=(" << best_any.x.x() << "," << best_any.x.y() << "," << best_any.x.z()
         << ") loglik=" << best_any.value << " stationarity=" << best_any.stationarity
         << " iterations=" << total_iterations;
    throw NumericError("maximum-likelihood reconstruction did not converge", diag.str());
  }
  MleResult result;
  result.bloch = best.x.normalized();
  result.state = PureQubit::from_bloch(BlochVector::from_eigen(result.bloch));
  result.log_likelihood = best.value;
  result.iterations = total_iterations;
  result.gradient_norm = best.stationarity;
  return result;
}

PureQubit mle_reconstruct(const Probabilities4 &weights, const TetrahedronFrame &frame, const DeviceModel &device) {
  const OutcomeModel model = OutcomeModel::build(StrategyKind::Collective, device, build_mp_basis(frame));
  return mle_reconstruct_detailed(weights, model, default_mle_starts(frame)).state;
}

PureQubit mle_reconstruct(const OutcomeCounts &counts, const TetrahedronFrame &frame, const DeviceModel &device) {
  return mle_reconstruct(counts.as_weights(), frame, device);
}

void TomographyConfig::validate() const {
  if (ensemble_sizes.empty()) throw DomainError("at least one ensemble size is required");
  if (repeats < 1) throw DomainError("repeats must be at least 1");
  std::uint64_t prev = 0;
  for (std::uint64_t n : ensemble_sizes) {
    if (n < 4 || n % 2 != 0) {
      throw DomainError("ensemble sizes must be even and at least 4, got " + std::to_string(n));
    }
    if (n <= prev) throw DomainError("ensemble sizes must be strictly ascending");
    prev = n;
  }
}

namespace {

struct CurveContext {
  const TomographyConfig &config;
  OutcomeModel model;
  Probabilities4 truth_probs;
  std::vector<Eigen::Vector3d> starts;
};

// Infidelities of one repeat, one per ensemble size.
std::vector<double> run_repeat(const CurveContext &ctx, std::uint32_t repeat) {
  const TomographyConfig &cfg = ctx.config;
  Rng rng = Rng::substream(cfg.seed, {static_cast<std::uint64_t>(StreamTag::kTomography), repeat});
  const std::uint64_t max_pairs = cfg.ensemble_sizes.back() / 2;

  std::vector<PureQubit> estimates;
  OutcomeCounts counts;
  std::uint64_t drawn = 0;
  for (std::uint64_t n_ens : cfg.ensemble_sizes) {
    const std::uint64_t pairs = n_ens / 2;
    for (; drawn < pairs && drawn < max_pairs; ++drawn) ++counts.counts[draw_outcome(ctx.truth_probs, rng.uniform())];
    estimates.push_back(mle_reconstruct_detailed(counts.as_weights(), ctx.model, ctx.starts).state);
  }

  const PureQubit &reference = cfg.reference == ReferenceMode::TrueState ? cfg.true_state : estimates.back();
  std::vector<double> out;
  for (const PureQubit &est : estimates) out.push_back(std::clamp(1.0 - fidelity_pure(est, reference), 0.0, 1.0));
  if (cfg.reference == ReferenceMode::LargestEnsemble) out.back() = 0.0;
  return out;
}

std::vector<InfidelityPoint> summarize(const TomographyConfig &cfg, const std::vector<std::vector<double>> &table) {
  std::vector<InfidelityPoint> points;
  const double r = static_cast<double>(cfg.repeats);
  for (std::size_t s = 0; s < cfg.ensemble_sizes.size(); ++s) {
    CompensatedSum sum, sum_sq;
    for (const auto &row : table) {
      sum.add(row[s]);
      sum_sq.add(row[s] * row[s]);
    }
    InfidelityPoint p;
    p.n_ens = cfg.ensemble_sizes[s];
    p.repeats = cfg.repeats;
    p.mean_infidelity = sum.value() / r;
    if (cfg.repeats > 1) {
      const double var = std::max(0.0, (sum_sq.value() - sum.value() * sum.value() / r) / (r - 1.0));
      p.standard_error = std::sqrt(var / r);
    }
    points.push_back(p);
  }
  return points;
}

CurveContext make_context(const TomographyConfig &config) {
  config.validate();
  const MPBasis basis = build_mp_basis(config.frame);
  return {config, OutcomeModel::build(StrategyKind::Collective, config.device, basis),
          strategy_outcome_probs(StrategyKind::Collective, config.device, basis, config.true_state),
          default_mle_starts(config.frame)};
}

}  // namespace

std::vector<InfidelityPoint> infidelity_curve_serial(const TomographyConfig &config) {
  const CurveContext ctx = make_context(config);
  std::vector<std::vector<double>> table;
  for (std::uint32_t r = 0; r < config.repeats; ++r) table.push_back(run_repeat(ctx, r));
  return summarize(config, table);
}

std::vector<InfidelityPoint> infidelity_curve(const TomographyConfig &config) {
  const CurveContext ctx = make_context(config);
  std::vector<std::vector<double>> table(config.repeats);
  std::exception_ptr failure;
  const auto repeats = static_cast<std::int64_t>(config.repeats);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t r = 0; r < repeats; ++r) {
    try {
      table[static_cast<std::size_t>(r)] = run_repeat(ctx, static_cast<std::uint32_t>(r));
    } catch (...) {
#pragma omp critical(collmeas_tomography_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return summarize(config, table);
}

}  // namespace collmeas
