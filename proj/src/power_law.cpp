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

#include <cmath>

#include "collmeas/errors.hpp"
#include "collmeas/tomography.hpp"

namespace collmeas {

ScalingFit fit_power_law(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw DomainError("a power-law fit needs at least 3 points");
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto &[x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) throw DomainError("power-law fit points must be positive");
    mx += std::log(x);
    my += std::log(y);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto &[x, y] : points) {
    const double dx = std::log(x) - mx;
    const double dy = std::log(y) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw DomainError("power-law fit needs at least two distinct N values");

  ScalingFit fit;
  fit.b = sxy / sxx;
  const double log_a = my - fit.b * mx;
  fit.a = std::exp(log_a);
  double ssr = 0.0;
  for (const auto &[x, y] : points) {
    const double r = std::log(y) - (log_a + fit.b * std::log(x));
    ssr += r * r;
  }
  const double s2 = ssr / (n - 2.0);
  fit.stderr_b = std::sqrt(s2 / sxx);
  // Delta method on a = exp(log a).
  fit.stderr_a = fit.a * std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  return fit;
}

double gill_massar_reference(std::uint64_t n_ens) {
  if (n_ens < 1) throw DomainError("ensemble size must be at least 1");
  return 1.0 / static_cast<double>(n_ens);
}

}  // namespace collmeas
