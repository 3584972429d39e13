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

#include <cstdint>
#include <initializer_list>
#include <random>

namespace collmeas {

std::uint64_t splitmix64(std::uint64_t x);

/// Seed derivation used everywhere a random stream is needed.
///
/// A master seed is folded with a list of integer labels through splitmix64:
///   s0 = splitmix64(master), s_{k+1} = splitmix64(s_k ^ (label_k + 0x9E3779B97F4A7C15 * (k + 1))).
/// Commands derive a per-command stream with one label (the command tag) and
/// per-task substreams by appending the task index, so any task can be
/// re-created without replaying the others.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> labels);

/// Command tags for the first derivation level.
enum class StreamTag : std::uint64_t {
  kGame = 0x67616d65,
  kTomography = 0x746f6d6f,
  kImperfection = 0x696d7066,
  kTest = 0x74657374,
};

/// A single, unshared random stream (mt19937_64 engine).
///
/// Uniform doubles are built from the top 53 bits of the engine output so the
/// sequence is identical on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng substream(std::uint64_t master, std::initializer_list<std::uint64_t> labels) {
    return Rng(derive_seed(master, labels));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform index on [0, n) by rejection, n > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace collmeas
