// Copyright 2026 The sparse_sched Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded randomness. Every random draw in the library comes from a single
// 64-bit master seed: derive_seed(master, stream, index) hashes the triple
// with SplitMix64 into an independent seed for one (purpose, trial) pair.
// Results therefore do not depend on how trials are spread over threads.
//
// Uniform and Gaussian variates are produced from raw mt19937_64 output with
// fixed formulas (not std:: distributions, whose algorithms vary between
// standard libraries), so a given seed yields the same numbers everywhere.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace sparse_sched {

// Purposes for derive_seed(); values are part of the reproducibility contract.
enum class SeedStream : std::uint64_t {
  kGraph = 1,
  kInputMatrix = 2,
  kRandomSchedule = 3,
  kSupermodularity = 4,
  kMatroid = 5,
  kSynthesis = 6,
  kGeneric = 7,
};

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t master, SeedStream stream,
                          std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform01();
  // Uniform integer in [lo, hi], unbiased (rejection sampling).
  int uniform_int(int lo, int hi);
  // Standard normal (Box-Muller, no caching of the second variate).
  double normal();
  // `count` distinct values from {lo, ..., hi}, in draw order.
  std::vector<int> sample_without_replacement(int lo, int hi, int count);

 private:
  std::mt19937_64 engine_;
};

}  // namespace sparse_sched
