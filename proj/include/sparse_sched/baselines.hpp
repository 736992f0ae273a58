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

// Reference schedulers under the same per-step cap |S_k| <= s:
//  - uniform random supports, drawn without replacement per step;
//  - a deterministic greedy that maximizes trace(W_S), which is modular in
//    the selected pairs and so reduces to picking the s largest ||A^p b_j||
//    at every step.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sparse_sched/linear_system.hpp"

namespace sparse_sched {

// Horizon n; each step gets s distinct actuators uniformly at random.
// Throws InvalidArgument unless 1 <= s <= m.
ActuatorSchedule random_schedule(const LinearSystem& sys, int s,
                                 std::uint64_t seed);

// Greedy on the additive gain ||v_{k,j}||^2 over V with the per-step cap;
// ties go to the smallest (k, j).
ActuatorSchedule greedy_trace_max_schedule(const LinearSystem& sys, int s);

struct EnsembleRow {
  int trial = 0;
  int rank = 0;
  std::optional<double> trace_inv;  // trace(W_S^{-1}) when full rank
};

struct EnsembleSummary {
  int trials = 0;
  int rank_deficient = 0;
  // Statistics over full-rank draws only; empty when there are none.
  std::optional<double> mean;
  std::optional<double> median;
  std::optional<double> min;
  std::optional<double> variance;
  std::vector<EnsembleRow> rows;

  bool all_rank_deficient() const { return rank_deficient == trials; }
};

// random_schedule with seeds seed + 0, ..., seed + trials - 1.
EnsembleSummary random_schedule_ensemble_energy(const LinearSystem& sys, int s,
                                                int trials, std::uint64_t seed);

}  // namespace sparse_sched
