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

#include "sparse_sched/baselines.hpp"

#include <algorithm>
#include <string>

#include "sparse_sched/error.hpp"
#include "sparse_sched/gramian.hpp"
#include "sparse_sched/greedy.hpp"
#include "sparse_sched/random.hpp"

namespace sparse_sched {
namespace {

void check_sparsity(const LinearSystem& sys, int s) {
  if (s < 1 || s > sys.m()) {
    throw InvalidArgument("sparsity must satisfy 1 <= s <= m = " +
                          std::to_string(sys.m()) + ", got " +
                          std::to_string(s));
  }
}

}  // namespace

ActuatorSchedule random_schedule(const LinearSystem& sys, int s,
                                 std::uint64_t seed) {
  check_sparsity(sys, s);
  Rng rng(derive_seed(seed, SeedStream::kRandomSchedule, 0));
  std::vector<std::vector<int>> steps(sys.n());
  for (auto& step : steps) {
    step = rng.sample_without_replacement(1, sys.m(), s);
    // Sorted like every other schedule so s = m sums in the same order.
    std::sort(step.begin(), step.end());
  }
  return ActuatorSchedule(s, std::move(steps));
}

ActuatorSchedule greedy_trace_max_schedule(const LinearSystem& sys, int s) {
  check_sparsity(sys, s);
  const CandidateVectors cand(sys);
  const int total = sys.n() * sys.m();
  std::vector<double> gain(total);
  for (int i = 0; i < total; ++i) gain[i] = cand.matrix().col(i).squaredNorm();

  SelectionSet selection;
  std::vector<int> counts(sys.n(), 0);
  std::vector<char> taken(total, 0);
  for (int pick = 0; pick < sys.n() * s; ++pick) {
    int best = -1;
    for (int i = 0; i < total; ++i) {
      if (taken[i] || counts[i / sys.m()] >= s) continue;
      if (best < 0 || gain[i] > gain[best]) best = i;
    }
    if (best < 0) break;
    taken[best] = 1;
    ++counts[best / sys.m()];
    selection.insert(cand.pair(best));
  }
  return schedule_from_selection(selection, sys.n(), s);
}

EnsembleSummary random_schedule_ensemble_energy(const LinearSystem& sys, int s,
                                                int trials,
                                                std::uint64_t seed) {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  EnsembleSummary summary;
  summary.trials = trials;
  std::vector<double> values;
  for (int t = 0; t < trials; ++t) {
    const ActuatorSchedule schedule =
        random_schedule(sys, s, seed + static_cast<std::uint64_t>(t));
    const Eigen::MatrixXd w = schedule_gramian(sys, schedule);
    EnsembleRow row;
    row.trial = t;
    row.rank = numerical_rank(w);
    if (row.rank == sys.n()) row.trace_inv = inverse_trace(w);
    if (row.trace_inv) {
      values.push_back(*row.trace_inv);
    } else {
      ++summary.rank_deficient;
    }
    summary.rows.push_back(row);
  }
  if (!values.empty()) {
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    summary.mean = mean;
    summary.variance = sq / static_cast<double>(values.size());
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    summary.median = sorted.size() % 2 == 1
                         ? sorted[mid]
                         : 0.5 * (sorted[mid - 1] + sorted[mid]);
    summary.min = sorted.front();
  }
  return summary;
}

}  // namespace sparse_sched
