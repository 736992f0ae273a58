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

// Independent checks for the scheduler: exhaustive search for the optimal
// schedule, the alpha-supermodularity and matroid properties of the
// problem, the additive near-optimality bound of the inner greedy loop, and
// the epsilon threshold below which a greedy pick must raise the rank.
//
// These routines use plain Eigen factorizations rather than the SIMD
// kernels and incremental inverses of the scheduler, so they can serve as
// oracles for it.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "sparse_sched/gramian.hpp"
#include "sparse_sched/greedy.hpp"
#include "sparse_sched/linear_system.hpp"

namespace sparse_sched {

struct BruteForceOptions {
  // Also enumerate steps with fewer than s actuators (|S_k| <= s instead of
  // |S_k| == s).
  bool include_smaller_subsets = false;
  std::uint64_t max_enumeration = 1'000'000;
};

struct BruteForceResult {
  ActuatorSchedule schedule;
  double value = 0.0;  // trace((W + eps I)^{-1}), or trace(W^{-1}) at eps = 0
  std::uint64_t enumerated = 0;
};

// Number of schedules the search would visit (saturates at uint64 max).
std::uint64_t brute_force_enumeration_size(int m, int s, int horizon,
                                           bool include_smaller_subsets);

// Exhaustive minimizer over schedules of the given horizon. With eps = 0
// only full-rank Gramians qualify. Ties keep the first schedule in
// lexicographic enumeration order.
// Throws InvalidArgument when the enumeration exceeds max_enumeration and
// Infeasible when eps = 0 and no schedule has full rank.
BruteForceResult brute_force_optimal_schedule(
    const LinearSystem& sys, int s, double epsilon, int horizon,
    const BruteForceOptions& options = {});

// On-disk memo for brute_force_optimal_schedule keyed by a hash of
// (A, B, s, eps, K, options). One JSON file per key.
class BruteForceCache {
 public:
  explicit BruteForceCache(std::filesystem::path dir);

  BruteForceResult get_or_compute(const LinearSystem& sys, int s,
                                  double epsilon, int horizon,
                                  const BruteForceOptions& options = {});
  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }

  static std::uint64_t key(const LinearSystem& sys, int s, double epsilon,
                           int horizon, const BruteForceOptions& options);

 private:
  std::filesystem::path dir_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

// eps / lambda_max(eps I + W), W the fully actuated Gramian.
double alpha_lower_bound(const LinearSystem& sys, double epsilon);

struct SupermodularityReport {
  int trials = 0;
  int evaluated = 0;  // trials with a positive denominator
  double min_ratio = std::numeric_limits<double>::infinity();
  double alpha_bound = 0.0;
  int violations = 0;  // ratio < alpha_bound - 1e-9
};

// Samples chains A subset B subset V and e not in B (any subsets of V, not
// only feasible ones) and checks
//   E(A) - E(A + e) >= alpha * (E(B) - E(B + e)),   E(T) = trace((W_T + eps I)^{-1}).
// Set sizes are uniform, then the sets are uniform given their size.
SupermodularityReport check_supermodularity(const LinearSystem& sys,
                                            double epsilon, int trials,
                                            std::uint64_t seed);

struct MatroidReport {
  bool ok = true;
  bool exhaustive = false;
  std::uint64_t checks = 0;
  std::string counterexample;  // empty when ok
};

// Independence oracle over subsets of a universe of at most 64 elements,
// encoded as bitmasks.
using IndependenceOracle = std::function<bool(std::uint64_t)>;

// Checks the three matroid axioms: the empty set is independent, subsets of
// independent sets are independent, and the exchange property. Exhaustive
// enumerates every pair of sets (universe_size <= 16); otherwise `trials`
// random independent sets / pairs are sampled.
MatroidReport check_matroid_axioms(int universe_size,
                                   const IndependenceOracle& independent,
                                   int trials, std::uint64_t seed,
                                   bool exhaustive);

// The per-step cap family {T subset V : |{j : (k, j) in T}| <= s for all k},
// element (k, j) encoded as bit k * m + (j - 1).
IndependenceOracle per_step_cap_oracle(int n, int m, int s);

// Universes above 63 elements are sampled with a membership-vector
// representation (exhaustive mode is unavailable there).
MatroidReport check_matroid_exchange(int n, int m, int s, int trials,
                                     std::uint64_t seed,
                                     bool exhaustive = false);

// [1 - beta] n / eps + beta E*, beta = min(alpha / 2, alpha / (1 + alpha)).
double greedy_additive_bound(int n, double alpha, double epsilon,
                             double e_star);
double greedy_additive_bound(const LinearSystem& sys, double epsilon,
                             double e_star);

struct AdditiveBoundCheck {
  double epsilon = 0.0;
  double alpha = 0.0;
  double e_star = 0.0;       // optimal trace(W^{-1}) at eps = 0
  double greedy_value = 0.0;  // inner-loop trace((W_S + eps I)^{-1})
  double bound = 0.0;
  bool holds = false;  // greedy_value < bound
};

// Runs the exhaustive search at eps = 0 (horizon n) and one inner greedy
// loop at eps. Propagates Infeasible / InvalidArgument from the search.
AdditiveBoundCheck check_additive_bound(const LinearSystem& sys, int s,
                                        double epsilon,
                                        const BruteForceOptions& options = {});

// Upper limit on eps under which a rank-increasing pick beats a
// rank-preserving one: lambda1 * lambda_hat / (R lambda1 - (R+1) lambda_hat),
// or +inf when the denominator is <= 0. Throws InvalidArgument for
// non-positive eigenvalues or R < 0.
double rank_progress_epsilon_threshold(double lambda1_tilde,
                                       double lambda_hat_r1, int r);

struct RankProgressAnalysis {
  int rank = 0;  // R, rank of the current Gramian
  bool has_rank_increasing = false;
  bool has_rank_preserving = false;
  // max lambda_1 over rank-preserving candidates' Gramians.
  double lambda1_tilde = 0.0;
  // min lambda_{R+1} over rank-increasing candidates' Gramians.
  double lambda_hat = 0.0;
  double threshold = 0.0;  // +inf when any eps works
};

// Classifies the engine's feasible candidates by whether adding them raises
// the numerical rank, and evaluates the worst-case threshold.
RankProgressAnalysis analyze_rank_progress(const GreedyEngine& engine,
                                           double rank_tol = kDefaultRankTol);

struct RankProgressRunReport {
  int picks = 0;
  int applicable = 0;  // picks where eps < threshold and a raise was possible
  int violations = 0;  // applicable picks that did not raise the rank
};

// Runs one inner loop at eps and checks every pick against
// analyze_rank_progress.
RankProgressRunReport check_rank_progress_along_run(
    const LinearSystem& sys, int s, double epsilon,
    double rank_tol = kDefaultRankTol);

}  // namespace sparse_sched
