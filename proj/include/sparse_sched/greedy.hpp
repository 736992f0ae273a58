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

// Greedy actuator scheduling on the epsilon-regularized energy
// trace((W_S + eps I)^{-1}).
//
// The schedule is encoded as a subset T of V = {(k, j) : k in [0, n),
// j in [1, m]}; (k, j) in T means actuator j is active at time step k. The
// per-step cap |{j : (k, j) in T}| <= s is a partition matroid on V.
//
// The inner loop starts from T = {} and repeatedly adds the feasible pair
// with the largest decrease of the objective, maintaining (W + eps I)^{-1}
// by Sherman-Morrison updates, until every step is saturated. The outer
// loop shrinks eps by a constant factor until the resulting Gramian has
// full rank.

#pragma once

#include <Eigen/Dense>

#include <compare>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sparse_sched/gramian.hpp"
#include "sparse_sched/kernels.hpp"
#include "sparse_sched/linear_system.hpp"

namespace sparse_sched {

// (time step k, 1-based actuator j). Ordered lexicographically.
struct IndexPair {
  int step = 0;
  int actuator = 0;

  friend auto operator<=>(const IndexPair&, const IndexPair&) = default;
};

using SelectionSet = std::set<IndexPair>;

// steps[k] = {j : (k, j) in T}. `sparsity` 0 means "largest step size".
// Throws InvalidArgument for a step outside [0, horizon), an actuator < 1,
// or a step exceeding a positive `sparsity`.
ActuatorSchedule schedule_from_selection(const SelectionSet& selection,
                                         int horizon, int sparsity = 0);

SelectionSet selection_from_schedule(const ActuatorSchedule& schedule);

// Pairs (k, j) not in T whose addition keeps every step within s, in
// lexicographic order.
std::vector<IndexPair> feasible_candidates(const SelectionSet& selection,
                                           int n, int m, int s);

// Decrease of trace((W + eps I)^{-1}) when v v^T is added to W. Uses the
// state's shifted inverse M: (v^T M^2 v) / (1 + v^T M v).
double candidate_gain(const GramianState& state, const Eigen::VectorXd& v);

enum class ScheduleMode { kTimeVarying, kTimeInvariant };

struct GreedyConfig {
  int sparsity = 1;
  double epsilon0 = 1.0;
  double decay = 10.0;  // eps_{t+1} = eps_t / decay
  int max_outer = 16;
  double rank_tol = kDefaultRankTol;
  ScheduleMode mode = ScheduleMode::kTimeVarying;
  // Stop an inner loop once W has full rank and the best gain is below
  // 1e-12. Off by default: the inner loop fills every feasible slot.
  bool stop_at_full_rank = false;
};

// Throws InvalidArgument unless eps0 > 0, decay > 1, 1 <= s <= m,
// max_outer >= 1 and rank_tol > 0.
void validate(const GreedyConfig& cfg, int m);

// Candidate vectors v_{k,j} = A^{n-1-k} b_j for every (k, j) in V, stored as
// the columns of an n x (n m) matrix in lexicographic (k, j) order.
class CandidateVectors {
 public:
  explicit CandidateVectors(const LinearSystem& sys);

  int n() const { return n_; }
  int m() const { return m_; }
  int index(IndexPair p) const { return p.step * m_ + (p.actuator - 1); }
  IndexPair pair(int index) const { return {index / m_, index % m_ + 1}; }
  const double* data(int index) const { return vectors_.col(index).data(); }
  Eigen::VectorXd vector(IndexPair p) const { return vectors_.col(index(p)); }
  const Eigen::MatrixXd& matrix() const { return vectors_; }

 private:
  int n_;
  int m_;
  Eigen::MatrixXd vectors_;
};

// One inner loop of the time-varying greedy at a fixed eps. Exposed as a
// stepper so callers (tests, oracles) can seed a prefix with add() and watch
// individual picks.
class GreedyEngine {
 public:
  GreedyEngine(const CandidateVectors& candidates, int sparsity,
               double epsilon,
               const kernels::KernelSet& ks = kernels::kernels());

  // No feasible candidate left.
  bool done() const { return remaining_ == 0; }

  // Adds the best feasible pair (ties: smallest (k, j) among gains within
  // 1e-12 of the best) and returns it; nullopt when done().
  std::optional<IndexPair> pick_next();

  // Adds a specific feasible pair. Throws InvalidArgument otherwise.
  void add(IndexPair p);

  bool is_feasible(IndexPair p) const;
  std::vector<IndexPair> candidates() const;
  double gain(IndexPair p) const;

  const SelectionSet& selection() const { return selection_; }
  const CandidateVectors& candidate_vectors() const { return cand_; }
  int sparsity() const { return sparsity_; }
  const Eigen::MatrixXd& gramian() const { return w_; }
  const Eigen::MatrixXd& shifted_inverse() const { return m_; }
  double epsilon() const { return epsilon_; }
  double objective() const { return m_.trace(); }
  int picks() const { return static_cast<int>(selection_.size()); }
  // Full recomputations forced by a non-positive Sherman-Morrison
  // denominator.
  int recomputations() const { return recomputations_; }

  GramianState state(double rank_tol = kDefaultRankTol) const;

 private:
  void apply(int index);

  const CandidateVectors& cand_;
  const kernels::KernelSet& ks_;
  int sparsity_;
  double epsilon_;
  Eigen::MatrixXd w_;
  Eigen::MatrixXd m_;
  std::vector<char> taken_;
  std::vector<int> step_count_;
  int remaining_;
  SelectionSet selection_;
  Eigen::VectorXd scratch_;
  mutable Eigen::VectorXd gain_scratch_;
  int recomputations_ = 0;
};

struct InnerResult {
  SelectionSet selection;
  GramianState state;
  std::vector<double> trace_history;  // objective after each pick
};

using PickObserver = std::function<void(const GreedyEngine&)>;

InnerResult greedy_inner(const LinearSystem& sys, const GreedyConfig& cfg,
                         double epsilon);

struct GreedyDiagnostics {
  int outer_iterations = 0;
  double final_epsilon = 0.0;
  int final_rank = 0;
  std::vector<int> rank_history;  // rank after each outer iteration
  // Objective after each pick, one list per outer iteration.
  std::vector<std::vector<double>> trace_history;
  std::vector<std::string> warnings;
};

struct GreedyResult {
  // On success the full-rank schedule; otherwise the highest-rank schedule
  // seen (latest on ties).
  ActuatorSchedule schedule;
  GreedyDiagnostics diagnostics;
  bool full_rank = false;
};

// Outer loop with eps_t = eps0 / decay^t until rank W_S = n or max_outer
// iterations. Dispatches on cfg.mode. Rank failure is reported through
// GreedyResult::full_rank, not an exception.
GreedyResult greedy_schedule(const LinearSystem& sys, const GreedyConfig& cfg,
                             const PickObserver& observer = {});

// Fixed support: the universe is {1..m}; choosing j adds all n vectors
// A^{n-1-k} b_j at once. The schedule repeats S_0 at every step.
GreedyResult greedy_schedule_time_invariant(const LinearSystem& sys,
                                            const GreedyConfig& cfg);

}  // namespace sparse_sched
