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

// Random network systems and the three sparsity/energy experiments.
//
// Systems: an Erdos-Renyi graph on n vertices with edge probability
// p = 2 log(n) / n gives the transfer matrix A = I - L / n (L the graph
// Laplacian). B is the identity, i.i.d. uniform on [0, 1], or i.i.d.
// standard normal.
//
// Trial t of an experiment draws its graph from
// derive_seed(seed, kGraph, t) and its B from derive_seed(seed,
// kInputMatrix, t); trials run in parallel and rows are emitted in trial
// order, so output depends only on the configuration.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sparse_sched/greedy.hpp"
#include "sparse_sched/linear_system.hpp"

namespace sparse_sched {

enum class InputMode { kIdentity, kUniform01, kGaussian };

// Laplacian D - Adj of an undirected simple G(n, p) graph,
// p = 2 log_base(n) / n (natural log by default).
Eigen::MatrixXd erdos_renyi_laplacian(int n, std::uint64_t seed,
                                      double log_base = std::numbers::e);

// A = I - L / n.
Eigen::MatrixXd erdos_renyi_system(int n, std::uint64_t seed,
                                   double log_base = std::numbers::e);

// Throws InvalidArgument for identity mode with n != m.
Eigen::MatrixXd random_input_matrix(int n, int m, InputMode mode,
                                    std::uint64_t seed);

// Scheduler names used in configs and CSV output.
inline constexpr const char* kModeTimeVarying = "time-varying";
inline constexpr const char* kModeTimeInvariant = "time-invariant";
inline constexpr const char* kModeUnconstrained = "unconstrained";
inline constexpr const char* kModeRandom = "random";
inline constexpr const char* kModeTraceMax = "trace-max";

struct ExperimentConfig {
  int n = 20;
  int m = 20;
  // System sizes for the energy-ratio sweep; empty means {n}.
  std::vector<int> n_values;
  std::vector<int> sparsity_levels;
  int trials = 100;
  std::uint64_t seed = 0;
  // Unset: identity for the CDF experiment, uniform01 otherwise.
  std::optional<InputMode> b_mode;
  // Unset: each experiment's default set.
  std::vector<std::string> scheduler_modes;
  std::string output_path;
  double log_base = std::numbers::e;
  // Random schedules drawn per system in the baseline comparison.
  int random_draws = 10;
  // Greedy parameters (sparsity is set per level).
  double epsilon0 = 1.0;
  double decay = 10.0;
  int max_outer = 16;
};

// Throws InvalidArgument: trials >= 1, n, m >= 1, levels in [1, m],
// known scheduler names.
void validate(const ExperimentConfig& cfg);

struct CdfRow {
  int trial = 0;
  int s = 0;
  std::string mode;
  std::optional<double> value_db;  // 10 log10 trace(W_S^{-1}); empty if !rank_ok
  bool rank_ok = false;
};

// Rows ordered by trial, then sparsity level, then mode. Default modes:
// time-varying, time-invariant, unconstrained (s = m, every actuator active).
std::vector<CdfRow> run_cdf_experiment(const ExperimentConfig& cfg);

struct RatioRow {
  int n = 0;
  int s = 0;
  double s_over_m = 0.0;
  // mean trace(W_S^{-1}) / mean trace(W^{-1}) over trials where both are
  // full rank; empty if there are none.
  std::optional<double> rho;
  int rank_failures = 0;
};

// Time-varying greedy against full actuation, for every n in n_values and
// every sparsity level. Throws NumericalError if rho < 1 is observed.
std::vector<RatioRow> run_energy_ratio_experiment(const ExperimentConfig& cfg);

struct BaselineRow {
  int s = 0;
  std::string method;
  std::optional<double> mean_trace_inv;  // over full-rank outcomes
  double rank_failure_fraction = 0.0;
};

// Default methods: time-varying (the greedy), random, trace-max.
std::vector<BaselineRow> run_baseline_comparison(const ExperimentConfig& cfg);

// trace(W_S^{-1}) of a schedule, empty when W_S is rank deficient.
std::optional<double> schedule_energy(const LinearSystem& sys,
                                      const ActuatorSchedule& schedule);

}  // namespace sparse_sched
