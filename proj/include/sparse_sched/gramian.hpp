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

// Controllability matrix and Gramian of a scheduled system, plus the rank
// and feasibility tests that decide whether a sparse schedule can exist.
//
// Index convention (used everywhere in this library): for a schedule of
// horizon K, the actuators active at time step t enter the Gramian through
// A^{K-1-t}. With K = n this is
//
//   W_S = sum_{t=0}^{n-1} A^{n-1-t} B_{S_t} B_{S_t}^T (A^{n-1-t})^T.

#pragma once

#include <Eigen/Dense>

#include <optional>

#include "sparse_sched/linear_system.hpp"

namespace sparse_sched {

inline constexpr double kDefaultRankTol = 1e-10;

// Singular values above tol * sigma_max * max(rows, cols) are counted.
// The zero (or empty) matrix has rank 0.
int numerical_rank(const Eigen::MatrixXd& m, double tol = kDefaultRankTol);

// [A^{K-1} B_{S_0} | A^{K-2} B_{S_1} | ... | B_{S_{K-1}}], blocks ordered by
// time step, columns inside a block by ascending actuator index.
Eigen::MatrixXd controllability_matrix(const LinearSystem& sys,
                                       const ActuatorSchedule& schedule);

// The scheduled Gramian W_S, symmetrized.
Eigen::MatrixXd schedule_gramian(const LinearSystem& sys,
                                 const ActuatorSchedule& schedule);

// Gramian of the fully actuated system over n steps (every actuator at
// every step).
Eigen::MatrixXd fully_actuated_gramian(const LinearSystem& sys);

struct GramianState {
  Eigen::MatrixXd gramian;  // W
  double epsilon = 0.0;
  // (W + eps I)^{-1} and its trace; empty when epsilon == 0.
  std::optional<Eigen::MatrixXd> shifted_inverse;
  std::optional<double> trace_inv;
  int rank = 0;
};

// Builds the state for a given W. epsilon == 0 leaves the inverse fields
// empty; epsilon < 0 throws.
GramianState make_gramian_state(Eigen::MatrixXd w, double epsilon,
                                double rank_tol = kDefaultRankTol);

GramianState gramian(const LinearSystem& sys, const ActuatorSchedule& schedule,
                     double epsilon, double rank_tol = kDefaultRankTol);

// (W + eps I)^{-1} through a Cholesky factorization, symmetrized.
Eigen::MatrixXd shifted_inverse(const Eigen::MatrixXd& w, double epsilon);

// trace((W + eps I)^{-1}). Throws InvalidArgument for eps <= 0.
double epsilon_auxiliary_energy(const GramianState& state);
double epsilon_auxiliary_energy(const Eigen::MatrixXd& w, double epsilon);

// trace(W^{-1}) when W has full numerical rank, nullopt otherwise.
std::optional<double> inverse_trace(const Eigen::MatrixXd& w,
                                    double rank_tol = kDefaultRankTol);

// Degree of the minimal polynomial: smallest q with I, A, ..., A^q linearly
// dependent (vectorized, numerical rank at tol).
int minimal_polynomial_degree(const Eigen::MatrixXd& a,
                              double tol = kDefaultRankTol);

struct ControllabilityReport {
  bool sparse_controllable = false;
  int controllability_rank = 0;  // rank [B, AB, ..., A^{n-1}B]
  int rank_a = 0;
  int n = 0;
  int sparsity = 0;
};

// True iff rank [B, AB, ..., A^{n-1} B] = n and s >= n - rank(A).
// Throws InvalidArgument unless 1 <= s <= m.
ControllabilityReport is_sparse_controllable(const LinearSystem& sys, int s,
                                             double tol = kDefaultRankTol);

struct HorizonBounds {
  int lower = 0;  // ceil(n / s)
  int upper = 0;  // min(q * ceil(rank(B) / s), n - s + 1)
};

// Throws Infeasible when the system is not s-sparse controllable.
HorizonBounds horizon_bounds(const LinearSystem& sys, int s,
                             double tol = kDefaultRankTol);

}  // namespace sparse_sched
