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

// Minimum-energy inputs for a fixed actuator schedule, and forward
// simulation of x(k+1) = A x(k) + B u(k).

#pragma once

#include <Eigen/Dense>

#include <vector>

#include "sparse_sched/gramian.hpp"
#include "sparse_sched/linear_system.hpp"

namespace sparse_sched {

struct InputSequence {
  std::vector<Eigen::VectorXd> inputs;  // K vectors of length m
  ActuatorSchedule support;
};

struct Trajectory {
  std::vector<Eigen::VectorXd> states;  // K + 1 vectors of length n
};

// Least-norm stacked input z with C z = d, d = xf - A^K x0:
//   z = C^T W_S^{-1} d, solved through a Cholesky factorization of W_S.
// Entries outside each step's support are exact zeros.
// Throws UnreachableTarget (carrying ||C z_ls - d|| for the minimum-norm
// least-squares z_ls) when W_S is rank deficient.
InputSequence min_energy_inputs(const LinearSystem& sys,
                                const ActuatorSchedule& schedule,
                                const Eigen::VectorXd& x0,
                                const Eigen::VectorXd& xf,
                                double rank_tol = kDefaultRankTol);

Trajectory simulate(const LinearSystem& sys, const InputSequence& inputs,
                    const Eigen::VectorXd& x0);

// sum_k ||u(k)||^2
double control_energy(const InputSequence& inputs);

}  // namespace sparse_sched
