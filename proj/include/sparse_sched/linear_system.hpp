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

#pragma once

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace sparse_sched {

// Discrete-time plant x(k+1) = A x(k) + B u(k).
//
// Immutable after construction. Powers A^0 .. A^{n-1} are computed once and
// shared between copies, so a LinearSystem is cheap to pass by value and safe
// to read from several threads.
class LinearSystem {
 public:
  // Throws InvalidArgument unless A is n x n, B is n x m with n, m >= 1 and
  // every entry is finite.
  LinearSystem(Eigen::MatrixXd a, Eigen::MatrixXd b);

  int n() const { return static_cast<int>(a_.rows()); }
  int m() const { return static_cast<int>(b_.cols()); }
  const Eigen::MatrixXd& a() const { return a_; }
  const Eigen::MatrixXd& b() const { return b_; }

  // A^k for 0 <= k < n from the cache; larger k is computed on demand.
  Eigen::MatrixXd power(int k) const;
  const Eigen::MatrixXd& cached_power(int k) const;

 private:
  Eigen::MatrixXd a_;
  Eigen::MatrixXd b_;
  std::shared_ptr<const std::vector<Eigen::MatrixXd>> powers_;
};

// Sequence of actuator index sets (S_0, ..., S_{K-1}) with |S_k| <= sparsity.
//
// Actuator indices are 1-based, as in the on-disk schedule format. Each step
// is kept sorted ascending; the constructor rejects duplicates, indices < 1,
// and steps larger than `sparsity`. Range against m is checked by
// validate_for() once the system is known.
class ActuatorSchedule {
 public:
  ActuatorSchedule() = default;
  ActuatorSchedule(int sparsity, std::vector<std::vector<int>> steps);

  // K copies of `support` (the fixed-support schedule).
  static ActuatorSchedule repeated(int sparsity, const std::vector<int>& support,
                                   int horizon);
  // Every actuator at every step.
  static ActuatorSchedule full(int m, int horizon);

  int sparsity() const { return sparsity_; }
  int horizon() const { return static_cast<int>(steps_.size()); }
  const std::vector<std::vector<int>>& steps() const { return steps_; }
  const std::vector<int>& step(int k) const { return steps_.at(k); }
  int total_columns() const;

  // Throws InvalidArgument if any index exceeds m.
  void validate_for(int m) const;

  friend bool operator==(const ActuatorSchedule&,
                         const ActuatorSchedule&) = default;

 private:
  int sparsity_ = 0;
  std::vector<std::vector<int>> steps_;
};

}  // namespace sparse_sched
