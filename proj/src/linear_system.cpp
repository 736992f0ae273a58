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

#include "sparse_sched/linear_system.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "sparse_sched/error.hpp"

namespace sparse_sched {

LinearSystem::LinearSystem(Eigen::MatrixXd a, Eigen::MatrixXd b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() < 1 || a_.rows() != a_.cols()) {
    throw InvalidArgument("A must be square with n >= 1, got " +
                          std::to_string(a_.rows()) + "x" +
                          std::to_string(a_.cols()));
  }
  if (b_.rows() != a_.rows() || b_.cols() < 1) {
    throw InvalidArgument("B must be " + std::to_string(a_.rows()) +
                          "xm with m >= 1, got " + std::to_string(b_.rows()) +
                          "x" + std::to_string(b_.cols()));
  }
  if (!a_.allFinite() || !b_.allFinite()) {
    throw InvalidArgument("system matrices contain NaN or Inf");
  }
  auto powers = std::make_shared<std::vector<Eigen::MatrixXd>>();
  powers->reserve(a_.rows());
  powers->push_back(Eigen::MatrixXd::Identity(a_.rows(), a_.rows()));
  for (Eigen::Index k = 1; k < a_.rows(); ++k) {
    powers->push_back(a_ * powers->back());
  }
  powers_ = std::move(powers);
}

const Eigen::MatrixXd& LinearSystem::cached_power(int k) const {
  if (k < 0 || k >= n()) {
    throw InvalidArgument("cached powers cover 0 <= k < n, got " +
                          std::to_string(k));
  }
  return (*powers_)[k];
}

Eigen::MatrixXd LinearSystem::power(int k) const {
  if (k < 0) throw InvalidArgument("negative matrix power");
  if (k < n()) return (*powers_)[k];
  Eigen::MatrixXd p = powers_->back();
  for (int i = n() - 1; i < k; ++i) p = a_ * p;
  return p;
}

ActuatorSchedule::ActuatorSchedule(int sparsity,
                                   std::vector<std::vector<int>> steps)
    : sparsity_(sparsity), steps_(std::move(steps)) {
  if (sparsity_ < 0) throw InvalidArgument("negative sparsity");
  for (std::size_t k = 0; k < steps_.size(); ++k) {
    auto& step = steps_[k];
    std::sort(step.begin(), step.end());
    if (std::adjacent_find(step.begin(), step.end()) != step.end()) {
      throw InvalidArgument("duplicate actuator in step " + std::to_string(k));
    }
    if (!step.empty() && step.front() < 1) {
      throw InvalidArgument("actuator indices are 1-based; step " +
                            std::to_string(k) + " has " +
                            std::to_string(step.front()));
    }
    if (static_cast<int>(step.size()) > sparsity_) {
      throw InvalidArgument("step " + std::to_string(k) + " has " +
                            std::to_string(step.size()) +
                            " actuators, sparsity is " +
                            std::to_string(sparsity_));
    }
  }
}

ActuatorSchedule ActuatorSchedule::repeated(int sparsity,
                                            const std::vector<int>& support,
                                            int horizon) {
  return ActuatorSchedule(
      sparsity, std::vector<std::vector<int>>(std::max(horizon, 0), support));
}

ActuatorSchedule ActuatorSchedule::full(int m, int horizon) {
  std::vector<int> all(m);
  std::iota(all.begin(), all.end(), 1);
  return repeated(m, all, horizon);
}

int ActuatorSchedule::total_columns() const {
  int total = 0;
  for (const auto& step : steps_) total += static_cast<int>(step.size());
  return total;
}

void ActuatorSchedule::validate_for(int m) const {
  for (std::size_t k = 0; k < steps_.size(); ++k) {
    if (!steps_[k].empty() && steps_[k].back() > m) {
      throw InvalidArgument("step " + std::to_string(k) + " uses actuator " +
                            std::to_string(steps_[k].back()) + " but m = " +
                            std::to_string(m));
    }
  }
}

}  // namespace sparse_sched
