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

#include "sparse_sched/synthesis.hpp"

#include <string>

#include "sparse_sched/error.hpp"

namespace sparse_sched {

InputSequence min_energy_inputs(const LinearSystem& sys,
                                const ActuatorSchedule& schedule,
                                const Eigen::VectorXd& x0,
                                const Eigen::VectorXd& xf, double rank_tol) {
  if (x0.size() != sys.n() || xf.size() != sys.n()) {
    throw InvalidArgument("x0 and xf must have length n = " +
                          std::to_string(sys.n()));
  }
  if (!x0.allFinite() || !xf.allFinite()) {
    throw InvalidArgument("x0 and xf must be finite");
  }
  const Eigen::MatrixXd c = controllability_matrix(sys, schedule);
  const Eigen::VectorXd d = xf - sys.power(schedule.horizon()) * x0;
  const Eigen::MatrixXd w = schedule_gramian(sys, schedule);

  Eigen::VectorXd z;
  Eigen::LLT<Eigen::MatrixXd> llt;
  const bool full_rank = numerical_rank(w, rank_tol) == sys.n() &&
                         llt.compute(w).info() == Eigen::Success;
  if (!full_rank) {
    double residual = d.norm();
    if (c.cols() > 0) {
      const Eigen::VectorXd z_ls =
          Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(c).solve(d);
      residual = (c * z_ls - d).norm();
    }
    throw UnreachableTarget(
        "target unreachable under schedule: Gramian is rank deficient "
        "(least-squares residual " + std::to_string(residual) + ")",
        residual);
  }
  z = c.transpose() * llt.solve(d);

  InputSequence out;
  out.support = schedule;
  out.inputs.assign(schedule.horizon(), Eigen::VectorXd::Zero(sys.m()));
  Eigen::Index col = 0;
  for (int k = 0; k < schedule.horizon(); ++k) {
    for (int j : schedule.step(k)) out.inputs[k](j - 1) = z(col++);
  }
  return out;
}

Trajectory simulate(const LinearSystem& sys, const InputSequence& inputs,
                    const Eigen::VectorXd& x0) {
  if (x0.size() != sys.n()) {
    throw InvalidArgument("x0 must have length n = " + std::to_string(sys.n()));
  }
  Trajectory traj;
  traj.states.reserve(inputs.inputs.size() + 1);
  traj.states.push_back(x0);
  for (std::size_t k = 0; k < inputs.inputs.size(); ++k) {
    const Eigen::VectorXd& u = inputs.inputs[k];
    if (u.size() != sys.m()) {
      throw InvalidArgument("input " + std::to_string(k) +
                            " must have length m = " + std::to_string(sys.m()));
    }
    traj.states.push_back(sys.a() * traj.states.back() + sys.b() * u);
  }
  return traj;
}

double control_energy(const InputSequence& inputs) {
  double total = 0.0;
  for (const auto& u : inputs.inputs) total += u.squaredNorm();
  return total;
}

}  // namespace sparse_sched
