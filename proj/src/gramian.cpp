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

#include "sparse_sched/gramian.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "sparse_sched/error.hpp"

namespace sparse_sched {
namespace {

void check_schedule(const LinearSystem& sys, const ActuatorSchedule& schedule) {
  if (schedule.horizon() < 1) {
    throw InvalidArgument("schedule must have at least one step");
  }
  schedule.validate_for(sys.m());
}

// Columns of B selected by a step, in the step's (ascending) order.
Eigen::MatrixXd selected_columns(const Eigen::MatrixXd& b,
                                 const std::vector<int>& step) {
  Eigen::MatrixXd out(b.rows(), static_cast<Eigen::Index>(step.size()));
  for (std::size_t c = 0; c < step.size(); ++c) out.col(c) = b.col(step[c] - 1);
  return out;
}

}  // namespace

int numerical_rank(const Eigen::MatrixXd& m, double tol) {
  if (m.size() == 0) return 0;
  const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXd>(m).singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  if (!(smax > 0.0)) return 0;
  const double cutoff =
      tol * smax * static_cast<double>(std::max(m.rows(), m.cols()));
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

Eigen::MatrixXd controllability_matrix(const LinearSystem& sys,
                                       const ActuatorSchedule& schedule) {
  check_schedule(sys, schedule);
  const int horizon = schedule.horizon();
  Eigen::MatrixXd c(sys.n(), schedule.total_columns());
  Eigen::Index col = 0;
  for (int t = 0; t < horizon; ++t) {
    const auto& step = schedule.step(t);
    if (step.empty()) continue;
    const Eigen::MatrixXd block =
        sys.power(horizon - 1 - t) * selected_columns(sys.b(), step);
    c.middleCols(col, block.cols()) = block;
    col += block.cols();
  }
  return c;
}

Eigen::MatrixXd schedule_gramian(const LinearSystem& sys,
                                 const ActuatorSchedule& schedule) {
  check_schedule(sys, schedule);
  const int horizon = schedule.horizon();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(sys.n(), sys.n());
  for (int t = 0; t < horizon; ++t) {
    const auto& step = schedule.step(t);
    if (step.empty()) continue;
    const Eigen::MatrixXd block =
        sys.power(horizon - 1 - t) * selected_columns(sys.b(), step);
    w.noalias() += block * block.transpose();
  }
  return 0.5 * (w + w.transpose());
}

Eigen::MatrixXd fully_actuated_gramian(const LinearSystem& sys) {
  return schedule_gramian(sys, ActuatorSchedule::full(sys.m(), sys.n()));
}

Eigen::MatrixXd shifted_inverse(const Eigen::MatrixXd& w, double epsilon) {
  const Eigen::Index n = w.rows();
  Eigen::MatrixXd shifted = w;
  shifted.diagonal().array() += epsilon;
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("W + eps I is not positive definite");
  }
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  return 0.5 * (inv + inv.transpose());
}

GramianState make_gramian_state(Eigen::MatrixXd w, double epsilon,
                                double rank_tol) {
  if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be >= 0");
  GramianState state;
  state.rank = numerical_rank(w, rank_tol);
  state.epsilon = epsilon;
  if (epsilon > 0.0) {
    state.shifted_inverse = shifted_inverse(w, epsilon);
    state.trace_inv = state.shifted_inverse->trace();
  }
  state.gramian = std::move(w);
  return state;
}

GramianState gramian(const LinearSystem& sys, const ActuatorSchedule& schedule,
                     double epsilon, double rank_tol) {
  return make_gramian_state(schedule_gramian(sys, schedule), epsilon, rank_tol);
}

double epsilon_auxiliary_energy(const GramianState& state) {
  if (!(state.epsilon > 0.0)) {
    throw InvalidArgument("epsilon-auxiliary energy needs epsilon > 0");
  }
  if (state.trace_inv) return *state.trace_inv;
  return epsilon_auxiliary_energy(state.gramian, state.epsilon);
}

double epsilon_auxiliary_energy(const Eigen::MatrixXd& w, double epsilon) {
  if (!(epsilon > 0.0)) {
    throw InvalidArgument("epsilon-auxiliary energy needs epsilon > 0");
  }
  return shifted_inverse(w, epsilon).trace();
}

std::optional<double> inverse_trace(const Eigen::MatrixXd& w,
                                    double rank_tol) {
  if (w.size() == 0 || numerical_rank(w, rank_tol) < w.rows()) {
    return std::nullopt;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(w);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Eigen::MatrixXd inv =
      llt.solve(Eigen::MatrixXd::Identity(w.rows(), w.cols()));
  return inv.trace();
}

int minimal_polynomial_degree(const Eigen::MatrixXd& a, double tol) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw InvalidArgument("minimal polynomial needs a square matrix");
  }
  const Eigen::Index n = a.rows();
  // Columns vec(A^k) / ||A^k||, k = 0..n. Scaling does not change the rank
  // and keeps high powers from swamping the tolerance.
  Eigen::MatrixXd stacked = Eigen::MatrixXd::Zero(n * n, n + 1);
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index k = 0; k <= n; ++k) {
    const double norm = p.norm();
    if (norm > 0.0) {
      stacked.col(k) = Eigen::Map<const Eigen::VectorXd>(p.data(), n * n) / norm;
    }
    p = a * p;
  }
  // Dependence is monotone in q, so bisect for the first dependent prefix.
  auto dependent = [&](Eigen::Index q) {
    return numerical_rank(stacked.leftCols(q + 1), tol) < q + 1;
  };
  Eigen::Index lo = 1;
  Eigen::Index hi = n;  // Cayley-Hamilton: q <= n.
  while (lo < hi) {
    const Eigen::Index mid = lo + (hi - lo) / 2;
    if (dependent(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return static_cast<int>(lo);
}

ControllabilityReport is_sparse_controllable(const LinearSystem& sys, int s,
                                             double tol) {
  if (s < 1 || s > sys.m()) {
    throw InvalidArgument("sparsity must satisfy 1 <= s <= m, got " +
                          std::to_string(s));
  }
  const int n = sys.n();
  const int m = sys.m();
  Eigen::MatrixXd krylov(n, static_cast<Eigen::Index>(n) * m);
  for (int k = 0; k < n; ++k) {
    krylov.middleCols(static_cast<Eigen::Index>(k) * m, m) =
        sys.cached_power(k) * sys.b();
  }
  ControllabilityReport report;
  report.n = n;
  report.sparsity = s;
  report.controllability_rank = numerical_rank(krylov, tol);
  report.rank_a = numerical_rank(sys.a(), tol);
  report.sparse_controllable =
      report.controllability_rank == n && s >= n - report.rank_a;
  return report;
}

HorizonBounds horizon_bounds(const LinearSystem& sys, int s, double tol) {
  const ControllabilityReport report = is_sparse_controllable(sys, s, tol);
  if (!report.sparse_controllable) {
    throw Infeasible("system is not " + std::to_string(s) +
                     "-sparse controllable (controllability rank " +
                     std::to_string(report.controllability_rank) +
                     ", rank(A) " + std::to_string(report.rank_a) + ")");
  }
  const int n = sys.n();
  const int q = minimal_polynomial_degree(sys.a(), tol);
  const int rank_b = numerical_rank(sys.b(), tol);
  auto ceil_div = [](int a, int b) { return (a + b - 1) / b; };
  HorizonBounds bounds;
  bounds.lower = ceil_div(n, s);
  bounds.upper = std::min(q * ceil_div(rank_b, s), n - s + 1);
  return bounds;
}

}  // namespace sparse_sched
