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

#include "sparse_sched/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "sparse_sched/error.hpp"

namespace sparse_sched {
namespace {

constexpr double kTieTolerance = 1e-12;

// Index of the first entry within kTieTolerance of the maximum, or -1 when
// every entry is -inf.
int argmax_with_ties(const std::vector<double>& gains) {
  double best = -std::numeric_limits<double>::infinity();
  for (double g : gains) best = std::max(best, g);
  if (best == -std::numeric_limits<double>::infinity()) return -1;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (gains[i] >= best - kTieTolerance) return static_cast<int>(i);
  }
  return -1;
}

double epsilon_at(const GreedyConfig& cfg, int t) {
  return cfg.epsilon0 / std::pow(cfg.decay, t);
}

void warn_if_infeasible(const LinearSystem& sys, const GreedyConfig& cfg,
                        GreedyDiagnostics& diag) {
  const ControllabilityReport report =
      is_sparse_controllable(sys, cfg.sparsity, cfg.rank_tol);
  if (!report.sparse_controllable) {
    diag.warnings.push_back(
        "system is not " + std::to_string(cfg.sparsity) +
        "-sparse controllable (controllability rank " +
        std::to_string(report.controllability_rank) + ", rank(A) " +
        std::to_string(report.rank_a) + "); a full-rank schedule may not exist");
  }
}

InnerResult run_inner(const CandidateVectors& cand, const GreedyConfig& cfg,
                      double epsilon, const PickObserver& observer) {
  GreedyEngine engine(cand, cfg.sparsity, epsilon);
  InnerResult result;
  result.trace_history.reserve(static_cast<std::size_t>(cand.n()) *
                               cfg.sparsity);
  while (!engine.done()) {
    engine.pick_next();
    result.trace_history.push_back(engine.objective());
    if (observer) observer(engine);
    if (cfg.stop_at_full_rank &&
        numerical_rank(engine.gramian(), cfg.rank_tol) == cand.n()) {
      double best = 0.0;
      for (const IndexPair& p : engine.candidates()) {
        best = std::max(best, engine.gain(p));
      }
      if (best < kTieTolerance) break;
    }
  }
  result.selection = engine.selection();
  result.state = engine.state(cfg.rank_tol);
  return result;
}

struct FixedSupportInner {
  std::vector<int> support;
  Eigen::MatrixXd w;
  std::vector<double> trace_history;
};

// Sequential Sherman-Morrison updates for all vectors of actuator j.
// Returns the total trace decrease; `m` is updated in place.
double absorb_actuator(const kernels::KernelSet& ks, const CandidateVectors& cand,
                       int actuator, Eigen::MatrixXd& m, Eigen::VectorXd& u) {
  const std::size_t n = static_cast<std::size_t>(cand.n());
  double total = 0.0;
  for (int k = 0; k < cand.n(); ++k) {
    const double* v = cand.data(cand.index({k, actuator}));
    ks.matvec(m.data(), v, u.data(), n);
    const double denom = 1.0 + ks.dot(v, u.data(), n);
    const double num = ks.dot(u.data(), u.data(), n);
    if (num == 0.0) continue;
    if (!std::isfinite(denom) || denom <= 0.0) {
      throw NumericalError("Sherman-Morrison breakdown in fixed-support update");
    }
    total += num / denom;
    ks.rank_one_update(m.data(), u.data(), -1.0 / denom, n);
  }
  return total;
}

FixedSupportInner run_fixed_support_inner(const CandidateVectors& cand,
                                          int sparsity, double epsilon) {
  const kernels::KernelSet& ks = kernels::kernels();
  const int n = cand.n();
  const int m = cand.m();
  FixedSupportInner result;
  Eigen::MatrixXd inv =
      Eigen::MatrixXd::Identity(n, n) / epsilon;
  Eigen::MatrixXd trial(n, n);
  Eigen::VectorXd u(n);
  std::vector<char> chosen(m, 0);
  while (static_cast<int>(result.support.size()) < std::min(sparsity, m)) {
    std::vector<double> gains(m, -std::numeric_limits<double>::infinity());
    for (int j = 1; j <= m; ++j) {
      if (chosen[j - 1]) continue;
      trial = inv;
      gains[j - 1] = absorb_actuator(ks, cand, j, trial, u);
    }
    const int best = argmax_with_ties(gains);
    if (best < 0) break;
    chosen[best] = 1;
    result.support.push_back(best + 1);
    absorb_actuator(ks, cand, best + 1, inv, u);
    result.trace_history.push_back(inv.trace());
  }
  std::sort(result.support.begin(), result.support.end());
  result.w = Eigen::MatrixXd::Zero(n, n);
  for (int j : result.support) {
    for (int k = 0; k < n; ++k) {
      const auto v = cand.matrix().col(cand.index({k, j}));
      result.w.noalias() += v * v.transpose();
    }
  }
  result.w = 0.5 * (result.w + result.w.transpose());
  return result;
}

}  // namespace

ActuatorSchedule schedule_from_selection(const SelectionSet& selection,
                                         int horizon, int sparsity) {
  if (horizon < 0) throw InvalidArgument("negative horizon");
  std::vector<std::vector<int>> steps(horizon);
  for (const IndexPair& p : selection) {
    if (p.step < 0 || p.step >= horizon) {
      throw InvalidArgument("pair step " + std::to_string(p.step) +
                            " outside [0, " + std::to_string(horizon) + ")");
    }
    if (p.actuator < 1) {
      throw InvalidArgument("pair actuator " + std::to_string(p.actuator) +
                            " is not a 1-based index");
    }
    steps[p.step].push_back(p.actuator);
  }
  if (sparsity <= 0) {
    for (const auto& step : steps) {
      sparsity = std::max(sparsity, static_cast<int>(step.size()));
    }
  }
  return ActuatorSchedule(sparsity, std::move(steps));
}

SelectionSet selection_from_schedule(const ActuatorSchedule& schedule) {
  SelectionSet selection;
  for (int k = 0; k < schedule.horizon(); ++k) {
    for (int j : schedule.step(k)) selection.insert({k, j});
  }
  return selection;
}

std::vector<IndexPair> feasible_candidates(const SelectionSet& selection,
                                           int n, int m, int s) {
  std::vector<int> counts(n, 0);
  for (const IndexPair& p : selection) {
    if (p.step >= 0 && p.step < n) ++counts[p.step];
  }
  std::vector<IndexPair> out;
  for (int k = 0; k < n; ++k) {
    if (counts[k] >= s) continue;
    for (int j = 1; j <= m; ++j) {
      if (!selection.contains({k, j})) out.push_back({k, j});
    }
  }
  return out;
}

double candidate_gain(const GramianState& state, const Eigen::VectorXd& v) {
  if (!state.shifted_inverse) {
    throw InvalidArgument("candidate gain needs a state with epsilon > 0");
  }
  if (v.size() != state.gramian.rows()) {
    throw InvalidArgument("candidate vector has wrong length");
  }
  if (!v.allFinite()) throw InvalidArgument("candidate vector is not finite");
  Eigen::VectorXd scratch(v.size());
  return kernels::trace_decrease(kernels::kernels(),
                                 state.shifted_inverse->data(), v.data(),
                                 scratch.data(),
                                 static_cast<std::size_t>(v.size()));
}

void validate(const GreedyConfig& cfg, int m) {
  if (!(cfg.epsilon0 > 0.0)) throw InvalidArgument("epsilon0 must be > 0");
  if (!(cfg.decay > 1.0)) throw InvalidArgument("decay factor c must be > 1");
  if (cfg.sparsity < 1 || cfg.sparsity > m) {
    throw InvalidArgument("sparsity must satisfy 1 <= s <= m = " +
                          std::to_string(m));
  }
  if (cfg.max_outer < 1) throw InvalidArgument("max_outer must be >= 1");
  if (!(cfg.rank_tol > 0.0)) throw InvalidArgument("rank_tol must be > 0");
}

CandidateVectors::CandidateVectors(const LinearSystem& sys)
    : n_(sys.n()), m_(sys.m()), vectors_(sys.n(), sys.n() * sys.m()) {
  for (int k = 0; k < n_; ++k) {
    vectors_.middleCols(static_cast<Eigen::Index>(k) * m_, m_).noalias() =
        sys.cached_power(n_ - 1 - k) * sys.b();
  }
}

GreedyEngine::GreedyEngine(const CandidateVectors& candidates, int sparsity,
                           double epsilon, const kernels::KernelSet& ks)
    : cand_(candidates),
      ks_(ks),
      sparsity_(sparsity),
      epsilon_(epsilon),
      w_(Eigen::MatrixXd::Zero(candidates.n(), candidates.n())),
      m_(Eigen::MatrixXd::Identity(candidates.n(), candidates.n()) / epsilon),
      taken_(static_cast<std::size_t>(candidates.n()) * candidates.m(), 0),
      step_count_(candidates.n(), 0),
      remaining_(sparsity > 0 ? candidates.n() * candidates.m() : 0),
      scratch_(candidates.n()),
      gain_scratch_(candidates.n()) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
  if (sparsity < 0) throw InvalidArgument("negative sparsity");
}

bool GreedyEngine::is_feasible(IndexPair p) const {
  if (p.step < 0 || p.step >= cand_.n() || p.actuator < 1 ||
      p.actuator > cand_.m()) {
    return false;
  }
  return !taken_[cand_.index(p)] && step_count_[p.step] < sparsity_;
}

std::vector<IndexPair> GreedyEngine::candidates() const {
  std::vector<IndexPair> out;
  out.reserve(remaining_);
  const int total = cand_.n() * cand_.m();
  for (int i = 0; i < total; ++i) {
    const IndexPair p = cand_.pair(i);
    if (is_feasible(p)) out.push_back(p);
  }
  return out;
}

double GreedyEngine::gain(IndexPair p) const {
  return kernels::trace_decrease(ks_, m_.data(), cand_.data(cand_.index(p)),
                                 gain_scratch_.data(),
                                 static_cast<std::size_t>(cand_.n()));
}

std::optional<IndexPair> GreedyEngine::pick_next() {
  if (done()) return std::nullopt;
  const int total = cand_.n() * cand_.m();
  const std::size_t n = static_cast<std::size_t>(cand_.n());
  std::vector<double> gains(total, -std::numeric_limits<double>::infinity());
  for (int i = 0; i < total; ++i) {
    const int k = i / cand_.m();
    if (taken_[i] || step_count_[k] >= sparsity_) continue;
    gains[i] = kernels::trace_decrease(ks_, m_.data(), cand_.data(i),
                                       scratch_.data(), n);
  }
  const int best = argmax_with_ties(gains);
  if (best < 0) return std::nullopt;
  apply(best);
  return cand_.pair(best);
}

void GreedyEngine::add(IndexPair p) {
  if (!is_feasible(p)) {
    throw InvalidArgument("pair (" + std::to_string(p.step) + ", " +
                          std::to_string(p.actuator) + ") is not feasible");
  }
  apply(cand_.index(p));
}

void GreedyEngine::apply(int index) {
  const IndexPair p = cand_.pair(index);
  const std::size_t n = static_cast<std::size_t>(cand_.n());
  const double* v = cand_.data(index);

  ks_.rank_one_update(w_.data(), v, 1.0, n);
  const double denom =
      kernels::sherman_morrison_update(ks_, m_.data(), v, scratch_.data(), n);
  if (!std::isfinite(denom) || denom <= 0.0 || !m_.allFinite()) {
    // Rebuild from W; shifted_inverse throws if that fails too.
    m_ = sparse_sched::shifted_inverse(w_, epsilon_);
    ++recomputations_;
  }

  const int before = step_count_[p.step];
  taken_[index] = 1;
  ++step_count_[p.step];
  remaining_ -= step_count_[p.step] >= sparsity_ ? cand_.m() - before : 1;
  selection_.insert(p);
}

GramianState GreedyEngine::state(double rank_tol) const {
  GramianState st;
  st.gramian = 0.5 * (w_ + w_.transpose());
  st.epsilon = epsilon_;
  st.shifted_inverse = m_;
  st.trace_inv = m_.trace();
  st.rank = numerical_rank(st.gramian, rank_tol);
  return st;
}

InnerResult greedy_inner(const LinearSystem& sys, const GreedyConfig& cfg,
                         double epsilon) {
  validate(cfg, sys.m());
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
  const CandidateVectors cand(sys);
  return run_inner(cand, cfg, epsilon, {});
}

GreedyResult greedy_schedule(const LinearSystem& sys, const GreedyConfig& cfg,
                             const PickObserver& observer) {
  if (cfg.mode == ScheduleMode::kTimeInvariant) {
    return greedy_schedule_time_invariant(sys, cfg);
  }
  validate(cfg, sys.m());
  GreedyResult result;
  GreedyDiagnostics& diag = result.diagnostics;
  warn_if_infeasible(sys, cfg, diag);

  const CandidateVectors cand(sys);
  int best_rank = -1;
  for (int t = 0; t < cfg.max_outer; ++t) {
    const double eps = epsilon_at(cfg, t);
    InnerResult inner = run_inner(cand, cfg, eps, observer);
    diag.outer_iterations = t + 1;
    diag.final_epsilon = eps;
    diag.rank_history.push_back(inner.state.rank);
    diag.trace_history.push_back(std::move(inner.trace_history));
    if (inner.state.rank >= best_rank) {
      best_rank = inner.state.rank;
      result.schedule =
          schedule_from_selection(inner.selection, sys.n(), cfg.sparsity);
    }
    if (inner.state.rank == sys.n()) {
      result.full_rank = true;
      break;
    }
  }
  diag.final_rank = best_rank;
  return result;
}

GreedyResult greedy_schedule_time_invariant(const LinearSystem& sys,
                                            const GreedyConfig& cfg) {
  validate(cfg, sys.m());
  GreedyResult result;
  GreedyDiagnostics& diag = result.diagnostics;
  warn_if_infeasible(sys, cfg, diag);

  const CandidateVectors cand(sys);
  int best_rank = -1;
  for (int t = 0; t < cfg.max_outer; ++t) {
    const double eps = epsilon_at(cfg, t);
    FixedSupportInner inner = run_fixed_support_inner(cand, cfg.sparsity, eps);
    const int rank = numerical_rank(inner.w, cfg.rank_tol);
    diag.outer_iterations = t + 1;
    diag.final_epsilon = eps;
    diag.rank_history.push_back(rank);
    diag.trace_history.push_back(std::move(inner.trace_history));
    if (rank >= best_rank) {
      best_rank = rank;
      result.schedule =
          ActuatorSchedule::repeated(cfg.sparsity, inner.support, sys.n());
    }
    if (rank == sys.n()) {
      result.full_rank = true;
      break;
    }
  }
  diag.final_rank = best_rank;
  return result;
}

}  // namespace sparse_sched
