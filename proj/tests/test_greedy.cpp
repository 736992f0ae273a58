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

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <map>

#include "sparse_sched/error.hpp"
#include "sparse_sched/gramian.hpp"
#include "sparse_sched/random.hpp"

namespace sparse_sched {
namespace {

Eigen::MatrixXd diag2(double a, double b) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

const Eigen::MatrixXd kI2 = Eigen::MatrixXd::Identity(2, 2);

LinearSystem random_system(Rng& rng, int n, int m) {
  const Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(
                                n, n, [&rng] { return rng.normal(); }) /
                            std::sqrt(n);
  const Eigen::MatrixXd b =
      Eigen::MatrixXd::NullaryExpr(n, m, [&rng] { return rng.normal(); });
  return LinearSystem(a, b);
}

GreedyConfig config(int s, ScheduleMode mode = ScheduleMode::kTimeVarying) {
  GreedyConfig cfg;
  cfg.sparsity = s;
  cfg.mode = mode;
  return cfg;
}

// Reference greedy: every candidate scored by a fresh inverse of W + eps I.
SelectionSet naive_greedy(const LinearSystem& sys, int s, double eps) {
  const int n = sys.n();
  const int m = sys.m();
  SelectionSet sel;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  for (;;) {
    std::vector<IndexPair> cands = feasible_candidates(sel, n, m, s);
    if (cands.empty()) break;
    double best = std::numeric_limits<double>::infinity();
    IndexPair best_pair{};
    Eigen::VectorXd best_v;
    for (IndexPair p : cands) {
      const Eigen::VectorXd v =
          sys.power(n - 1 - p.step) * sys.b().col(p.actuator - 1);
      const double value = (w + v * v.transpose() + eps * eye).inverse().trace();
      if (value < best - 1e-12) {
        best = value;
        best_pair = p;
        best_v = v;
      }
    }
    sel.insert(best_pair);
    w += best_v * best_v.transpose();
  }
  return sel;
}

TEST(Selection, ScheduleFromSelectionExamples) {
  EXPECT_EQ(schedule_from_selection({}, 2), ActuatorSchedule(0, {{}, {}}));
  EXPECT_EQ(schedule_from_selection({{0, 1}, {1, 2}}, 2),
            ActuatorSchedule(1, {{1}, {2}}));
  EXPECT_EQ(schedule_from_selection({{1, 1}, {1, 3}}, 2),
            ActuatorSchedule(2, {{}, {1, 3}}));
  EXPECT_THROW(schedule_from_selection({{2, 1}}, 2), InvalidArgument);
  EXPECT_THROW(schedule_from_selection({{0, 0}}, 2), InvalidArgument);
  EXPECT_THROW(schedule_from_selection({{0, 1}, {0, 2}}, 2, 1), InvalidArgument);
}

TEST(Selection, RoundTripOnRandomSchedules) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.uniform_int(1, 6);
    const int m = rng.uniform_int(1, 5);
    const int s = rng.uniform_int(1, m);
    std::vector<std::vector<int>> steps(n);
    for (auto& step : steps) {
      step = rng.sample_without_replacement(1, m, rng.uniform_int(0, s));
    }
    const ActuatorSchedule sched(s, steps);
    EXPECT_EQ(schedule_from_selection(selection_from_schedule(sched), n, s),
              sched);
  }
}

TEST(Selection, FeasibleCandidatesExamples) {
  using V = std::vector<IndexPair>;
  EXPECT_EQ(feasible_candidates({}, 2, 2, 1), (V{{0, 1}, {0, 2}, {1, 1}, {1, 2}}));
  EXPECT_EQ(feasible_candidates({{0, 1}}, 2, 2, 1), (V{{1, 1}, {1, 2}}));
  EXPECT_EQ(feasible_candidates({{0, 1}}, 2, 2, 2), (V{{0, 2}, {1, 1}, {1, 2}}));
}

TEST(CandidateGain, Examples) {
  const GramianState zero1 = make_gramian_state(Eigen::MatrixXd::Zero(2, 2), 1.0);
  EXPECT_DOUBLE_EQ(candidate_gain(zero1, Eigen::Vector2d(1, 0)), 0.5);
  const GramianState zero_half =
      make_gramian_state(Eigen::MatrixXd::Zero(2, 2), 0.5);
  EXPECT_NEAR(candidate_gain(zero_half, Eigen::Vector2d(2, 0)), 16.0 / 9.0, 1e-14);
  EXPECT_NEAR(4.0 - (1.0 / 4.5 + 2.0), 16.0 / 9.0, 1e-14);
  EXPECT_EQ(candidate_gain(zero1, Eigen::Vector2d(0, 0)), 0.0);
}

TEST(CandidateGain, Errors) {
  const GramianState st = make_gramian_state(kI2, 1.0);
  EXPECT_THROW(candidate_gain(st, Eigen::Vector3d(1, 0, 0)), InvalidArgument);
  EXPECT_THROW(candidate_gain(st, Eigen::Vector2d(std::nan(""), 0)),
               InvalidArgument);
  EXPECT_THROW(candidate_gain(make_gramian_state(kI2, 0.0), Eigen::Vector2d(1, 0)),
               InvalidArgument);
}

TEST(CandidateGain, AgreesWithRecomputation) {
  Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = rng.uniform_int(1, 7);
    const Eigen::MatrixXd g = Eigen::MatrixXd::NullaryExpr(
        n, rng.uniform_int(1, n), [&rng] { return rng.normal(); });
    const double eps = std::pow(10.0, -rng.uniform_int(0, 3));
    const GramianState st = make_gramian_state(g * g.transpose(), eps);
    const Eigen::VectorXd v =
        Eigen::VectorXd::NullaryExpr(n, [&rng] { return rng.normal(); });
    const double direct =
        *st.trace_inv - epsilon_auxiliary_energy(
                            st.gramian + v * v.transpose(), eps);
    EXPECT_NEAR(candidate_gain(st, v), direct, 1e-8 * std::abs(direct) + 1e-12);
  }
}

TEST(GreedyConfig, Validation) {
  GreedyConfig cfg = config(1);
  EXPECT_NO_THROW(validate(cfg, 2));
  cfg.sparsity = 3;
  EXPECT_THROW(validate(cfg, 2), InvalidArgument);
  cfg = config(1);
  cfg.epsilon0 = 0.0;
  EXPECT_THROW(validate(cfg, 2), InvalidArgument);
  cfg = config(1);
  cfg.decay = 1.0;
  EXPECT_THROW(validate(cfg, 2), InvalidArgument);
  cfg = config(1);
  cfg.max_outer = 0;
  EXPECT_THROW(validate(cfg, 2), InvalidArgument);
  EXPECT_THROW(greedy_schedule(LinearSystem(kI2, kI2), config(0)),
               InvalidArgument);
}

TEST(CandidateVectors, LayoutAndIndexing) {
  const LinearSystem sys(diag2(2, 1), kI2);
  const CandidateVectors cand(sys);
  EXPECT_EQ(cand.matrix().cols(), 4);
  EXPECT_EQ(cand.index({1, 2}), 3);
  EXPECT_EQ(cand.pair(2), (IndexPair{1, 1}));
  // Step 0 enters through A^{n-1} = A.
  EXPECT_EQ(cand.vector({0, 1}), Eigen::Vector2d(2, 0));
  EXPECT_EQ(cand.vector({1, 1}), Eigen::Vector2d(1, 0));
}

TEST(GreedyInner, DiagonalExample) {
  GreedyConfig cfg = config(1);
  const InnerResult r = greedy_inner(LinearSystem(diag2(2, 1), kI2), cfg, 0.01);
  EXPECT_EQ(r.selection, (SelectionSet{{0, 1}, {1, 2}}));
  EXPECT_EQ(r.state.gramian, diag2(4, 1));
}

TEST(GreedyInner, ZeroDynamicsPicksStepOneFirst) {
  const InnerResult r =
      greedy_inner(LinearSystem(Eigen::MatrixXd::Zero(2, 2), kI2), config(2), 0.1);
  EXPECT_EQ(r.selection, (SelectionSet{{0, 1}, {0, 2}, {1, 1}, {1, 2}}));
  EXPECT_EQ(r.state.gramian, kI2);
}

TEST(GreedyInner, SingleActuatorStillTerminates) {
  const InnerResult r = greedy_inner(
      LinearSystem(kI2, Eigen::MatrixXd(Eigen::Vector2d::UnitX())), config(1), 0.1);
  EXPECT_EQ(r.selection, (SelectionSet{{0, 1}, {1, 1}}));
  EXPECT_EQ(r.state.gramian, 2.0 * Eigen::MatrixXd(Eigen::Vector2d::UnitX()) *
                                 Eigen::MatrixXd(Eigen::Vector2d::UnitX()).transpose());
  EXPECT_EQ(r.state.rank, 1);
}

TEST(GreedyInner, MatchesNaiveReference) {
  Rng rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = rng.uniform_int(1, 5);
    const int m = rng.uniform_int(1, 4);
    const int s = rng.uniform_int(1, m);
    const double eps = std::pow(10.0, -rng.uniform_int(0, 2));
    const LinearSystem sys = random_system(rng, n, m);
    EXPECT_EQ(greedy_inner(sys, config(s), eps).selection,
              naive_greedy(sys, s, eps))
        << "trial " << trial;
  }
}

TEST(GreedyInner, ObjectiveNonIncreasingAndFeasible) {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.uniform_int(2, 8);
    const int m = rng.uniform_int(1, 5);
    const int s = rng.uniform_int(1, m);
    const LinearSystem sys = random_system(rng, n, m);
    const InnerResult r = greedy_inner(sys, config(s), 0.05);
    EXPECT_EQ(static_cast<int>(r.trace_history.size()), n * s);
    for (std::size_t i = 1; i < r.trace_history.size(); ++i) {
      EXPECT_LE(r.trace_history[i], r.trace_history[i - 1] * (1 + 1e-12));
    }
    std::map<int, int> per_step;
    for (const auto& p : r.selection) ++per_step[p.step];
    for (const auto& [k, count] : per_step) EXPECT_LE(count, s);
    // Returned state is consistent with the returned selection.
    const Eigen::MatrixXd w = schedule_gramian(
        sys, schedule_from_selection(r.selection, n, s));
    EXPECT_LE((r.state.gramian - w).norm(), 1e-10 * (1.0 + w.norm()));
  }
}

TEST(GreedyEngine, MaintainedInverseMatchesDirectInverse) {
  Rng rng(25);
  const LinearSystem sys = random_system(rng, 8, 4);
  const CandidateVectors cand(sys);
  GreedyEngine engine(cand, 2, 0.01);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(8, 8);
  while (auto p = engine.pick_next()) {
    const Eigen::MatrixXd direct = (engine.gramian() + 0.01 * eye).inverse();
    EXPECT_LE((engine.shifted_inverse() - direct).norm() / direct.norm(), 1e-8);
  }
  EXPECT_TRUE(engine.done());
  EXPECT_EQ(engine.picks(), 16);
}

TEST(GreedyEngine, StepperErrors) {
  const LinearSystem sys(kI2, kI2);
  const CandidateVectors cand(sys);
  EXPECT_THROW(GreedyEngine(cand, 1, 0.0), InvalidArgument);
  GreedyEngine engine(cand, 1, 1.0);
  engine.add({0, 1});
  EXPECT_FALSE(engine.is_feasible({0, 2}));
  EXPECT_THROW(engine.add({0, 2}), InvalidArgument);
  EXPECT_THROW(engine.add({0, 1}), InvalidArgument);
  EXPECT_THROW(engine.add({2, 1}), InvalidArgument);
  EXPECT_EQ(engine.candidates(), (std::vector<IndexPair>{{1, 1}, {1, 2}}));
}

TEST(GreedySchedule, DiagonalExampleOneOuterIteration) {
  const GreedyResult r = greedy_schedule(LinearSystem(diag2(2, 1), kI2), config(1));
  EXPECT_TRUE(r.full_rank);
  EXPECT_EQ(r.schedule, ActuatorSchedule(1, {{1}, {2}}));
  EXPECT_EQ(r.diagnostics.outer_iterations, 1);
  EXPECT_EQ(r.diagnostics.final_epsilon, 1.0);
  EXPECT_EQ(r.diagnostics.final_rank, 2);
  EXPECT_EQ(r.diagnostics.rank_history, std::vector<int>{2});
}

TEST(GreedySchedule, InfeasibleReportsFailureWithBestRank) {
  GreedyConfig cfg = config(1);
  cfg.max_outer = 3;
  const GreedyResult r =
      greedy_schedule(LinearSystem(Eigen::MatrixXd::Zero(2, 2), kI2), cfg);
  EXPECT_FALSE(r.full_rank);
  EXPECT_EQ(r.diagnostics.final_rank, 1);
  EXPECT_EQ(r.diagnostics.outer_iterations, 3);
  EXPECT_NEAR(r.diagnostics.final_epsilon, 0.01, 1e-15);
  EXPECT_FALSE(r.diagnostics.warnings.empty());
  EXPECT_EQ(r.schedule.horizon(), 2);
}

TEST(GreedySchedule, EpsilonDecaysGeometrically) {
  // B = e1 with A = I never reaches full rank; every outer iteration runs.
  GreedyConfig cfg = config(1);
  cfg.epsilon0 = 2.0;
  cfg.decay = 4.0;
  cfg.max_outer = 4;
  const GreedyResult r =
      greedy_schedule(LinearSystem(kI2, Eigen::MatrixXd(Eigen::Vector2d::UnitX())), cfg);
  EXPECT_EQ(r.diagnostics.outer_iterations, 4);
  EXPECT_DOUBLE_EQ(r.diagnostics.final_epsilon, 2.0 / 64.0);
  EXPECT_EQ(r.diagnostics.trace_history.size(), 4u);
  EXPECT_EQ(r.diagnostics.rank_history, (std::vector<int>{1, 1, 1, 1}));
}

TEST(GreedySchedule, Deterministic) {
  Rng rng(27);
  const LinearSystem sys = random_system(rng, 10, 6);
  const GreedyResult a = greedy_schedule(sys, config(2));
  const GreedyResult b = greedy_schedule(sys, config(2));
  EXPECT_EQ(a.schedule, b.schedule);
  EXPECT_EQ(a.diagnostics.trace_history, b.diagnostics.trace_history);
}

TEST(GreedySchedule, ObserverSeesEveryPick) {
  int calls = 0;
  const GreedyResult r = greedy_schedule(
      LinearSystem(diag2(2, 1), kI2), config(1),
      [&calls](const GreedyEngine& e) {
        ++calls;
        EXPECT_EQ(e.picks(), calls);
      });
  EXPECT_TRUE(r.full_rank);
  EXPECT_EQ(calls, 2);
}

TEST(TimeInvariant, Examples) {
  const GreedyResult both = greedy_schedule(
      LinearSystem(kI2, kI2), config(2, ScheduleMode::kTimeInvariant));
  EXPECT_TRUE(both.full_rank);
  EXPECT_EQ(both.schedule, ActuatorSchedule::repeated(2, {1, 2}, 2));
  EXPECT_EQ(schedule_gramian(LinearSystem(kI2, kI2), both.schedule), 2.0 * kI2);

  GreedyConfig one = config(1, ScheduleMode::kTimeInvariant);
  one.max_outer = 2;
  const GreedyResult r = greedy_schedule(LinearSystem(kI2, kI2), one);
  EXPECT_FALSE(r.full_rank);
  EXPECT_EQ(r.schedule, ActuatorSchedule::repeated(1, {1}, 2));
  EXPECT_EQ(r.diagnostics.final_rank, 1);

  Eigen::MatrixXd b(2, 2);
  b << 1, 0, 1, 1;
  const GreedyResult mixed = greedy_schedule(
      LinearSystem(diag2(2, 1), b), config(1, ScheduleMode::kTimeInvariant));
  EXPECT_TRUE(mixed.full_rank);
  EXPECT_EQ(mixed.schedule, ActuatorSchedule::repeated(1, {1}, 2));
}

TEST(TimeInvariant, MatchesNaiveSupportGreedy) {
  Rng rng(29);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = rng.uniform_int(2, 5);
    const int m = rng.uniform_int(2, 5);
    const int s = rng.uniform_int(1, m);
    const LinearSystem sys = random_system(rng, n, m);
    GreedyConfig cfg = config(s, ScheduleMode::kTimeInvariant);
    cfg.max_outer = 1;
    const GreedyResult r = greedy_schedule(sys, cfg);

    std::vector<int> support;
    for (int pick = 0; pick < s; ++pick) {
      double best = std::numeric_limits<double>::infinity();
      int best_j = 0;
      for (int j = 1; j <= m; ++j) {
        if (std::find(support.begin(), support.end(), j) != support.end()) continue;
        std::vector<int> trial_support = support;
        trial_support.push_back(j);
        const double value = epsilon_auxiliary_energy(
            schedule_gramian(sys, ActuatorSchedule::repeated(s, trial_support, n)),
            cfg.epsilon0);
        if (value < best - 1e-12) {
          best = value;
          best_j = j;
        }
      }
      support.push_back(best_j);
    }
    EXPECT_EQ(r.schedule, ActuatorSchedule::repeated(s, support, n));
  }
}

}  // namespace
}  // namespace sparse_sched
