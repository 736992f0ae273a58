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

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparse_sched/error.hpp"
#include "sparse_sched/gramian.hpp"
#include "sparse_sched/linear_system.hpp"
#include "sparse_sched/random.hpp"

namespace sparse_sched {
namespace {

Eigen::MatrixXd diag2(double a, double b) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Eigen::MatrixXd random_matrix(Rng& rng, int rows, int cols) {
  return Eigen::MatrixXd::NullaryExpr(rows, cols,
                                      [&rng] { return rng.normal(); });
}

ActuatorSchedule random_schedule_of(Rng& rng, int n, int m, int s) {
  std::vector<std::vector<int>> steps(n);
  for (auto& step : steps) {
    const int count = rng.uniform_int(0, s);
    for (int j : rng.sample_without_replacement(1, m, count)) step.push_back(j);
  }
  return ActuatorSchedule(s, steps);
}

const Eigen::MatrixXd kI2 = Eigen::MatrixXd::Identity(2, 2);
const Eigen::MatrixXd kZero2 = Eigen::MatrixXd::Zero(2, 2);

TEST(LinearSystem, RejectsBadShapesAndNonFinite) {
  EXPECT_THROW(LinearSystem(Eigen::MatrixXd::Zero(2, 3), kI2), InvalidArgument);
  EXPECT_THROW(LinearSystem(kI2, Eigen::MatrixXd::Zero(3, 2)), InvalidArgument);
  EXPECT_THROW(LinearSystem(Eigen::MatrixXd(0, 0), Eigen::MatrixXd(0, 1)),
               InvalidArgument);
  Eigen::MatrixXd bad = kI2;
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(LinearSystem(bad, kI2), InvalidArgument);
  bad(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(LinearSystem(kI2, bad), InvalidArgument);
}

TEST(LinearSystem, PowersMatchRepeatedProducts) {
  Rng rng(1);
  const LinearSystem sys(random_matrix(rng, 4, 4), random_matrix(rng, 4, 2));
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(4, 4);
  for (int k = 0; k < 7; ++k) {
    EXPECT_LT((sys.power(k) - p).norm(), 1e-10 * (1.0 + p.norm())) << k;
    p = p * sys.a();
  }
  EXPECT_THROW(sys.power(-1), InvalidArgument);
  EXPECT_THROW(sys.cached_power(4), InvalidArgument);
}

TEST(ActuatorSchedule, SortsAndValidates) {
  const ActuatorSchedule s(2, {{2, 1}, {}, {3}});
  EXPECT_EQ(s.step(0), (std::vector<int>{1, 2}));
  EXPECT_EQ(s.horizon(), 3);
  EXPECT_EQ(s.total_columns(), 3);
  EXPECT_THROW(ActuatorSchedule(1, {{1, 2}}), InvalidArgument);
  EXPECT_THROW(ActuatorSchedule(2, {{1, 1}}), InvalidArgument);
  EXPECT_THROW(ActuatorSchedule(2, {{0}}), InvalidArgument);
  EXPECT_THROW(s.validate_for(2), InvalidArgument);
  EXPECT_NO_THROW(s.validate_for(3));
}

TEST(ActuatorSchedule, RepeatedAndFull) {
  EXPECT_EQ(ActuatorSchedule::repeated(2, {3, 1}, 2),
            ActuatorSchedule(2, {{1, 3}, {1, 3}}));
  EXPECT_EQ(ActuatorSchedule::full(2, 2), ActuatorSchedule(2, {{1, 2}, {1, 2}}));
}

TEST(Controllability, MatrixExamples) {
  const LinearSystem zero(kZero2, kI2);
  EXPECT_EQ(controllability_matrix(zero, ActuatorSchedule(2, {{}, {1, 2}})), kI2);
  const LinearSystem ident(kI2, kI2);
  EXPECT_EQ(controllability_matrix(ident, ActuatorSchedule(1, {{1}, {2}})), kI2);
  const LinearSystem d(diag2(2, 1), kI2);
  EXPECT_EQ(controllability_matrix(d, ActuatorSchedule(1, {{1}, {2}})),
            diag2(2, 1));
  EXPECT_THROW(controllability_matrix(d, ActuatorSchedule(1, {{3}, {1}})),
               InvalidArgument);
}

TEST(Gramian, Examples) {
  EXPECT_EQ(schedule_gramian(LinearSystem(kZero2, kI2),
                             ActuatorSchedule(2, {{}, {1, 2}})),
            kI2);
  EXPECT_EQ(schedule_gramian(LinearSystem(kI2, kI2),
                             ActuatorSchedule(1, {{1}, {2}})),
            kI2);
  EXPECT_EQ(schedule_gramian(LinearSystem(diag2(2, 1), kI2),
                             ActuatorSchedule(1, {{1}, {2}})),
            diag2(4, 1));
}

TEST(Gramian, EqualsControllabilityOuterProduct) {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.uniform_int(1, 10);
    const int m = rng.uniform_int(1, 6);
    const int s = rng.uniform_int(1, m);
    const LinearSystem sys(random_matrix(rng, n, n) / std::sqrt(n),
                           random_matrix(rng, n, m));
    const ActuatorSchedule sched = random_schedule_of(rng, n, m, s);
    const Eigen::MatrixXd c = controllability_matrix(sys, sched);
    const Eigen::MatrixXd w = schedule_gramian(sys, sched);
    const Eigen::MatrixXd cct = c * c.transpose();
    EXPECT_LE((w - cct).norm(), 1e-10 * std::max(1.0, cct.norm()));
    EXPECT_EQ(w, w.transpose());
  }
}

TEST(Gramian, StateInvariants) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.uniform_int(1, 8);
    const int m = rng.uniform_int(1, 4);
    const LinearSystem sys(random_matrix(rng, n, n) / std::sqrt(n),
                           random_matrix(rng, n, m));
    const double eps = std::pow(10.0, -rng.uniform_int(0, 4));
    const GramianState st =
        gramian(sys, random_schedule_of(rng, n, m, rng.uniform_int(1, m)), eps);
    ASSERT_TRUE(st.shifted_inverse.has_value());
    const Eigen::MatrixXd shifted =
        st.gramian + eps * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
    EXPECT_LE((*st.shifted_inverse * shifted - eye).norm() / eye.norm(), 1e-8);
    EXPECT_NEAR(*st.trace_inv, st.shifted_inverse->trace(),
                1e-10 * std::abs(*st.trace_inv));
    EXPECT_GE(st.rank, 0);
    EXPECT_LE(st.rank, n);

    // Spectral form: sum over nonzero eigenvalues plus (n - R) / eps.
    const Eigen::VectorXd lambda =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(st.gramian).eigenvalues();
    double spectral = 0.0;
    for (int i = 0; i < n; ++i) spectral += 1.0 / (std::max(lambda(i), 0.0) + eps);
    EXPECT_NEAR(epsilon_auxiliary_energy(st), spectral, 1e-8 * spectral);
  }
}

TEST(Gramian, ZeroEpsilonOmitsInverse) {
  const GramianState st = make_gramian_state(kI2, 0.0);
  EXPECT_FALSE(st.shifted_inverse.has_value());
  EXPECT_FALSE(st.trace_inv.has_value());
  EXPECT_EQ(st.rank, 2);
  EXPECT_THROW(make_gramian_state(kI2, -1.0), InvalidArgument);
  EXPECT_THROW(epsilon_auxiliary_energy(st), InvalidArgument);
}

TEST(EpsilonAuxiliaryEnergy, Examples) {
  EXPECT_DOUBLE_EQ(epsilon_auxiliary_energy(kI2, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(epsilon_auxiliary_energy(kZero2, 0.5), 4.0);
  EXPECT_DOUBLE_EQ(epsilon_auxiliary_energy(diag2(3, 0), 1.0), 1.25);
  EXPECT_THROW(epsilon_auxiliary_energy(kI2, 0.0), InvalidArgument);
  EXPECT_THROW(epsilon_auxiliary_energy(kI2, -1.0), InvalidArgument);
}

TEST(EpsilonAuxiliaryEnergy, NeverIncreasesWhenAPairIsAdded) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.uniform_int(1, 6);
    const int m = rng.uniform_int(1, 4);
    const LinearSystem sys(random_matrix(rng, n, n) / std::sqrt(n),
                           random_matrix(rng, n, m));
    const ActuatorSchedule base = random_schedule_of(rng, n, m, m);
    auto steps = base.steps();
    const int k = rng.uniform_int(0, n - 1);
    if (static_cast<int>(steps[k].size()) == m) continue;
    int j = 1;
    while (std::find(steps[k].begin(), steps[k].end(), j) != steps[k].end()) ++j;
    steps[k].push_back(j);
    const double eps = 0.1;
    const double before = epsilon_auxiliary_energy(schedule_gramian(sys, base), eps);
    const double after = epsilon_auxiliary_energy(
        schedule_gramian(sys, ActuatorSchedule(m, steps)), eps);
    EXPECT_LE(after, before * (1.0 + 1e-12));
  }
}

TEST(InverseTrace, FullAndDeficient) {
  EXPECT_DOUBLE_EQ(*inverse_trace(diag2(4, 1)), 1.25);
  EXPECT_FALSE(inverse_trace(diag2(4, 0)).has_value());
}

TEST(NumericalRank, Examples) {
  EXPECT_EQ(numerical_rank(Eigen::MatrixXd::Identity(3, 3)), 3);
  EXPECT_EQ(numerical_rank(kZero2), 0);
  EXPECT_EQ(numerical_rank(Eigen::MatrixXd::Ones(2, 2)), 1);
  EXPECT_EQ(numerical_rank(Eigen::MatrixXd(0, 3)), 0);
}

TEST(MinimalPolynomial, Examples) {
  EXPECT_EQ(minimal_polynomial_degree(kI2), 1);
  EXPECT_EQ(minimal_polynomial_degree(kZero2), 1);
  EXPECT_EQ(minimal_polynomial_degree(diag2(2, 1)), 2);
  // Nilpotent Jordan block of size 3: x^3.
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(3, 3);
  j(0, 1) = j(1, 2) = 1.0;
  EXPECT_EQ(minimal_polynomial_degree(j), 3);
}

// Independent Krylov-rank oracle: the smallest q with vec(A^q) in the span of
// the lower powers, checked one degree at a time.
TEST(MinimalPolynomial, AgreesWithIncrementalRankOracle) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.uniform_int(1, 6);
    // Repeated eigenvalues lower the degree below n.
    Eigen::VectorXd eig(n);
    const int distinct = rng.uniform_int(1, n);
    for (int i = 0; i < n; ++i) eig(i) = 1.0 + (i % distinct);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(
                                  random_matrix(rng, n, n))
                                  .householderQ();
    const Eigen::MatrixXd a = q * eig.asDiagonal() * q.transpose();
    Eigen::MatrixXd stacked(n * n, 0);
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
    int oracle = n;
    for (int k = 0; k <= n; ++k) {
      stacked.conservativeResize(n * n, k + 1);
      stacked.col(k) = Eigen::Map<const Eigen::VectorXd>(p.data(), n * n) /
                       p.norm();
      if (numerical_rank(stacked, 1e-8) <= k) {
        oracle = k;
        break;
      }
      p = p * a;
    }
    EXPECT_EQ(minimal_polynomial_degree(a, 1e-8), oracle);
    EXPECT_EQ(oracle, distinct);
  }
}

TEST(SparseControllability, Examples) {
  EXPECT_TRUE(is_sparse_controllable(LinearSystem(kI2, kI2), 1).sparse_controllable);
  const auto zero1 = is_sparse_controllable(LinearSystem(kZero2, kI2), 1);
  EXPECT_FALSE(zero1.sparse_controllable);
  EXPECT_EQ(zero1.rank_a, 0);
  EXPECT_EQ(zero1.controllability_rank, 2);
  EXPECT_TRUE(is_sparse_controllable(LinearSystem(kZero2, kI2), 2).sparse_controllable);
  EXPECT_THROW(is_sparse_controllable(LinearSystem(kI2, kI2), 0), InvalidArgument);
  EXPECT_THROW(is_sparse_controllable(LinearSystem(kI2, kI2), 3), InvalidArgument);
  // Uncontrollable pair: B hits only the first coordinate of a diagonal A.
  EXPECT_FALSE(is_sparse_controllable(
                   LinearSystem(diag2(2, 1), Eigen::MatrixXd(Eigen::Vector2d::UnitX())), 1)
                   .sparse_controllable);
}

TEST(SparseControllability, IdentityInputIsControllableAboveRankDeficit) {
  Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.uniform_int(2, 6);
    const int r = rng.uniform_int(0, n);
    const Eigen::MatrixXd a =
        random_matrix(rng, n, r) * random_matrix(rng, r, n);
    const LinearSystem sys(a, Eigen::MatrixXd::Identity(n, n));
    const int deficit = n - numerical_rank(a);
    for (int s = std::max(1, deficit); s <= n; ++s) {
      EXPECT_TRUE(is_sparse_controllable(sys, s).sparse_controllable);
    }
  }
}

TEST(HorizonBounds, Examples) {
  const HorizonBounds ident = horizon_bounds(LinearSystem(kI2, kI2), 1);
  EXPECT_EQ(ident.lower, 2);
  EXPECT_EQ(ident.upper, 2);
  const HorizonBounds d = horizon_bounds(LinearSystem(diag2(2, 1), kI2), 2);
  EXPECT_EQ(d.lower, 1);
  EXPECT_EQ(d.upper, 1);
  EXPECT_THROW(horizon_bounds(LinearSystem(kZero2, kI2), 1), Infeasible);
}

TEST(HorizonBounds, CyclicShiftOfTwenty) {
  // The cyclic permutation has minimal polynomial x^20 - 1.
  const int n = 20;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) a((i + 1) % n, i) = 1.0;
  EXPECT_EQ(minimal_polynomial_degree(a), 20);
  const HorizonBounds hb =
      horizon_bounds(LinearSystem(a, Eigen::MatrixXd::Identity(n, n)), 5);
  EXPECT_EQ(hb.lower, 4);
  EXPECT_EQ(hb.upper, 16);
}

}  // namespace
}  // namespace sparse_sched
