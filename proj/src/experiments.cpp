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

#include "sparse_sched/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "sparse_sched/baselines.hpp"
#include "sparse_sched/error.hpp"
#include "sparse_sched/gramian.hpp"
#include "sparse_sched/parallel.hpp"
#include "sparse_sched/random.hpp"

namespace sparse_sched {
namespace {

const std::vector<std::string>& known_modes() {
  static const std::vector<std::string> modes{
      kModeTimeVarying, kModeTimeInvariant, kModeUnconstrained, kModeRandom,
      kModeTraceMax};
  return modes;
}

std::vector<std::string> modes_or(const ExperimentConfig& cfg,
                                  std::vector<std::string> fallback) {
  return cfg.scheduler_modes.empty() ? std::move(fallback) : cfg.scheduler_modes;
}

GreedyConfig greedy_config(const ExperimentConfig& cfg, int s,
                           ScheduleMode mode) {
  GreedyConfig g;
  g.sparsity = s;
  g.epsilon0 = cfg.epsilon0;
  g.decay = cfg.decay;
  g.max_outer = cfg.max_outer;
  g.mode = mode;
  return g;
}

LinearSystem trial_system(const ExperimentConfig& cfg, int n,
                          std::uint64_t index, InputMode b_mode) {
  return LinearSystem(
      erdos_renyi_system(n, derive_seed(cfg.seed, SeedStream::kGraph, index),
                         cfg.log_base),
      random_input_matrix(
          n, cfg.m, b_mode,
          derive_seed(cfg.seed, SeedStream::kInputMatrix, index)));
}

// Outcome of one scheduler on one system: trace(W_S^{-1}) or rank failure.
std::optional<double> run_mode(const LinearSystem& sys,
                               const ExperimentConfig& cfg,
                               const std::string& mode, int s,
                               std::uint64_t random_seed) {
  ActuatorSchedule schedule;
  if (mode == kModeUnconstrained || s == sys.m()) {
    // With s = m every scheduler fills every slot: the full schedule.
    if (mode == kModeTimeInvariant || mode == kModeTimeVarying ||
        mode == kModeUnconstrained || mode == kModeTraceMax ||
        mode == kModeRandom) {
      schedule = ActuatorSchedule::full(sys.m(), sys.n());
    }
  }
  if (schedule.horizon() == 0) {
    if (mode == kModeTimeVarying) {
      const GreedyResult r =
          greedy_schedule(sys, greedy_config(cfg, s, ScheduleMode::kTimeVarying));
      if (!r.full_rank) return std::nullopt;
      schedule = r.schedule;
    } else if (mode == kModeTimeInvariant) {
      const GreedyResult r = greedy_schedule(
          sys, greedy_config(cfg, s, ScheduleMode::kTimeInvariant));
      if (!r.full_rank) return std::nullopt;
      schedule = r.schedule;
    } else if (mode == kModeRandom) {
      schedule = random_schedule(sys, s, random_seed);
    } else if (mode == kModeTraceMax) {
      schedule = greedy_trace_max_schedule(sys, s);
    } else {
      throw InvalidArgument("unknown scheduler mode '" + mode + "'");
    }
  }
  if (schedule.sparsity() > std::max(s, mode == kModeUnconstrained ? sys.m() : s)) {
    throw NumericalError("scheduler '" + mode + "' violated the sparsity cap");
  }
  return schedule_energy(sys, schedule);
}

double mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

}  // namespace

Eigen::MatrixXd erdos_renyi_laplacian(int n, std::uint64_t seed,
                                      double log_base) {
  if (n < 2) throw InvalidArgument("Erdos-Renyi graph needs n >= 2");
  if (!(log_base > 1.0)) throw InvalidArgument("log base must be > 1");
  const double p = std::min(1.0, 2.0 * std::log(n) / std::log(log_base) / n);
  Rng rng(seed);
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform01() < p) {
        lap(i, j) = lap(j, i) = -1.0;
        lap(i, i) += 1.0;
        lap(j, j) += 1.0;
      }
    }
  }
  return lap;
}

Eigen::MatrixXd erdos_renyi_system(int n, std::uint64_t seed,
                                   double log_base) {
  return Eigen::MatrixXd::Identity(n, n) -
         erdos_renyi_laplacian(n, seed, log_base) / static_cast<double>(n);
}

Eigen::MatrixXd random_input_matrix(int n, int m, InputMode mode,
                                    std::uint64_t seed) {
  if (n < 1 || m < 1) throw InvalidArgument("input matrix needs n, m >= 1");
  switch (mode) {
    case InputMode::kIdentity:
      if (n != m) {
        throw InvalidArgument("identity input matrix needs n == m, got n = " +
                              std::to_string(n) + ", m = " + std::to_string(m));
      }
      return Eigen::MatrixXd::Identity(n, m);
    case InputMode::kUniform01:
    case InputMode::kGaussian: {
      Rng rng(seed);
      Eigen::MatrixXd b(n, m);
      // Row-major fill so the draw order matches the on-disk layout.
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
          b(i, j) = mode == InputMode::kUniform01 ? rng.uniform01()
                                                  : rng.normal();
        }
      }
      return b;
    }
  }
  throw InvalidArgument("unknown input mode");
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw InvalidArgument("trials must be >= 1");
  if (cfg.n < 2 || cfg.m < 1) throw InvalidArgument("need n >= 2 and m >= 1");
  for (int n : cfg.n_values) {
    if (n < 2) throw InvalidArgument("n_values entries must be >= 2");
  }
  if (cfg.sparsity_levels.empty()) {
    throw InvalidArgument("sparsity_levels must not be empty");
  }
  for (int s : cfg.sparsity_levels) {
    if (s < 1 || s > cfg.m) {
      throw InvalidArgument("sparsity level " + std::to_string(s) +
                            " outside [1, m = " + std::to_string(cfg.m) + "]");
    }
  }
  for (const auto& mode : cfg.scheduler_modes) {
    if (std::find(known_modes().begin(), known_modes().end(), mode) ==
        known_modes().end()) {
      throw InvalidArgument("unknown scheduler mode '" + mode + "'");
    }
  }
  if (cfg.random_draws < 1) throw InvalidArgument("random_draws must be >= 1");
  if (!(cfg.epsilon0 > 0.0) || !(cfg.decay > 1.0) || cfg.max_outer < 1) {
    throw InvalidArgument("need eps0 > 0, c > 1 and max_outer >= 1");
  }
}

std::optional<double> schedule_energy(const LinearSystem& sys,
                                      const ActuatorSchedule& schedule) {
  return inverse_trace(schedule_gramian(sys, schedule));
}

std::vector<CdfRow> run_cdf_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const InputMode b_mode = cfg.b_mode.value_or(InputMode::kIdentity);
  const std::vector<std::string> modes = modes_or(
      cfg, {kModeTimeVarying, kModeTimeInvariant, kModeUnconstrained});

  std::vector<std::vector<CdfRow>> per_trial(cfg.trials);
  parallel_for(cfg.trials, [&](std::size_t t) {
    const LinearSystem sys = trial_system(cfg, cfg.n, t, b_mode);
    const std::uint64_t rseed =
        derive_seed(cfg.seed, SeedStream::kRandomSchedule, t);
    std::optional<std::optional<double>> unconstrained;
    for (int s : cfg.sparsity_levels) {
      for (const auto& mode : modes) {
        std::optional<double> energy;
        if (mode == kModeUnconstrained) {
          if (!unconstrained) {
            unconstrained = run_mode(sys, cfg, mode, sys.m(), rseed);
          }
          energy = *unconstrained;
        } else {
          energy = run_mode(sys, cfg, mode, s, rseed);
        }
        CdfRow row;
        row.trial = static_cast<int>(t);
        row.s = s;
        row.mode = mode;
        row.rank_ok = energy.has_value();
        if (energy) row.value_db = 10.0 * std::log10(*energy);
        per_trial[t].push_back(std::move(row));
      }
    }
  });

  std::vector<CdfRow> rows;
  for (auto& chunk : per_trial) {
    for (auto& row : chunk) rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RatioRow> run_energy_ratio_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const InputMode b_mode = cfg.b_mode.value_or(InputMode::kUniform01);
  const std::vector<int> n_values =
      cfg.n_values.empty() ? std::vector<int>{cfg.n} : cfg.n_values;
  const std::size_t levels = cfg.sparsity_levels.size();

  std::vector<RatioRow> rows;
  for (int n : n_values) {
    // energies[t][0] is full actuation, energies[t][1 + i] level i.
    std::vector<std::vector<std::optional<double>>> energies(
        cfg.trials, std::vector<std::optional<double>>(levels + 1));
    parallel_for(cfg.trials, [&](std::size_t t) {
      const std::uint64_t index = (static_cast<std::uint64_t>(n) << 32) | t;
      const LinearSystem sys = trial_system(cfg, n, index, b_mode);
      energies[t][0] =
          schedule_energy(sys, ActuatorSchedule::full(sys.m(), sys.n()));
      for (std::size_t i = 0; i < levels; ++i) {
        energies[t][i + 1] =
            run_mode(sys, cfg, kModeTimeVarying, cfg.sparsity_levels[i], 0);
      }
    });
    for (std::size_t i = 0; i < levels; ++i) {
      RatioRow row;
      row.n = n;
      row.s = cfg.sparsity_levels[i];
      row.s_over_m = static_cast<double>(row.s) / cfg.m;
      std::vector<double> sparse, full;
      for (int t = 0; t < cfg.trials; ++t) {
        if (energies[t][0] && energies[t][i + 1]) {
          full.push_back(*energies[t][0]);
          sparse.push_back(*energies[t][i + 1]);
        } else {
          ++row.rank_failures;
        }
      }
      if (!full.empty()) {
        row.rho = mean(sparse) / mean(full);
        if (*row.rho < 1.0 - 1e-9) {
          throw NumericalError("energy ratio below 1 at n = " +
                               std::to_string(n) + ", s = " +
                               std::to_string(row.s));
        }
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<BaselineRow> run_baseline_comparison(const ExperimentConfig& cfg) {
  validate(cfg);
  const InputMode b_mode = cfg.b_mode.value_or(InputMode::kUniform01);
  const std::vector<std::string> methods =
      modes_or(cfg, {kModeTimeVarying, kModeRandom, kModeTraceMax});
  const std::size_t levels = cfg.sparsity_levels.size();

  // outcomes[t][level][method]: one value per draw (random) or one total.
  // Random at s = m has a single outcome, the full schedule.
  using Outcomes = std::vector<std::optional<double>>;
  std::vector<std::vector<std::vector<Outcomes>>> outcomes(
      cfg.trials, std::vector<std::vector<Outcomes>>(
                      levels, std::vector<Outcomes>(methods.size())));
  parallel_for(cfg.trials, [&](std::size_t t) {
    const LinearSystem sys = trial_system(cfg, cfg.n, t, b_mode);
    for (std::size_t i = 0; i < levels; ++i) {
      const int s = cfg.sparsity_levels[i];
      for (std::size_t k = 0; k < methods.size(); ++k) {
        if (methods[k] == kModeRandom && s < sys.m()) {
          const EnsembleSummary ens = random_schedule_ensemble_energy(
              sys, s, cfg.random_draws,
              derive_seed(cfg.seed, SeedStream::kRandomSchedule, t));
          for (const auto& r : ens.rows) outcomes[t][i][k].push_back(r.trace_inv);
        } else {
          outcomes[t][i][k].push_back(run_mode(sys, cfg, methods[k], s, 0));
        }
      }
    }
  });

  std::vector<BaselineRow> rows;
  for (std::size_t i = 0; i < levels; ++i) {
    for (std::size_t k = 0; k < methods.size(); ++k) {
      std::vector<double> values;
      int total = 0;
      int failures = 0;
      for (int t = 0; t < cfg.trials; ++t) {
        for (const auto& v : outcomes[t][i][k]) {
          ++total;
          if (v) {
            values.push_back(*v);
          } else {
            ++failures;
          }
        }
      }
      BaselineRow row;
      row.s = cfg.sparsity_levels[i];
      row.method = methods[k];
      if (!values.empty()) row.mean_trace_inv = mean(values);
      row.rank_failure_fraction = static_cast<double>(failures) / total;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace sparse_sched
