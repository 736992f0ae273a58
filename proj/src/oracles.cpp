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

#include "sparse_sched/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "sparse_sched/error.hpp"
#include "sparse_sched/random.hpp"

namespace sparse_sched {
namespace {

constexpr double kRatioTolerance = 1e-9;

// All subsets of {1..m} of size exactly s (or 0..s), lexicographic.
std::vector<std::vector<int>> step_subsets(int m, int s, bool smaller) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  std::function<void(int)> rec = [&](int next) {
    const int size = static_cast<int>(current.size());
    if (size == s || (smaller && size <= s)) out.push_back(current);
    if (size == s) return;
    for (int j = next; j <= m; ++j) {
      current.push_back(j);
      rec(j + 1);
      current.pop_back();
    }
  };
  rec(1);
  return out;
}

std::uint64_t binomial(int m, int k) {
  if (k < 0 || k > m) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(m - k + i) / i;
  return r;
}

// trace((W + eps I)^{-1}) or, for eps = 0, trace(W^{-1}) when W is full rank.
std::optional<double> objective(const Eigen::MatrixXd& w, double epsilon) {
  if (epsilon > 0.0) return epsilon_auxiliary_energy(w, epsilon);
  return inverse_trace(w);
}

// E(T) - E(T + v) for M = (W_T + eps I)^{-1}, computed in closed form
// (no cancellation between two nearly equal traces).
double marginal(const Eigen::MatrixXd& m, const Eigen::VectorXd& v) {
  const Eigen::VectorXd mv = m * v;
  return mv.squaredNorm() / (1.0 + v.dot(mv));
}

Eigen::MatrixXd set_gramian(const CandidateVectors& cand,
                            const std::vector<int>& members) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(cand.n(), cand.n());
  for (int i : members) {
    const auto v = cand.matrix().col(i);
    w.noalias() += v * v.transpose();
  }
  return w;
}

std::string mask_string(std::uint64_t mask) {
  std::ostringstream os;
  os << "0x" << std::hex << mask;
  return os.str();
}

int popcount(std::uint64_t x) { return std::popcount(x); }

std::uint64_t random_independent(Rng& rng, int universe,
                                 const IndependenceOracle& independent) {
  std::vector<int> order(universe);
  std::iota(order.begin(), order.end(), 0);
  for (int i = universe - 1; i > 0; --i) {
    std::swap(order[i], order[rng.uniform_int(0, i)]);
  }
  const int target = rng.uniform_int(0, universe);
  std::uint64_t set = 0;
  for (int e : order) {
    if (popcount(set) >= target) break;
    const std::uint64_t with = set | (std::uint64_t{1} << e);
    if (independent(with)) set = with;
  }
  return set;
}

std::uint64_t random_submask(Rng& rng, std::uint64_t mask) {
  std::uint64_t out = 0;
  for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1) {
    const std::uint64_t bit = rest & (~rest + 1);
    if (rng.next() & 1) out |= bit;
  }
  return out;
}

// Exchange property for one ordered pair (|big| > |small|).
bool exchange_holds(std::uint64_t small, std::uint64_t big,
                    const IndependenceOracle& independent) {
  for (std::uint64_t rest = big & ~small; rest != 0; rest &= rest - 1) {
    const std::uint64_t bit = rest & (~rest + 1);
    if (independent(small | bit)) return true;
  }
  return false;
}

}  // namespace

std::uint64_t brute_force_enumeration_size(int m, int s, int horizon,
                                           bool include_smaller_subsets) {
  std::uint64_t per_step = 0;
  for (int k = include_smaller_subsets ? 0 : s; k <= s; ++k) {
    per_step += binomial(m, k);
  }
  std::uint64_t total = 1;
  for (int t = 0; t < horizon; ++t) {
    if (per_step != 0 &&
        total > std::numeric_limits<std::uint64_t>::max() / per_step) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= per_step;
  }
  return total;
}

BruteForceResult brute_force_optimal_schedule(const LinearSystem& sys, int s,
                                              double epsilon, int horizon,
                                              const BruteForceOptions& options) {
  if (s < 1 || s > sys.m()) throw InvalidArgument("need 1 <= s <= m");
  if (horizon < 1) throw InvalidArgument("horizon must be >= 1");
  if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be >= 0");
  const std::uint64_t size = brute_force_enumeration_size(
      sys.m(), s, horizon, options.include_smaller_subsets);
  if (size > options.max_enumeration) {
    throw InvalidArgument("brute-force enumeration of " + std::to_string(size) +
                          " schedules exceeds the guard of " +
                          std::to_string(options.max_enumeration));
  }

  const auto subsets = step_subsets(sys.m(), s, options.include_smaller_subsets);
  // blocks[t][i]: Gramian contribution of subset i at step t.
  std::vector<std::vector<Eigen::MatrixXd>> blocks(horizon);
  for (int t = 0; t < horizon; ++t) {
    const Eigen::MatrixXd p = sys.power(horizon - 1 - t);
    for (const auto& subset : subsets) {
      Eigen::MatrixXd g = Eigen::MatrixXd::Zero(sys.n(), sys.n());
      for (int j : subset) {
        const Eigen::VectorXd v = p * sys.b().col(j - 1);
        g.noalias() += v * v.transpose();
      }
      blocks[t].push_back(std::move(g));
    }
  }

  BruteForceResult best;
  best.value = std::numeric_limits<double>::infinity();
  bool found = false;
  std::vector<int> choice(horizon, 0);
  std::vector<Eigen::MatrixXd> partial(
      horizon + 1, Eigen::MatrixXd::Zero(sys.n(), sys.n()));
  std::function<void(int)> rec = [&](int t) {
    if (t == horizon) {
      ++best.enumerated;
      const Eigen::MatrixXd w = 0.5 * (partial[t] + partial[t].transpose());
      const std::optional<double> value = objective(w, epsilon);
      if (value && *value < best.value) {
        best.value = *value;
        std::vector<std::vector<int>> steps(horizon);
        for (int k = 0; k < horizon; ++k) steps[k] = subsets[choice[k]];
        best.schedule = ActuatorSchedule(s, std::move(steps));
        found = true;
      }
      return;
    }
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      choice[t] = static_cast<int>(i);
      partial[t + 1] = partial[t] + blocks[t][i];
      rec(t + 1);
    }
  };
  rec(0);
  if (!found) {
    throw Infeasible("not " + std::to_string(s) +
                     "-sparse controllable at K = " + std::to_string(horizon) +
                     ": no schedule yields a full-rank Gramian");
  }
  return best;
}

BruteForceCache::BruteForceCache(std::filesystem::path dir)
    : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::uint64_t BruteForceCache::key(const LinearSystem& sys, int s,
                                   double epsilon, int horizon,
                                   const BruteForceOptions& options) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  const int dims[2] = {sys.n(), sys.m()};
  mix(dims, sizeof(dims));
  mix(sys.a().data(), sizeof(double) * static_cast<std::size_t>(sys.a().size()));
  mix(sys.b().data(), sizeof(double) * static_cast<std::size_t>(sys.b().size()));
  const int params[3] = {s, horizon, options.include_smaller_subsets ? 1 : 0};
  mix(params, sizeof(params));
  mix(&epsilon, sizeof(epsilon));
  return h;
}

BruteForceResult BruteForceCache::get_or_compute(
    const LinearSystem& sys, int s, double epsilon, int horizon,
    const BruteForceOptions& options) {
  const std::uint64_t k = key(sys, s, epsilon, horizon, options);
  const std::filesystem::path file = dir_ / (mask_string(k) + ".json");
  if (std::ifstream in(file); in) {
    try {
      const nlohmann::json j = nlohmann::json::parse(in);
      BruteForceResult r;
      r.value = j.at("value").get<double>();
      r.enumerated = j.at("enumerated").get<std::uint64_t>();
      r.schedule = ActuatorSchedule(
          j.at("s").get<int>(),
          j.at("steps").get<std::vector<std::vector<int>>>());
      ++hits_;
      return r;
    } catch (const nlohmann::json::exception&) {
      // Unreadable entry: recompute and overwrite.
    }
  }
  ++misses_;
  BruteForceResult r =
      brute_force_optimal_schedule(sys, s, epsilon, horizon, options);
  nlohmann::json j;
  j["value"] = r.value;
  j["enumerated"] = r.enumerated;
  j["s"] = r.schedule.sparsity();
  j["steps"] = r.schedule.steps();
  std::ofstream(file) << j.dump() << '\n';
  return r;
}

double alpha_lower_bound(const LinearSystem& sys, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
  const Eigen::MatrixXd w = fully_actuated_gramian(sys);
  const double lmax =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(w, Eigen::EigenvaluesOnly)
          .eigenvalues()
          .maxCoeff();
  return epsilon / (epsilon + lmax);
}

SupermodularityReport check_supermodularity(const LinearSystem& sys,
                                            double epsilon, int trials,
                                            std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
  if (trials < 0) throw InvalidArgument("trials must be >= 0");
  const CandidateVectors cand(sys);
  const int universe = sys.n() * sys.m();
  SupermodularityReport report;
  report.alpha_bound = alpha_lower_bound(sys, epsilon);
  Rng rng(derive_seed(seed, SeedStream::kSupermodularity, 0));
  std::vector<int> order(universe);
  for (int trial = 0; trial < trials; ++trial) {
    ++report.trials;
    std::iota(order.begin(), order.end(), 0);
    // Partial shuffle: order[0] is e, order[1..size_b] is B, and the first
    // size_a of those are A.
    const int size_b = rng.uniform_int(0, universe - 1);
    const int size_a = rng.uniform_int(0, size_b);
    for (int i = 0; i <= size_b; ++i) {
      std::swap(order[i], order[rng.uniform_int(i, universe - 1)]);
    }
    const int e = order[0];
    const std::vector<int> set_a(order.begin() + 1, order.begin() + 1 + size_a);
    const std::vector<int> extra(order.begin() + 1 + size_a,
                                 order.begin() + 1 + size_b);

    const Eigen::MatrixXd w_a = set_gramian(cand, set_a);
    const Eigen::MatrixXd w_b = w_a + set_gramian(cand, extra);
    const Eigen::VectorXd v = cand.matrix().col(e);
    const double gain_a = marginal(shifted_inverse(w_a, epsilon), v);
    const double gain_b = marginal(shifted_inverse(w_b, epsilon), v);
    if (!(gain_b > 0.0)) continue;
    ++report.evaluated;
    const double ratio = gain_a / gain_b;
    report.min_ratio = std::min(report.min_ratio, ratio);
    if (ratio < report.alpha_bound - kRatioTolerance) ++report.violations;
  }
  return report;
}

MatroidReport check_matroid_axioms(int universe_size,
                                   const IndependenceOracle& independent,
                                   int trials, std::uint64_t seed,
                                   bool exhaustive) {
  if (universe_size < 0 || universe_size > 64) {
    throw InvalidArgument("universe must have at most 64 elements");
  }
  MatroidReport report;
  report.exhaustive = exhaustive;
  auto fail = [&report](std::string what) {
    report.ok = false;
    report.counterexample = std::move(what);
    return report;
  };

  ++report.checks;
  if (!independent(0)) return fail("empty set is not independent");

  if (exhaustive) {
    if (universe_size > 12) {
      throw InvalidArgument("exhaustive matroid check limited to 12 elements");
    }
    std::vector<std::uint64_t> family;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << universe_size);
         ++mask) {
      if (independent(mask)) family.push_back(mask);
    }
    for (std::uint64_t set : family) {
      for (std::uint64_t sub = set;; sub = (sub - 1) & set) {
        ++report.checks;
        if (!independent(sub)) {
          return fail("subset " + mask_string(sub) + " of independent " +
                      mask_string(set) + " is dependent");
        }
        if (sub == 0) break;
      }
    }
    for (std::uint64_t small : family) {
      for (std::uint64_t big : family) {
        if (popcount(big) <= popcount(small)) continue;
        ++report.checks;
        if (!exchange_holds(small, big, independent)) {
          return fail("no exchange element from " + mask_string(big) +
                      " into " + mask_string(small));
        }
      }
    }
    return report;
  }

  Rng rng(derive_seed(seed, SeedStream::kMatroid, 0));
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t t1 = random_independent(rng, universe_size, independent);
    const std::uint64_t sub = random_submask(rng, t1);
    ++report.checks;
    if (!independent(sub)) {
      return fail("subset " + mask_string(sub) + " of independent " +
                  mask_string(t1) + " is dependent");
    }
    const std::uint64_t t2 = random_independent(rng, universe_size, independent);
    if (popcount(t1) == popcount(t2)) continue;
    const std::uint64_t small = popcount(t1) < popcount(t2) ? t1 : t2;
    const std::uint64_t big = popcount(t1) < popcount(t2) ? t2 : t1;
    ++report.checks;
    if (!exchange_holds(small, big, independent)) {
      return fail("no exchange element from " + mask_string(big) + " into " +
                  mask_string(small));
    }
  }
  return report;
}

IndependenceOracle per_step_cap_oracle(int n, int m, int s) {
  return [n, m, s](std::uint64_t mask) {
    for (int k = 0; k < n; ++k) {
      const std::uint64_t row =
          (mask >> (k * m)) & ((std::uint64_t{1} << m) - 1);
      if (popcount(row) > s) return false;
    }
    return true;
  };
}

namespace {

// Sampled axiom check for universes too large for bitmasks. Sets are
// membership vectors; independence is evaluated from per-step counts.
MatroidReport check_large_cap_family(int n, int m, int s, int trials,
                                     std::uint64_t seed) {
  const int universe = n * m;
  auto counts_of = [n, m](const std::vector<char>& set) {
    std::vector<int> counts(n, 0);
    for (int e = 0; e < n * m; ++e) counts[e / m] += set[e];
    return counts;
  };
  auto independent = [&](const std::vector<char>& set) {
    for (int c : counts_of(set)) {
      if (c > s) return false;
    }
    return true;
  };
  auto sample = [&](Rng& rng) {
    std::vector<int> order(universe);
    std::iota(order.begin(), order.end(), 0);
    for (int i = universe - 1; i > 0; --i) {
      std::swap(order[i], order[rng.uniform_int(0, i)]);
    }
    const int target = rng.uniform_int(0, universe);
    std::vector<char> set(universe, 0);
    std::vector<int> counts(n, 0);
    int size = 0;
    for (int e : order) {
      if (size >= target) break;
      if (counts[e / m] < s) {
        set[e] = 1;
        ++counts[e / m];
        ++size;
      }
    }
    return std::pair{set, size};
  };

  MatroidReport report;
  ++report.checks;
  if (!independent(std::vector<char>(universe, 0))) {
    report.ok = false;
    report.counterexample = "empty set is not independent";
    return report;
  }
  Rng rng(derive_seed(seed, SeedStream::kMatroid, 0));
  for (int trial = 0; trial < trials; ++trial) {
    auto [t1, size1] = sample(rng);
    std::vector<char> sub = t1;
    for (auto& bit : sub) bit = bit && (rng.next() & 1);
    ++report.checks;
    if (!independent(t1) || !independent(sub)) {
      report.ok = false;
      report.counterexample = "sampled subset of an independent set is dependent";
      return report;
    }
    auto [t2, size2] = sample(rng);
    if (size1 == size2) continue;
    const auto& small = size1 < size2 ? t1 : t2;
    const auto& big = size1 < size2 ? t2 : t1;
    // Adding e changes only the count of e's step.
    const std::vector<int> counts = counts_of(small);
    bool found = false;
    for (int e = 0; e < universe && !found; ++e) {
      found = big[e] && !small[e] && counts[e / m] + 1 <= s;
    }
    ++report.checks;
    if (!found) {
      report.ok = false;
      report.counterexample = "no exchange element in trial " +
                              std::to_string(trial);
      return report;
    }
  }
  return report;
}

}  // namespace

MatroidReport check_matroid_exchange(int n, int m, int s, int trials,
                                     std::uint64_t seed, bool exhaustive) {
  if (n < 1 || m < 1) throw InvalidArgument("matroid check needs n, m >= 1");
  if (trials < 0) throw InvalidArgument("trials must be >= 0");
  if (n * m > 63) {
    if (exhaustive) {
      throw InvalidArgument("exhaustive matroid check limited to 12 elements");
    }
    return check_large_cap_family(n, m, s, trials, seed);
  }
  return check_matroid_axioms(n * m, per_step_cap_oracle(n, m, s), trials,
                              seed, exhaustive);
}

double greedy_additive_bound(int n, double alpha, double epsilon,
                             double e_star) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
  const double beta = std::min(alpha / 2.0, alpha / (1.0 + alpha));
  return (1.0 - beta) * n / epsilon + beta * e_star;
}

double greedy_additive_bound(const LinearSystem& sys, double epsilon,
                             double e_star) {
  return greedy_additive_bound(sys.n(), alpha_lower_bound(sys, epsilon),
                               epsilon, e_star);
}

AdditiveBoundCheck check_additive_bound(const LinearSystem& sys, int s,
                                        double epsilon,
                                        const BruteForceOptions& options) {
  AdditiveBoundCheck check;
  check.epsilon = epsilon;
  check.e_star =
      brute_force_optimal_schedule(sys, s, 0.0, sys.n(), options).value;
  GreedyConfig cfg;
  cfg.sparsity = s;
  const InnerResult inner = greedy_inner(sys, cfg, epsilon);
  // Recomputed directly rather than read from the incrementally updated
  // inverse, so the check does not trust the scheduler's own bookkeeping.
  check.greedy_value = epsilon_auxiliary_energy(inner.state.gramian, epsilon);
  check.alpha = alpha_lower_bound(sys, epsilon);
  check.bound =
      greedy_additive_bound(sys.n(), check.alpha, epsilon, check.e_star);
  check.holds = check.greedy_value < check.bound;
  return check;
}

double rank_progress_epsilon_threshold(double lambda1_tilde,
                                       double lambda_hat_r1, int r) {
  if (!(lambda1_tilde > 0.0) || !(lambda_hat_r1 > 0.0)) {
    throw InvalidArgument("eigenvalue inputs must be positive");
  }
  if (r < 0) throw InvalidArgument("rank must be >= 0");
  const double denom = r * lambda1_tilde - (r + 1) * lambda_hat_r1;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return lambda1_tilde * lambda_hat_r1 / denom;
}

RankProgressAnalysis analyze_rank_progress(const GreedyEngine& engine,
                                           double rank_tol) {
  const CandidateVectors& cand = engine.candidate_vectors();
  const Eigen::MatrixXd& w = engine.gramian();
  const int n = cand.n();
  RankProgressAnalysis a;
  a.rank = numerical_rank(w, rank_tol);
  a.lambda_hat = std::numeric_limits<double>::infinity();
  for (const IndexPair& p : engine.candidates()) {
    const Eigen::VectorXd v = cand.vector(p);
    const Eigen::MatrixXd next = w + v * v.transpose();
    const Eigen::VectorXd eig =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(next,
                                                       Eigen::EigenvaluesOnly)
            .eigenvalues();  // ascending
    if (numerical_rank(next, rank_tol) > a.rank) {
      a.has_rank_increasing = true;
      a.lambda_hat = std::min(a.lambda_hat, eig(n - 1 - a.rank));
    } else {
      a.has_rank_preserving = true;
      a.lambda1_tilde = std::max(a.lambda1_tilde, eig(n - 1));
    }
  }
  if (!a.has_rank_increasing) {
    a.lambda_hat = 0.0;
    a.threshold = 0.0;
  } else if (!a.has_rank_preserving || a.rank == 0 ||
             !(a.lambda1_tilde > 0.0)) {
    a.threshold = std::numeric_limits<double>::infinity();
  } else {
    a.threshold =
        rank_progress_epsilon_threshold(a.lambda1_tilde, a.lambda_hat, a.rank);
  }
  return a;
}

RankProgressRunReport check_rank_progress_along_run(const LinearSystem& sys,
                                                    int s, double epsilon,
                                                    double rank_tol) {
  const CandidateVectors cand(sys);
  GreedyEngine engine(cand, s, epsilon);
  RankProgressRunReport report;
  while (!engine.done()) {
    const RankProgressAnalysis a = analyze_rank_progress(engine, rank_tol);
    engine.pick_next();
    ++report.picks;
    if (a.has_rank_increasing && epsilon < a.threshold) {
      ++report.applicable;
      if (numerical_rank(engine.gramian(), rank_tol) <= a.rank) {
        ++report.violations;
      }
    }
  }
  return report;
}

}  // namespace sparse_sched
