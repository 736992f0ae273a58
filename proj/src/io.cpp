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

#include "sparse_sched/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "sparse_sched/error.hpp"

namespace sparse_sched::io {
namespace {

template <typename T>
T get_field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidArgument(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad field '") + key + "': " + e.what());
  }
}

Eigen::MatrixXd row_major_matrix(const Json& j, const char* key, int rows,
                                 int cols) {
  const auto flat = get_field<std::vector<double>>(j, key);
  if (flat.size() != static_cast<std::size_t>(rows) * cols) {
    throw InvalidArgument(std::string("field '") + key + "' has " +
                          std::to_string(flat.size()) + " entries, expected " +
                          std::to_string(rows * cols));
  }
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < cols; ++k) m(i, k) = flat[i * cols + k];
  }
  return m;
}

std::vector<double> flatten_row_major(const Eigen::MatrixXd& m) {
  std::vector<double> flat;
  flat.reserve(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) flat.push_back(m(i, k));
  }
  return flat;
}

std::string optional_field(const std::optional<double>& x) {
  return x ? format_double(*x) : std::string();
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << contents;
  if (!out) throw InvalidArgument("write to '" + path + "' failed");
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

Json system_to_json(const LinearSystem& sys) {
  Json j;
  j["n"] = sys.n();
  j["m"] = sys.m();
  j["A"] = flatten_row_major(sys.a());
  j["B"] = flatten_row_major(sys.b());
  return j;
}

LinearSystem system_from_json(const Json& j) {
  const int n = get_field<int>(j, "n");
  const int m = get_field<int>(j, "m");
  if (n < 1 || m < 1) throw InvalidArgument("system needs n, m >= 1");
  return LinearSystem(row_major_matrix(j, "A", n, n),
                      row_major_matrix(j, "B", n, m));
}

LinearSystem read_system(const std::string& path) {
  return system_from_json(read_json_file(path));
}

Json schedule_to_json(const ActuatorSchedule& schedule) {
  Json j;
  j["s"] = schedule.sparsity();
  j["steps"] = schedule.steps();
  return j;
}

ActuatorSchedule schedule_from_json(const Json& j) {
  return ActuatorSchedule(get_field<int>(j, "s"),
                          get_field<std::vector<std::vector<int>>>(j, "steps"));
}

ActuatorSchedule read_schedule(const std::string& path) {
  return schedule_from_json(read_json_file(path));
}

Eigen::VectorXd vector_from_json(const Json& j) {
  std::vector<double> v;
  try {
    v = j.get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("expected an array of reals: ") +
                          e.what());
  }
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

Eigen::VectorXd read_vector(const std::string& path) {
  return vector_from_json(read_json_file(path));
}

Json diagnostics_to_json(const GreedyDiagnostics& diag, bool full_rank) {
  Json j;
  j["outer_iterations"] = diag.outer_iterations;
  j["final_epsilon"] = diag.final_epsilon;
  j["rank_history"] = diag.rank_history;
  j["trace_history"] = diag.trace_history;
  j["final_rank"] = diag.final_rank;
  j["success"] = full_rank;
  j["warnings"] = diag.warnings;
  return j;
}

Json inputs_to_json(const InputSequence& inputs) {
  Json rows = Json::array();
  for (const auto& u : inputs.inputs) {
    rows.push_back(std::vector<double>(u.data(), u.data() + u.size()));
  }
  Json j;
  j["inputs"] = std::move(rows);
  return j;
}

std::string input_mode_name(InputMode mode) {
  switch (mode) {
    case InputMode::kIdentity:
      return "identity";
    case InputMode::kUniform01:
      return "uniform01";
    case InputMode::kGaussian:
      return "gaussian";
  }
  return "unknown";
}

InputMode parse_input_mode(const std::string& name) {
  if (name == "identity") return InputMode::kIdentity;
  if (name == "uniform01") return InputMode::kUniform01;
  if (name == "gaussian") return InputMode::kGaussian;
  throw InvalidArgument("unknown b_mode '" + name + "'");
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    const char* k = key.c_str();
    if (key == "n") {
      cfg.n = get_field<int>(j, k);
    } else if (key == "m") {
      cfg.m = get_field<int>(j, k);
    } else if (key == "n_values") {
      cfg.n_values = get_field<std::vector<int>>(j, k);
    } else if (key == "sparsity_levels") {
      cfg.sparsity_levels = get_field<std::vector<int>>(j, k);
    } else if (key == "trials") {
      cfg.trials = get_field<int>(j, k);
    } else if (key == "seed") {
      cfg.seed = get_field<std::uint64_t>(j, k);
    } else if (key == "b_mode") {
      cfg.b_mode = parse_input_mode(get_field<std::string>(j, k));
    } else if (key == "scheduler_modes") {
      cfg.scheduler_modes = get_field<std::vector<std::string>>(j, k);
    } else if (key == "output_path") {
      cfg.output_path = get_field<std::string>(j, k);
    } else if (key == "log_base") {
      cfg.log_base = get_field<double>(j, k);
    } else if (key == "random_draws") {
      cfg.random_draws = get_field<int>(j, k);
    } else if (key == "epsilon0") {
      cfg.epsilon0 = get_field<double>(j, k);
    } else if (key == "decay") {
      cfg.decay = get_field<double>(j, k);
    } else if (key == "max_outer") {
      cfg.max_outer = get_field<int>(j, k);
    } else {
      throw InvalidArgument("unknown config field '" + key + "'");
    }
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig read_experiment_config(const std::string& path) {
  return experiment_config_from_json(read_json_file(path));
}

void write_ensemble_csv(std::ostream& out, const std::vector<EnsembleRow>& rows) {
  out << "trial,rank,trace_inv\n";
  for (const auto& r : rows) {
    out << r.trial << ',' << r.rank << ',' << optional_field(r.trace_inv)
        << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  const Eigen::Index n =
      trajectory.states.empty() ? 0 : trajectory.states.front().size();
  out << 'k';
  for (Eigen::Index i = 1; i <= n; ++i) out << ",x_" << i;
  out << '\n';
  for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
    out << k;
    for (Eigen::Index i = 0; i < n; ++i) {
      out << ',' << format_double(trajectory.states[k](i));
    }
    out << '\n';
  }
}

void write_cdf_csv(std::ostream& out, const std::vector<CdfRow>& rows) {
  out << "trial,s,mode,value_db,rank_ok\n";
  for (const auto& r : rows) {
    out << r.trial << ',' << r.s << ',' << r.mode << ','
        << optional_field(r.value_db) << ',' << (r.rank_ok ? "true" : "false")
        << '\n';
  }
}

void write_ratio_csv(std::ostream& out, const std::vector<RatioRow>& rows) {
  out << "n,s,s_over_m,rho,rank_failures\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.s << ',' << format_double(r.s_over_m) << ','
        << optional_field(r.rho) << ',' << r.rank_failures << '\n';
  }
}

void write_baseline_csv(std::ostream& out, const std::vector<BaselineRow>& rows) {
  out << "s,method,mean_trace_inv,rank_failure_fraction\n";
  for (const auto& r : rows) {
    out << r.s << ',' << r.method << ',' << optional_field(r.mean_trace_inv)
        << ',' << format_double(r.rank_failure_fraction) << '\n';
  }
}

}  // namespace sparse_sched::io
