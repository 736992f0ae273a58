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

// File formats: JSON for structured inputs (systems, schedules, vectors,
// experiment configs), CSV for tabular results.
//
//   system    {"n": n, "m": m, "A": [n*n, row-major], "B": [n*m, row-major]}
//   schedule  {"s": s, "steps": [[j, ...], ...]}  (1-based actuators)
//   vector    [x_1, ..., x_n]
//   inputs    {"inputs": [[u_1, ..., u_m], ...]}
//
// CSV files have a header row and LF line endings; reals are written in the
// shortest form that round-trips, empty fields mean "no value".
//
// Readers throw InvalidArgument on unreadable files, malformed JSON and
// shape mismatches.

#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sparse_sched/baselines.hpp"
#include "sparse_sched/experiments.hpp"
#include "sparse_sched/greedy.hpp"
#include "sparse_sched/linear_system.hpp"
#include "sparse_sched/synthesis.hpp"

namespace sparse_sched::io {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

// Shortest round-trip decimal form.
std::string format_double(double x);

Json system_to_json(const LinearSystem& sys);
LinearSystem system_from_json(const Json& j);
LinearSystem read_system(const std::string& path);

Json schedule_to_json(const ActuatorSchedule& schedule);
ActuatorSchedule schedule_from_json(const Json& j);
ActuatorSchedule read_schedule(const std::string& path);

Eigen::VectorXd vector_from_json(const Json& j);
Eigen::VectorXd read_vector(const std::string& path);

Json diagnostics_to_json(const GreedyDiagnostics& diag, bool full_rank);
Json inputs_to_json(const InputSequence& inputs);

std::string input_mode_name(InputMode mode);
InputMode parse_input_mode(const std::string& name);

// Accepts the ExperimentConfig field names; unknown keys are rejected.
ExperimentConfig experiment_config_from_json(const Json& j);
ExperimentConfig read_experiment_config(const std::string& path);

void write_ensemble_csv(std::ostream& out, const std::vector<EnsembleRow>& rows);
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
void write_cdf_csv(std::ostream& out, const std::vector<CdfRow>& rows);
void write_ratio_csv(std::ostream& out, const std::vector<RatioRow>& rows);
void write_baseline_csv(std::ostream& out, const std::vector<BaselineRow>& rows);

}  // namespace sparse_sched::io
