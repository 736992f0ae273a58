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

#pragma once

#include <stdexcept>
#include <string>

namespace sparse_sched {

// Base for every error raised by the library. Callers that only care about
// "bad input vs. numerical trouble" can catch the subclasses.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes disagree, indices out of range, non-finite entries, bad parameters.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The system cannot satisfy the requested sparsity (uncontrollable, or
// s < n - rank(A)), or a brute-force search found no full-rank schedule.
class Infeasible : public Error {
 public:
  using Error::Error;
};

// A numerical procedure broke down and could not recover.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Minimum-energy synthesis on a rank-deficient Gramian. Carries the residual
// of the least-squares (minimum-norm) solution of C z = d.
class UnreachableTarget : public Error {
 public:
  UnreachableTarget(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace sparse_sched
