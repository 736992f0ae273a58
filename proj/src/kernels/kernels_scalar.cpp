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

#include <cstddef>

#include "sparse_sched/kernels.hpp"

namespace sparse_sched::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += a[i] * b[i];
  return acc;
}

void matvec_scalar(const double* m, const double* x, double* y,
                   std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double xj = x[j];
    const double* col = m + j * n;
    for (std::size_t i = 0; i < n; ++i) y[i] += col[i] * xj;
  }
}

void rank_one_update_scalar(double* m, const double* u, double alpha,
                            std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double s = alpha * u[j];
    double* col = m + j * n;
    for (std::size_t i = 0; i < n; ++i) col[i] += s * u[i];
  }
}

}  // namespace

const KernelSet& scalar_kernels() {
  static const KernelSet set{Isa::kScalar, &dot_scalar, &matvec_scalar,
                             &rank_one_update_scalar};
  return set;
}

}  // namespace sparse_sched::kernels
