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

// NEON variants. Advanced SIMD is mandatory on AArch64, so no runtime probe
// is needed beyond compiling this file for that architecture.

#include <arm_neon.h>

#include <cstddef>

#include "variants.hpp"

namespace sparse_sched::kernels::detail {
namespace {

double dot_neon(const double* a, const double* b, std::size_t len) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  for (; i + 2 <= len; i += 2) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < len; ++i) acc += a[i] * b[i];
  return acc;
}

inline void axpy_neon(double* y, const double* col, double s, std::size_t n) {
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), vld1q_f64(col + i), vs));
  }
  for (; i < n; ++i) y[i] += col[i] * s;
}

void matvec_neon(const double* m, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = 0.0;
  for (std::size_t j = 0; j < n; ++j) axpy_neon(y, m + j * n, x[j], n);
}

void rank_one_update_neon(double* m, const double* u, double alpha,
                          std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) axpy_neon(m + j * n, u, alpha * u[j], n);
}

}  // namespace

const KernelSet& neon_kernels() {
  static const KernelSet set{Isa::kNeon, &dot_neon, &matvec_neon,
                             &rank_one_update_neon};
  return set;
}

}  // namespace sparse_sched::kernels::detail
