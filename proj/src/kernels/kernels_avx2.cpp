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

// AVX2 + FMA variants. Built without global -mavx2; each function carries a
// target attribute so the rest of the library stays baseline x86-64 and the
// dispatcher only calls these after a CPUID check.

#include <immintrin.h>

#include <cstddef>

#include "variants.hpp"

#define SPARSE_SCHED_AVX2 __attribute__((target("avx2,fma")))

namespace sparse_sched::kernels::detail {
namespace {

SPARSE_SCHED_AVX2 double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

SPARSE_SCHED_AVX2 double dot_avx2(const double* a, const double* b,
                                  std::size_t len) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= len; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                           acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < len; ++i) acc += a[i] * b[i];
  return acc;
}

// y += col * s over n entries.
SPARSE_SCHED_AVX2 inline void axpy_avx2(double* y, const double* col, double s,
                                        std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yi = _mm256_loadu_pd(y + i);
    yi = _mm256_fmadd_pd(_mm256_loadu_pd(col + i), vs, yi);
    _mm256_storeu_pd(y + i, yi);
  }
  for (; i < n; ++i) y[i] += col[i] * s;
}

SPARSE_SCHED_AVX2 void matvec_avx2(const double* m, const double* x, double* y,
                                   std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = 0.0;
  for (std::size_t j = 0; j < n; ++j) axpy_avx2(y, m + j * n, x[j], n);
}

SPARSE_SCHED_AVX2 void rank_one_update_avx2(double* m, const double* u,
                                            double alpha, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) axpy_avx2(m + j * n, u, alpha * u[j], n);
}

}  // namespace

const KernelSet& avx2_kernels() {
  static const KernelSet set{Isa::kAvx2, &dot_avx2, &matvec_avx2,
                             &rank_one_update_avx2};
  return set;
}

}  // namespace sparse_sched::kernels::detail
