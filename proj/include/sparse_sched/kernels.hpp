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

// Dense double-precision inner loops used by the scheduler and the oracles.
//
// Every kernel has a scalar reference implementation. SIMD variants (AVX2+FMA
// on x86-64, NEON on AArch64) are compiled when the target architecture
// allows it and are selected at runtime once, on first use of kernels().
// Setting SPARSE_SCHED_SIMD=scalar|avx2|neon in the environment forces a
// variant; an unavailable request falls back to scalar.
//
// Matrices are square, column-major, with leading dimension n (the layout of
// Eigen::MatrixXd). SIMD variants reorder floating-point sums and use fused
// multiply-add, so they agree with the scalar reference to rounding, not
// bit-for-bit.

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace sparse_sched::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

struct KernelSet {
  Isa isa;

  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t len);

  // y = M x, M is n x n column-major.
  void (*matvec)(const double* m, const double* x, double* y, std::size_t n);

  // M += alpha * u u^T, full (both triangles) n x n column-major update.
  void (*rank_one_update)(double* m, const double* u, double alpha,
                          std::size_t n);
};

// Scalar reference implementations. Always available.
const KernelSet& scalar_kernels();

// The set picked for this process (CPU support + SPARSE_SCHED_SIMD override).
const KernelSet& kernels();

// Every variant that was compiled in and is supported by the running CPU,
// scalar first. Used by the equivalence tests.
std::vector<const KernelSet*> available_kernel_sets();

// Incremental trace decrease of (W + eps I)^{-1} when v v^T is added to W,
// given M = (W + eps I)^{-1}:
//
//   gain = (v^T M^2 v) / (1 + v^T M v) = ||M v||^2 / (1 + v^T M v).
//
// `scratch` must hold n doubles. Returns 0 for v = 0.
double trace_decrease(const KernelSet& ks, const double* m, const double* v,
                      double* scratch, std::size_t n);

// Sherman-Morrison downdate for M = (W + eps I)^{-1} after W += v v^T:
//
//   M <- M - (M v)(M v)^T / (1 + v^T M v).
//
// Returns the denominator 1 + v^T M v; the update is skipped (and the
// denominator still returned) when it is not a finite positive number.
double sherman_morrison_update(const KernelSet& ks, double* m, const double* v,
                               double* scratch, std::size_t n);

}  // namespace sparse_sched::kernels
