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

#include <cmath>
#include <cstdlib>
#include <string_view>
#include <vector>

#include "sparse_sched/kernels.hpp"
#include "variants.hpp"

namespace sparse_sched::kernels {
namespace {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && \
    (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelSet* find_set(Isa isa) {
  for (const KernelSet* set : available_kernel_sets()) {
    if (set->isa == isa) return set;
  }
  return nullptr;
}

const KernelSet& select_kernels() {
  if (const char* env = std::getenv("SPARSE_SCHED_SIMD")) {
    const std::string_view want(env);
    for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
      if (want == isa_name(isa)) {
        const KernelSet* set = find_set(isa);
        return set != nullptr ? *set : scalar_kernels();
      }
    }
  }
  return *available_kernel_sets().back();
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

std::vector<const KernelSet*> available_kernel_sets() {
  std::vector<const KernelSet*> sets{&scalar_kernels()};
#if defined(__x86_64__) || defined(_M_X64)
  if (cpu_has_avx2()) sets.push_back(&detail::avx2_kernels());
#endif
#if defined(__aarch64__) || defined(_M_ARM64)
  sets.push_back(&detail::neon_kernels());
#endif
  return sets;
}

const KernelSet& kernels() {
  static const KernelSet& selected = select_kernels();
  return selected;
}

double trace_decrease(const KernelSet& ks, const double* m, const double* v,
                      double* scratch, std::size_t n) {
  ks.matvec(m, v, scratch, n);
  const double quad = ks.dot(v, scratch, n);
  const double num = ks.dot(scratch, scratch, n);
  if (num == 0.0) return 0.0;
  return num / (1.0 + quad);
}

double sherman_morrison_update(const KernelSet& ks, double* m, const double* v,
                               double* scratch, std::size_t n) {
  ks.matvec(m, v, scratch, n);
  const double denom = 1.0 + ks.dot(v, scratch, n);
  if (!std::isfinite(denom) || denom <= 0.0) return denom;
  ks.rank_one_update(m, scratch, -1.0 / denom, n);
  return denom;
}

}  // namespace sparse_sched::kernels
