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

#include "sparse_sched/kernels.hpp"

namespace sparse_sched::kernels::detail {

// Defined only in the translation unit compiled for the matching
// architecture; dispatch.cpp references them behind the same guards.
#if defined(__x86_64__) || defined(_M_X64)
const KernelSet& avx2_kernels();
#endif

#if defined(__aarch64__) || defined(_M_ARM64)
const KernelSet& neon_kernels();
#endif

}  // namespace sparse_sched::kernels::detail
