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

#include <cstddef>
#include <functional>

namespace sparse_sched {

// Worker threads to use: SPARSE_SCHED_THREADS if set to a positive integer,
// otherwise (unset or 0) std::thread::hardware_concurrency(), at least 1.
int worker_count();

// Calls fn(i) for every i in [0, count) on up to worker_count() threads.
// Indices are handed out dynamically; fn must only write to per-index
// state. The first exception thrown by any call is rethrown after all
// workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace sparse_sched
