// Copyright 2026 The ksep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KSEP_PARALLEL_H
#define KSEP_PARALLEL_H

#include <cstddef>
#include <functional>

namespace ksep {

/// Number of worker threads to use for a requested count; 0 means all cores.
int resolve_threads(int requested);

/// Calls body(i) for every i in [0, count) using up to `threads` workers.
/// Indices are split into contiguous chunks. The first exception thrown by
/// any worker is rethrown on the calling thread after all workers join.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)> &body);

}  // namespace ksep

#endif
