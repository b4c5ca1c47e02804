// Copyright 2026 The vczsim Authors
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

namespace vcz {

/// Runs `job(0) .. job(n_jobs-1)` on up to `n_workers` threads.
///
/// Jobs are handed out from a shared counter, so the assignment of jobs to
/// threads is nondeterministic — each job must write only to its own
/// preallocated result slot.  Aggregating slots afterwards in index order
/// makes every downstream artifact independent of the worker count.
///
/// n_workers <= 0 selects std::thread::hardware_concurrency().  With one
/// worker (or one job) everything runs on the calling thread.  The first
/// exception thrown by a job is rethrown on the calling thread after all
/// workers have stopped picking up new jobs.
void run_jobs(std::size_t n_jobs, int n_workers,
              const std::function<void(std::size_t)>& job);

/// Resolved worker count: `requested` if positive, hardware concurrency
/// (at least 1) otherwise.
int resolve_workers(int requested);

}  // namespace vcz

