// Copyright 2026 The PolarFuse Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

namespace polarfuse {

// Global worker count for parallel_for. 0 = hardware concurrency.
void set_threads(int n);
int threads();

// Runs fn(i) for i in [0, n). Work items must write disjoint outputs; the
// split is a pure function of n, never of the thread count, so results are
// identical to a sequential run.
void parallel_for(long n, const std::function<void(long)>& fn);

} // namespace polarfuse
